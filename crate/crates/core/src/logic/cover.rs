use rayon::prelude::*;

use super::pairs::{bounded_mask_verdict, scans_verdict};
use super::{check_scales, LogicError, Verdict};
use crate::spaces::{Mask, PointId, ScaleSchedule, SpacePresentation, Subspace};

/// Both characterizations of a coarse cover, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCheck {
    /// `target² \ ⋃ U_i²` is a coentourage.
    pub pairwise: Verdict,
    /// `target ∩ E_r[target \ U_1] ∩ ... ∩ E_r[target \ U_n]` is bounded for every scale.
    pub divergence: Verdict,
}

impl CoverCheck {
    pub fn agree(&self) -> bool {
        self.pairwise.status == self.divergence.status
    }

    pub fn combined(&self) -> Verdict {
        Verdict::all_of(&[&self.pairwise, &self.divergence])
    }
}

/// `E_r[U]` over the window.
pub(crate) fn thicken(space: &SpacePresentation, mask: &Mask, r: u64, w: u64) -> Mask {
    if r == 0 {
        return mask.clone();
    }
    if space.is_geodesic() {
        let step = space.neighborhood(1);
        let mut out = mask.clone();
        let mut frontier: Vec<PointId> = mask.ids().collect();
        for _ in 0..r {
            let mut next = Vec::new();
            for &x in &frontier {
                step.for_each(x, w, &mut |y| {
                    if !out.0[y.index()] {
                        out.0[y.index()] = true;
                        next.push(y);
                    }
                });
            }
            frontier = next;
        }
        return out;
    }
    let nb = space.neighborhood(r);
    let n = space.window_len(w);
    Mask(
        (0..n as u32)
            .into_par_iter()
            .map(|x| {
                let mut hit = false;
                nb.for_each(PointId(x), w, &mut |y| hit |= mask.get(y));
                hit
            })
            .collect(),
    )
}

/// Evaluates both cover characterizations without comparing them.
pub fn cover_characterizations(
    space: &SpacePresentation,
    target: &Subspace,
    family: &[Subspace],
    sched: &ScaleSchedule,
    w: u64,
) -> Result<CoverCheck, LogicError> {
    space.check_window(w)?;
    check_scales(w, sched.max_scale())?;

    let target_mask = target.mask(space, w);
    let masks: Vec<Mask> = family.iter().map(|u| u.mask(space, w)).collect();

    // Bit i of `member[x]` records x ∈ U_i; pairs of target points sharing
    // no bit lie outside every square.
    let words = family.len().div_ceil(64).max(1);
    let mut member = vec![0u64; target_mask.len() * words];
    for (i, m) in masks.iter().enumerate() {
        for x in m.ids() {
            member[x.index() * words + i / 64] |= 1 << (i % 64);
        }
    }
    let bits = |x: PointId| &member[x.index() * words..(x.index() + 1) * words];
    let pairwise = scans_verdict(space, sched, w, |x, y| {
        target_mask.get(x) && target_mask.get(y) && bits(x).iter().zip(bits(y)).all(|(a, b)| a & b == 0)
    });

    let rests: Vec<Mask> = masks.iter().map(|m| target_mask.and(&m.not())).collect();
    let per_scale: Vec<Verdict> = sched
        .scales()
        .par_iter()
        .map(|&r| {
            let mut core = target_mask.clone();
            for rest in &rests {
                core = core.and(&thicken(space, rest, r, w));
            }
            bounded_mask_verdict(space, &core, w, r)
        })
        .collect();
    let refs: Vec<&Verdict> = per_scale.iter().collect();
    let divergence = Verdict::all_of(&refs);
    Ok(CoverCheck { pairwise, divergence })
}

/// Checks that `family` coarsely covers `target`.
///
/// Both characterizations are evaluated and must agree on their status.
pub fn cover_verdict(
    space: &SpacePresentation,
    target: &Subspace,
    family: &[Subspace],
    sched: &ScaleSchedule,
    w: u64,
) -> Result<Verdict, LogicError> {
    let check = cover_characterizations(space, target, family, sched, w)?;
    if family.is_empty() && !check.divergence.holds() {
        return Err(LogicError::EmptyFamilyOnUnbounded);
    }
    if !check.agree() {
        return Err(LogicError::DisagreeingCharacterizations {
            pairwise: check.pairwise.status,
            divergence: check.divergence.status,
        });
    }
    Ok(check.combined())
}

/// Thickens a cover and its target: returns `(E_r[U_i])_i` and `E_r[Y]` as
/// explicit subspaces over the window.
pub fn shift_cover(
    space: &SpacePresentation,
    r: u64,
    family: &[Subspace],
    target: &Subspace,
    w: u64,
) -> Result<(Vec<Subspace>, Subspace), LogicError> {
    space.check_window(w)?;
    check_scales(w, r)?;
    let shifted = family
        .iter()
        .map(|u| thicken(space, &u.mask(space, w), r, w).to_subspace())
        .collect();
    Ok((shifted, thicken(space, &target.mask(space, w), r, w).to_subspace()))
}

/// Finds `σ` with `fine[j] ⊆ coarse[σ(j)]` on the window, taking the
/// smallest admissible index for each `j`.
pub fn is_refinement(
    space: &SpacePresentation,
    fine: &[Subspace],
    coarse: &[Subspace],
    w: u64,
) -> Option<Vec<usize>> {
    let coarse: Vec<Mask> = coarse.iter().map(|u| u.mask(space, w)).collect();
    fine.iter()
        .map(|v| {
            let m = v.mask(space, w);
            coarse.iter().position(|c| m.is_subset(c))
        })
        .collect()
}
