use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{AbelianGroupFG, CohomologyError, IntegerMatrix};
use crate::ends::{ends_of_mask, restrict_ends, EndCount, EndsError, EndsParams, EndsReport};
use crate::logic::{cover_verdict, Verdict};
use crate::spaces::{Mask, ScaleSchedule, SpaceError, SpacePresentation, Subspace};

/// Window, cover-check schedule and ends grid shared by every piece of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechParams {
    pub window: u64,
    pub sched: ScaleSchedule,
    pub ends: EndsParams,
}

impl CechParams {
    /// Scales `1, 2, 4, ...` up to `W/8` and the default ends grid.
    pub fn for_window(w: u64) -> Result<Self, SpaceError> {
        let scales: Vec<u64> = std::iter::successors(Some(1u64), |r| Some(r * 2)).take_while(|&r| 8 * r <= w.max(8)).collect();
        Ok(CechParams { window: w, sched: ScaleSchedule::for_window(scales, w.max(4))?, ends: EndsParams::for_window(w) })
    }
}

/// Basis vector of `C^k`: one end of `U_{i_0} ∩ ... ∩ U_{i_k}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisElement {
    pub tuple: Vec<usize>,
    pub end: usize,
}

#[derive(Clone, Debug)]
pub struct CechComplex {
    pub cover_len: usize,
    pub coeff: AbelianGroupFG,
    pub window: u64,
    pub params: CechParams,
    /// The cover check that admitted the complex.
    pub verdict: Verdict,
    bases: Vec<Vec<BasisElement>>,
    coboundaries: Vec<IntegerMatrix>,
    sections: BTreeMap<Vec<usize>, (usize, EndsReport)>,
}

impl CechComplex {
    /// Number of degrees `0..K+1` with `K = cover size - 1`.
    pub fn degrees(&self) -> usize {
        self.cover_len
    }

    pub fn dim(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    pub fn basis(&self, k: usize) -> &[BasisElement] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    /// `D_k : C^k -> C^{k+1}` as a `dim C^{k+1} x dim C^k` matrix.
    pub fn coboundary(&self, k: usize) -> &IntegerMatrix {
        &self.coboundaries[k]
    }

    /// Ends report of an intersection with at least one end.
    pub fn section(&self, tuple: &[usize]) -> Option<&EndsReport> {
        self.sections.get(tuple).map(|(_, r)| r)
    }

    /// Index of the first basis vector of `tuple` within its degree.
    pub fn offset(&self, tuple: &[usize]) -> Option<usize> {
        self.sections.get(tuple).map(|(o, _)| *o)
    }

    /// Exact check of `D_{k+1} D_k = 0` in every degree.
    pub fn check_square_zero(&self) -> Result<(), CohomologyError> {
        for k in 1..self.coboundaries.len() {
            if !self.coboundaries[k].mul(&self.coboundaries[k - 1]).is_zero() {
                return Err(CohomologyError::InvalidComplex(format!("D_{k} D_{} != 0", k - 1)));
            }
        }
        Ok(())
    }
}

fn finite_report(space: &SpacePresentation, mask: &Mask, params: &CechParams, tuple: &[usize]) -> Result<Option<EndsReport>, CohomologyError> {
    if mask.count() == 0 {
        return Ok(None);
    }
    let report = ends_of_mask(space, mask, &params.ends, params.window)?;
    match report.count {
        EndCount::InfiniteAtCap(_) => Err(CohomologyError::InfiniteEndsInIntersection(tuple.to_vec())),
        EndCount::Finite(0) => Ok(None),
        EndCount::Finite(_) => Ok(Some(report)),
    }
}

/// Builds the alternating Čech complex of `cover` over `target`.
///
/// Intersections without ends contribute nothing, and neither do the
/// tuples containing them.
pub fn cech_complex(
    space: &SpacePresentation,
    target: &Subspace,
    cover: &[Subspace],
    coeff: &AbelianGroupFG,
    params: &CechParams,
) -> Result<CechComplex, CohomologyError> {
    let w = params.window;
    let verdict = cover_verdict(space, target, cover, &params.sched, w)?;
    if !verdict.holds() {
        return Err(CohomologyError::CoverNotVerified(verdict.status));
    }
    let t = target.mask(space, w);
    let masks: Vec<Mask> = cover.iter().map(|u| u.mask(space, w).and(&t)).collect();
    let n = cover.len();

    type Level = Vec<(Vec<usize>, Mask, EndsReport)>;
    let mut levels: Vec<Level> = Vec::new();
    let mut candidates: Vec<(Vec<usize>, Mask)> = masks.iter().cloned().enumerate().map(|(i, m)| (vec![i], m)).collect();
    while !candidates.is_empty() {
        let computed: Vec<Option<(Vec<usize>, Mask, EndsReport)>> = candidates
            .into_par_iter()
            .map(|(tuple, mask)| Ok(finite_report(space, &mask, params, &tuple)?.map(|r| (tuple, mask, r))))
            .collect::<Result<_, CohomologyError>>()?;
        let level: Level = computed.into_iter().flatten().collect();
        let kept: HashSet<&[usize]> = level.iter().map(|(t, _, _)| t.as_slice()).collect();
        candidates = Vec::new();
        for (tuple, mask, _) in &level {
            for j in tuple.last().unwrap() + 1..n {
                let mut next = tuple.clone();
                next.push(j);
                let faces_kept = (0..next.len() - 1).all(|skip| {
                    let face: Vec<usize> = next.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
                    kept.contains(face.as_slice())
                });
                if faces_kept {
                    candidates.push((next, mask.and(&masks[j])));
                }
            }
        }
        levels.push(level);
    }

    let mut bases: Vec<Vec<BasisElement>> = vec![Vec::new(); n];
    let mut sections = BTreeMap::new();
    for (k, level) in levels.into_iter().enumerate() {
        for (tuple, _, report) in level {
            let e = report.count.finite().expect("finite");
            let offset = bases[k].len();
            bases[k].extend((0..e).map(|end| BasisElement { tuple: tuple.clone(), end }));
            sections.insert(tuple, (offset, report));
        }
    }

    let mut coboundaries = Vec::with_capacity(n);
    for k in 0..n {
        let next = bases.get(k + 1).map_or(0, Vec::len);
        let mut d = IntegerMatrix::zeros(next, bases[k].len());
        if k + 1 < n {
            for (tuple, (row0, report)) in sections.iter().filter(|(t, _)| t.len() == k + 2) {
                for nu in 0..tuple.len() {
                    let mut face = tuple.clone();
                    face.remove(nu);
                    let (col0, face_report) = &sections[&face];
                    let res = restrict_ends(report, face_report).map_err(|e| match e {
                        EndsError::AmbiguousAssignment { .. } | EndsError::NotNested => {
                            CohomologyError::AmbiguousEndRestriction(face.clone())
                        }
                        other => other.into(),
                    })?;
                    let sign = BigInt::from(if nu % 2 == 0 { 1 } else { -1 });
                    for (u, &v) in res.assignment.iter().enumerate() {
                        d.add_to(row0 + u, col0 + v, &sign);
                    }
                }
            }
        }
        coboundaries.push(d);
    }

    let cx = CechComplex {
        cover_len: n,
        coeff: coeff.clone(),
        window: w,
        params: params.clone(),
        verdict,
        bases,
        coboundaries,
        sections,
    };
    cx.check_square_zero()?;
    Ok(cx)
}
