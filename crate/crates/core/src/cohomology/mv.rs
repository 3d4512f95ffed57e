use num_bigint::BigInt;

use super::{cech_complex, cohomology, rank, smith_normal_form, AbelianGroupFG, CechComplex, CechParams, CohomologyError, CohomologyResult, IntegerMatrix};
use crate::ends::{ends_of_mask, restrict_ends, EndCount, EndsReport};
use crate::logic::{cover_verdict, Verdict};
use crate::spaces::{Mask, SpacePresentation, Subspace};

/// Rank bookkeeping at one node of the long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessNode {
    pub name: String,
    /// Rank of the kernel of the outgoing map.
    pub kernel_rank: usize,
    /// Rank of the image of the incoming map.
    pub image_rank: usize,
}

impl ExactnessNode {
    pub fn exact(&self) -> bool {
        self.kernel_rank == self.image_rank
    }
}

/// Low-degree Mayer-Vietoris sequence
/// `0 -> H^0(X) -> H^0(A) ⊕ H^0(B) -> H^0(A ∩ B) -> H^1(X) -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MayerVietorisReport {
    pub ends_union: usize,
    pub ends_a: usize,
    pub ends_b: usize,
    pub ends_intersection: usize,
    pub rank_iota: usize,
    pub rank_phi: usize,
    /// Inferred from the deficiency of `φ`.
    pub rank_delta: usize,
    pub h0_union: AbelianGroupFG,
    pub h0_pieces: AbelianGroupFG,
    pub h0_intersection: AbelianGroupFG,
    /// `H^1(A ∪ B)`, forced by exactness since the pieces have no `H^1`.
    pub h1_union: AbelianGroupFG,
    pub nodes: Vec<ExactnessNode>,
    pub verdict: Verdict,
}

impl MayerVietorisReport {
    pub fn exact(&self) -> bool {
        self.nodes.iter().all(ExactnessNode::exact)
    }
}

fn finite(report: &EndsReport) -> Result<usize, CohomologyError> {
    match report.count {
        EndCount::Finite(e) => Ok(e),
        EndCount::InfiniteAtCap(_) => Err(CohomologyError::InfiniteEnds),
    }
}

/// Restriction of sections along `small ⊆ large` as a 0/1 matrix
/// (rows: ends of `small`).
fn restriction_matrix(small: &EndsReport, large: &EndsReport) -> Result<IntegerMatrix, CohomologyError> {
    let res = restrict_ends(small, large)?;
    let mut m = IntegerMatrix::zeros(res.domain_ends, res.codomain_ends);
    for (u, &v) in res.assignment.iter().enumerate() {
        m.set(u, v, BigInt::from(1));
    }
    Ok(m)
}

/// Mayer-Vietoris rank exactness for the 2-cover `{A, B}` of `target`.
pub fn mayer_vietoris_report(
    space: &SpacePresentation,
    target: &Subspace,
    a: &Subspace,
    b: &Subspace,
    coeff: &AbelianGroupFG,
    params: &CechParams,
) -> Result<MayerVietorisReport, CohomologyError> {
    let w = params.window;
    let verdict = cover_verdict(space, target, &[a.clone(), b.clone()], &params.sched, w)?;
    if !verdict.holds() {
        return Err(CohomologyError::CoverNotVerified(verdict.status));
    }
    let x = target.mask(space, w);
    let ma = a.mask(space, w).and(&x);
    let mb = b.mask(space, w).and(&x);
    let mi = ma.and(&mb);
    let report = |m: &Mask| ends_of_mask(space, m, &params.ends, w);
    let (rx, ra, rb, ri) = (report(&x)?, report(&ma)?, report(&mb)?, report(&mi)?);
    let (ex, ea, eb, ei) = (finite(&rx)?, finite(&ra)?, finite(&rb)?, finite(&ri)?);

    // ι(s) = (s|A, s|B); φ(s1, s2) = s1|A∩B - s2|A∩B.
    let (a_to_x, b_to_x) = (restriction_matrix(&ra, &rx)?, restriction_matrix(&rb, &rx)?);
    let mut iota = IntegerMatrix::zeros(ea + eb, ex);
    for (i, j, v) in a_to_x.iter() {
        iota.set(i, j, v.clone());
    }
    for (i, j, v) in b_to_x.iter() {
        iota.set(ea + i, j, v.clone());
    }
    let (i_to_a, i_to_b) = (restriction_matrix(&ri, &ra)?, restriction_matrix(&ri, &rb)?);
    let mut phi = IntegerMatrix::zeros(ei, ea + eb);
    for (i, j, v) in i_to_a.iter() {
        phi.set(i, j, v.clone());
    }
    for (i, j, v) in i_to_b.iter() {
        phi.set(i, ea + j, -v);
    }
    let rank_iota = rank(&iota);
    let rank_phi = rank(&phi);
    let rank_delta = ei - rank_phi;

    let nodes = vec![
        ExactnessNode { name: "H0(X)".into(), kernel_rank: ex - rank_iota, image_rank: 0 },
        ExactnessNode { name: "H0(A)+H0(B)".into(), kernel_rank: ea + eb - rank_phi, image_rank: rank_iota },
        ExactnessNode { name: "H0(A^B)".into(), kernel_rank: ei - rank_delta, image_rank: rank_phi },
        ExactnessNode { name: "H1(X)".into(), kernel_rank: rank_delta, image_rank: rank_delta },
    ];
    Ok(MayerVietorisReport {
        ends_union: ex,
        ends_a: ea,
        ends_b: eb,
        ends_intersection: ei,
        rank_iota,
        rank_phi,
        rank_delta,
        h0_union: coeff.power(ex),
        h0_pieces: coeff.power(ea + eb),
        h0_intersection: coeff.power(ei),
        h1_union: coeff.power(rank_delta),
        nodes,
        verdict,
    })
}

/// Cohomology of two nested covers and the maps induced by refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementComparison {
    pub fine: CohomologyResult,
    pub coarse: CohomologyResult,
    /// `fine[j] ⊆ coarse[assignment[j]]`.
    pub assignment: Vec<usize>,
    /// Rank of `H^k(coarse) -> H^k(fine)` over the rationals.
    pub induced_ranks: Vec<usize>,
    /// Same groups in every degree and the induced maps have full rank.
    pub stabilized: bool,
}

/// Refinement cochain map `C^k(coarse) -> C^k(fine)`.
fn refinement_map(fine: &CechComplex, coarse: &CechComplex, sigma: &[usize], k: usize) -> Result<IntegerMatrix, CohomologyError> {
    let mut m = IntegerMatrix::zeros(fine.dim(k), coarse.dim(k));
    let mut seen = std::collections::HashSet::new();
    for e in fine.basis(k) {
        if !seen.insert(e.tuple.clone()) {
            continue;
        }
        let mut image: Vec<usize> = e.tuple.iter().map(|&j| sigma[j]).collect();
        // Sort, tracking the permutation sign; repeated indices give zero.
        let mut sign = 1i64;
        for i in 0..image.len() {
            for j in 0..image.len() - 1 - i {
                if image[j] > image[j + 1] {
                    image.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if image.windows(2).any(|p| p[0] == p[1]) {
            continue;
        }
        let (Some(small), Some(row0)) = (fine.section(&e.tuple), fine.offset(&e.tuple)) else { continue };
        let (Some(large), Some(col0)) = (coarse.section(&image), coarse.offset(&image)) else {
            return Err(CohomologyError::NotARefinement);
        };
        let res = restrict_ends(small, large).map_err(|_| CohomologyError::AmbiguousEndRestriction(image.clone()))?;
        for (u, &v) in res.assignment.iter().enumerate() {
            m.set(row0 + u, col0 + v, BigInt::from(sign));
        }
    }
    Ok(m)
}

/// Compares the Čech cohomology of `fine` and `coarse` covers of `target`.
pub fn refinement_comparison(
    space: &SpacePresentation,
    target: &Subspace,
    fine: &[Subspace],
    coarse: &[Subspace],
    coeff: &AbelianGroupFG,
    params: &CechParams,
) -> Result<RefinementComparison, CohomologyError> {
    let w = params.window;
    let t = target.mask(space, w);
    let coarse_masks: Vec<Mask> = coarse.iter().map(|u| u.mask(space, w).and(&t)).collect();
    let assignment = fine
        .iter()
        .map(|v| {
            let m = v.mask(space, w).and(&t);
            coarse_masks.iter().position(|c| m.is_subset(c))
        })
        .collect::<Option<Vec<usize>>>()
        .ok_or(CohomologyError::NotARefinement)?;

    let fcx = cech_complex(space, target, fine, coeff, params)?;
    let ccx = cech_complex(space, target, coarse, coeff, params)?;
    let (fh, ch) = (cohomology(&fcx)?, cohomology(&ccx)?);

    let top = fcx.degrees().max(ccx.degrees());
    let mut induced_ranks = Vec::with_capacity(top);
    for k in 0..top {
        if k >= fcx.degrees() || k >= ccx.degrees() || ccx.dim(k) == 0 || fcx.dim(k) == 0 {
            induced_ranks.push(0);
            continue;
        }
        let f = refinement_map(&fcx, &ccx, &assignment, k)?;
        let cycles = smith_normal_form(ccx.coboundary(k)).kernel_basis();
        let image = f.mul(&cycles);
        let boundaries = if k == 0 { IntegerMatrix::zeros(fcx.dim(0), 0) } else { fcx.coboundary(k - 1).clone() };
        induced_ranks.push(rank(&image.hstack(&boundaries)) - rank(&boundaries));
    }
    let betti = |h: &CohomologyResult, k: usize| h.integral.get(k).map_or(0, AbelianGroupFG::rank);
    let stabilized = (0..top).all(|k| {
        fh.group(k) == ch.group(k) && induced_ranks[k] == betti(&ch, k) && betti(&ch, k) == betti(&fh, k)
    });
    Ok(RefinementComparison { fine: fh, coarse: ch, assignment, induced_ranks, stabilized })
}
