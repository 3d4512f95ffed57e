//! Čech cohomology of coarse covers with constant coefficients.
//!
//! Sections of the constant sheaf `A` over `U` are `A^{e(U)}`, one copy per
//! end. Cochains are taken on strictly increasing index tuples; the
//! coboundary restricts sections along end inclusions with alternating
//! signs. Groups are computed over `Z` by Smith normal form and then
//! tensored with the coefficients through the universal coefficient
//! sequence.

mod cech;
mod group;
mod matrix;
mod mv;
mod snf;

use thiserror::Error;

use crate::ends::{ends, EndCount, EndsError, EndsParams};
use crate::logic::{LogicError, Status};
use crate::spaces::{SpaceError, SpacePresentation, Subspace};

pub use cech::{cech_complex, BasisElement, CechComplex, CechParams};
pub use group::AbelianGroupFG;
pub use matrix::IntegerMatrix;
pub use mv::{mayer_vietoris_report, refinement_comparison, ExactnessNode, MayerVietorisReport, RefinementComparison};
pub use snf::{rank, smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("cover check did not hold (status {0})")]
    CoverNotVerified(Status),
    #[error("infinitely many ends: sections are a free group of unbounded rank")]
    InfiniteEnds,
    #[error("intersection {0:?} has infinitely many ends")]
    InfiniteEndsInIntersection(Vec<usize>),
    #[error("end restriction into {0:?} is ambiguous")]
    AmbiguousEndRestriction(Vec<usize>),
    #[error("the fine cover does not refine the coarse cover")]
    NotARefinement,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid group `{0}`")]
    InvalidGroup(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Ends(#[from] EndsError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// `A(U) = A^{e(U)}`.
pub fn constant_sections(
    space: &SpacePresentation,
    u: &Subspace,
    coeff: &AbelianGroupFG,
    params: &EndsParams,
    w: u64,
) -> Result<AbelianGroupFG, CohomologyError> {
    match ends(space, u, params, w)?.count {
        EndCount::Finite(e) => Ok(coeff.power(e)),
        EndCount::InfiniteAtCap(_) => Err(CohomologyError::InfiniteEnds),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyResult {
    /// `H^k` with the requested coefficients, for `k = 0..=K`.
    pub groups: Vec<AbelianGroupFG>,
    /// `H^k` with integer coefficients.
    pub integral: Vec<AbelianGroupFG>,
    /// Ranks of `D_k`.
    pub ranks: Vec<usize>,
    /// `dim C^k`.
    pub dims: Vec<usize>,
    pub coeff: AbelianGroupFG,
    pub window: u64,
    pub params: EndsParams,
}

impl CohomologyResult {
    /// `H^k`; zero above the top degree.
    pub fn group(&self, k: usize) -> AbelianGroupFG {
        self.groups.get(k).cloned().unwrap_or_default()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.integral.iter().map(AbelianGroupFG::rank).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }
}

/// Cohomology of a Čech complex.
pub fn cohomology(cx: &CechComplex) -> Result<CohomologyResult, CohomologyError> {
    let top = cx.degrees();
    let dims: Vec<usize> = (0..top).map(|k| cx.dim(k)).collect();
    let forms: Vec<SmithForm> = (0..top).map(|k| smith_normal_form(cx.coboundary(k))).collect();
    let ranks: Vec<usize> = forms.iter().map(SmithForm::rank).collect();
    let integral: Vec<AbelianGroupFG> = (0..top)
        .map(|k| {
            let below = if k == 0 { 0 } else { ranks[k - 1] };
            let betti = dims[k] - ranks[k] - below;
            let torsion = if k == 0 { Vec::new() } else { forms[k - 1].torsion().map(|d| d.magnitude().clone()).collect() };
            AbelianGroupFG::new(betti, torsion)
        })
        .collect();
    if integral.iter().all(AbelianGroupFG::is_free) {
        let chi: i64 = integral.iter().enumerate().map(|(k, g)| if k % 2 == 0 { g.rank() as i64 } else { -(g.rank() as i64) }).sum();
        let expected: i64 = dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        if chi != expected {
            return Err(CohomologyError::InvalidComplex(format!("Euler characteristic {chi} != {expected}")));
        }
    }
    let groups = (0..top)
        .map(|k| {
            let next = integral.get(k + 1).cloned().unwrap_or_default();
            integral[k].tensor(&cx.coeff).direct_sum(&next.tor(&cx.coeff))
        })
        .collect();
    Ok(CohomologyResult {
        groups,
        integral,
        ranks,
        dims,
        coeff: cx.coeff.clone(),
        window: cx.window,
        params: cx.params.ends.clone(),
    })
}
