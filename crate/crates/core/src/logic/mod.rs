//! Scale-stamped verdicts for asymptotic predicates.
//!
//! Every verdict is computed on a window of radius `W` and compares three
//! probe windows `W/2`, `3W/4` and `W`. Points farther than `3W/4` from the
//! basepoint form the escape zone: violations found there count as evidence
//! of unboundedness. Scales never exceed `W/4`, so an entourage cannot jump
//! across the escape zone.

mod cover;
mod flasque;
mod maps;
mod pairs;

use std::fmt;

use thiserror::Error;

use crate::spaces::{PointId, SpaceError};

pub use cover::{cover_characterizations, cover_verdict, is_refinement, shift_cover, CoverCheck};
pub use flasque::{flasque_verdict, FlasqueReport};
pub use maps::{closeness_verdict, coarse_map_verdict, coarsely_surjective_verdict, MapTable};
pub use pairs::{coentourage_verdict, is_bounded_subset, PairPredicate};

/// Witness lists are truncated to this many entries.
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("window {window} is too small for scale {scale} (need window >= 4 * scale)")]
    WindowTooSmall { window: u64, scale: u64 },
    #[error("the empty family only covers bounded targets")]
    EmptyFamilyOnUnbounded,
    #[error("cover characterizations disagree: pairwise {pairwise:?}, divergence {divergence:?}")]
    DisagreeingCharacterizations { pairwise: Status, divergence: Status },
    #[error("maps have different domains or codomains")]
    DomainMismatch,
    #[error("iterate {step} left the tabulated window; reduce the horizon or enlarge the window")]
    IterateEscapesWindow { step: u64 },
    #[error("image of {0} is not materialized in the codomain")]
    ImageOutsideWindow(PointId),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Holds,
    Inconclusive,
    Fails,
}

impl Status {
    /// Fails beats Inconclusive beats Holds.
    pub fn combine(self, other: Status) -> Status {
        self.max(other)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Witness {
    Point(PointId),
    Pair(PointId, PointId),
}

/// Bound observed at one scale on the full window (`None`: nothing observed).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaleBound {
    pub scale: u64,
    pub bound: Option<u64>,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    /// Largest scale checked.
    pub scale: u64,
    /// Window radius checked.
    pub window: u64,
    pub witness: Vec<Witness>,
    /// On Holds: all violations sit inside the ball of this radius (or the
    /// stabilized displacement bound, depending on the predicate).
    pub bound: Option<u64>,
    pub per_scale: Vec<ScaleBound>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    /// Merges per-scale results into one verdict stamped with `(R, W)`.
    pub(crate) fn from_scales(window: u64, per_scale: Vec<ScaleBound>, mut witness: Vec<Witness>) -> Self {
        let status = per_scale.iter().fold(Status::Holds, |s, b| s.combine(b.status));
        let scale = per_scale.iter().map(|b| b.scale).max().unwrap_or(0);
        let bound = (status == Status::Holds)
            .then(|| per_scale.iter().filter_map(|b| b.bound).max().unwrap_or(0));
        if status != Status::Fails {
            witness.clear();
        }
        witness.truncate(MAX_WITNESSES);
        Verdict { status, scale, window, witness, bound, per_scale }
    }

    /// Combines verdicts of independent conditions.
    pub(crate) fn all_of(parts: &[&Verdict]) -> Verdict {
        let status = parts.iter().fold(Status::Holds, |s, v| s.combine(v.status));
        let mut witness = Vec::new();
        let mut per_scale = Vec::new();
        for v in parts {
            if v.status == status && status == Status::Fails {
                witness.extend(v.witness.iter().copied());
            }
            per_scale.extend(v.per_scale.iter().copied());
        }
        witness.truncate(MAX_WITNESSES);
        Verdict {
            status,
            scale: parts.iter().map(|v| v.scale).max().unwrap_or(0),
            window: parts.iter().map(|v| v.window).max().unwrap_or(0),
            witness,
            bound: (status == Status::Holds).then(|| parts.iter().filter_map(|v| v.bound).max().unwrap_or(0)),
            per_scale,
        }
    }
}

/// The probe windows `W/2`, `3W/4`, `W`.
pub fn probe_windows(w: u64) -> [u64; 3] {
    [w / 2, 3 * w / 4, w]
}

/// Radii strictly above this lie in the escape zone.
pub fn escape_radius(w: u64) -> u64 {
    3 * w / 4
}

pub(crate) fn check_scales(window: u64, scale: u64) -> Result<(), LogicError> {
    if window < 4 * scale {
        Err(LogicError::WindowTooSmall { window, scale })
    } else {
        Ok(())
    }
}

/// Status for "the violating set is bounded": `radii` are the distances to
/// the basepoint at which violations occur.
pub(crate) fn radial_status(window: u64, limit: u64, radii: &[u64]) -> (Status, Option<u64>) {
    let [_, mid, _] = probe_windows(window);
    let at = |p: u64| radii.iter().copied().filter(|&m| m <= p).max();
    let top = at(window);
    if radii.iter().any(|&m| m > escape_radius(window)) {
        (Status::Fails, top)
    } else if at(mid) == top && top.is_none_or(|b| b <= limit) {
        (Status::Holds, top)
    } else {
        (Status::Inconclusive, top)
    }
}

/// Status for "a supremum stays bounded": `samples` are `(radius, value)`
/// pairs; the supremum over each probe window must stop growing.
pub(crate) fn growth_status(window: u64, samples: &[(u64, u64)]) -> (Status, Option<u64>) {
    let [low, mid, top] = probe_windows(window);
    let sup = |p: u64| samples.iter().filter(|s| s.0 <= p).map(|s| s.1).max();
    let (a, b, c) = (sup(low), sup(mid), sup(top));
    if b == c {
        (Status::Holds, c)
    } else if a < b && b < c {
        (Status::Fails, c)
    } else {
        (Status::Inconclusive, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(Status::Holds.combine(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.combine(Status::Fails), Status::Fails);
        assert_eq!(Status::Holds.combine(Status::Holds), Status::Holds);
    }

    #[test]
    fn radial() {
        assert_eq!(radial_status(64, 60, &[1, 3, 2]), (Status::Holds, Some(3)));
        assert_eq!(radial_status(64, 60, &[]), (Status::Holds, None));
        assert_eq!(radial_status(64, 60, &[3, 49]).0, Status::Fails);
        assert_eq!(radial_status(64, 60, &[3, 40]), (Status::Holds, Some(40)));
        assert_eq!(radial_status(64, 2, &[3]).0, Status::Inconclusive);
    }

    #[test]
    fn growth() {
        assert_eq!(growth_status(64, &[(10, 5), (60, 5)]), (Status::Holds, Some(5)));
        assert_eq!(growth_status(64, &[(10, 10), (40, 40), (60, 60)]).0, Status::Fails);
        assert_eq!(growth_status(64, &[(10, 10), (60, 60)]).0, Status::Inconclusive);
    }
}
