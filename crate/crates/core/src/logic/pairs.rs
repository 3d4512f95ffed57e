use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use super::{check_scales, escape_radius, radial_status, LogicError, ScaleBound, Verdict, Witness, MAX_WITNESSES};
use crate::spaces::{Mask, PointId, ScaleSchedule, SpacePresentation, Subspace};

/// A subset of `X x X`, given by a membership predicate on pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairPredicate {
    /// `U x U`.
    Square(Subspace),
    /// `U x V`.
    Cross(Subspace, Subspace),
    /// Complement of `U_1^2 ∪ ... ∪ U_n^2`.
    OutsideSquares(Vec<Subspace>),
    Diagonal,
    /// Graph `{(x, f(x))}` of a self-map tabulated by id.
    Graph(Vec<Option<PointId>>),
    Explicit(Vec<(PointId, PointId)>),
    Not(Box<PairPredicate>),
    And(Vec<PairPredicate>),
    Or(Vec<PairPredicate>),
}

impl PairPredicate {
    pub fn and(self, other: PairPredicate) -> Self {
        PairPredicate::And(vec![self, other])
    }

    pub fn or(self, other: PairPredicate) -> Self {
        PairPredicate::Or(vec![self, other])
    }

    pub fn not(self) -> Self {
        PairPredicate::Not(Box::new(self))
    }

    pub(crate) fn compile(&self, space: &SpacePresentation, w: u64) -> Compiled {
        match self {
            PairPredicate::Square(u) => Compiled::Square(u.mask(space, w)),
            PairPredicate::Cross(u, v) => Compiled::Cross(u.mask(space, w), v.mask(space, w)),
            PairPredicate::OutsideSquares(f) => {
                Compiled::Outside(f.iter().map(|u| u.mask(space, w)).collect())
            }
            PairPredicate::Diagonal => Compiled::Diagonal,
            PairPredicate::Graph(t) => Compiled::Graph(t.clone()),
            PairPredicate::Explicit(p) => Compiled::Explicit(p.iter().copied().collect()),
            PairPredicate::Not(p) => Compiled::Not(Box::new(p.compile(space, w))),
            PairPredicate::And(v) => Compiled::And(v.iter().map(|p| p.compile(space, w)).collect()),
            PairPredicate::Or(v) => Compiled::Or(v.iter().map(|p| p.compile(space, w)).collect()),
        }
    }

    /// Membership of a single pair.
    pub fn contains(&self, space: &SpacePresentation, x: PointId, y: PointId) -> bool {
        let w = space.radius(x).max(space.radius(y));
        self.compile(space, w).eval(x, y)
    }
}

pub(crate) enum Compiled {
    Square(Mask),
    Cross(Mask, Mask),
    Outside(Vec<Mask>),
    Diagonal,
    Graph(Vec<Option<PointId>>),
    Explicit(HashSet<(PointId, PointId)>),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

impl Compiled {
    #[inline]
    pub(crate) fn eval(&self, x: PointId, y: PointId) -> bool {
        match self {
            Compiled::Square(m) => m.get(x) && m.get(y),
            Compiled::Cross(a, b) => a.get(x) && b.get(y),
            Compiled::Outside(f) => !f.iter().any(|m| m.get(x) && m.get(y)),
            Compiled::Diagonal => x == y,
            Compiled::Graph(t) => t.get(x.index()).copied().flatten() == Some(y),
            Compiled::Explicit(s) => s.contains(&(x, y)),
            Compiled::Not(p) => !p.eval(x, y),
            Compiled::And(v) => v.iter().all(|p| p.eval(x, y)),
            Compiled::Or(v) => v.iter().any(|p| p.eval(x, y)),
        }
    }
}

#[derive(Default)]
pub(crate) struct PairScan {
    radii: BTreeSet<u64>,
    escapes: Vec<(PointId, PointId)>,
}

impl PairScan {
    fn merge(mut self, other: PairScan) -> PairScan {
        self.radii.extend(other.radii);
        self.escapes.extend(other.escapes);
        self.escapes.sort();
        self.escapes.truncate(MAX_WITNESSES);
        self
    }
}

/// Scans `S_r = {(x, y) in C : d(x, y) <= r}` on the window and records the
/// distinct radii `max(|x|, |y|)` of its pairs plus the first escape-zone pairs.
pub(crate) fn scan_pairs<F>(space: &SpacePresentation, pred: F, r: u64, w: u64) -> PairScan
where
    F: Fn(PointId, PointId) -> bool + Sync,
{
    let nb = space.neighborhood(r);
    let esc = escape_radius(w);
    let n = space.window_len(w);
    (0..n as u32)
        .into_par_iter()
        .fold(PairScan::default, |mut acc, x| {
            let x = PointId(x);
            let rx = space.radius(x);
            nb.for_each(x, w, &mut |y| {
                if pred(x, y) {
                    let m = rx.max(space.radius(y));
                    acc.radii.insert(m);
                    if m > esc && acc.escapes.len() < MAX_WITNESSES {
                        acc.escapes.push((x, y));
                    }
                }
            });
            acc
        })
        .reduce(PairScan::default, PairScan::merge)
}

/// Checks that `C ∩ E_r` lies in a bounded square for every scale `r` of
/// the schedule.
pub fn coentourage_verdict(
    space: &SpacePresentation,
    c: &PairPredicate,
    sched: &ScaleSchedule,
    w: u64,
) -> Result<Verdict, LogicError> {
    space.check_window(w)?;
    check_scales(w, sched.max_scale())?;
    let compiled = c.compile(space, w);
    Ok(scans_verdict(space, sched, w, |x, y| compiled.eval(x, y)))
}

/// Per-scale coentourage verdict for a pair predicate given as a closure.
pub(crate) fn scans_verdict<F>(space: &SpacePresentation, sched: &ScaleSchedule, w: u64, pred: F) -> Verdict
where
    F: Fn(PointId, PointId) -> bool + Sync,
{
    let mut per_scale = Vec::new();
    let mut witness = Vec::new();
    for &r in sched.scales() {
        let scan = scan_pairs(space, &pred, r, w);
        let radii: Vec<u64> = scan.radii.into_iter().collect();
        let (status, bound) = radial_status(w, w - r, &radii);
        per_scale.push(ScaleBound { scale: r, bound, status });
        witness.extend(scan.escapes.into_iter().map(|(x, y)| Witness::Pair(x, y)));
    }
    Verdict::from_scales(w, per_scale, witness)
}

/// Checks that `U` lies in a ball around the basepoint.
pub fn is_bounded_subset(space: &SpacePresentation, u: &Subspace, w: u64) -> Result<Verdict, LogicError> {
    space.check_window(w)?;
    let mask = u.mask(space, w);
    Ok(bounded_mask_verdict(space, &mask, w, 0))
}

pub(crate) fn bounded_mask_verdict(space: &SpacePresentation, mask: &Mask, w: u64, scale: u64) -> Verdict {
    let radii: BTreeSet<u64> = mask.ids().map(|x| space.radius(x)).collect();
    let radii: Vec<u64> = radii.into_iter().collect();
    let (status, bound) = radial_status(w, w - scale, &radii);
    let esc = escape_radius(w);
    let witness = mask
        .ids()
        .filter(|&x| space.radius(x) > esc)
        .take(MAX_WITNESSES)
        .map(Witness::Point)
        .collect();
    Verdict::from_scales(w, vec![ScaleBound { scale, bound, status }], witness)
}
