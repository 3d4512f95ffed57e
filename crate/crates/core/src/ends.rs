//! Number of ends at desk scale.
//!
//! An end of `U` is an `r`-connected component of `U ∩ window(W)` minus the
//! open core ball `{d < n}` that reaches the outer shell `{d > 3W/4}`. The
//! count is reported at the plateau of the `(r, n)` grid.

use rayon::prelude::*;
use thiserror::Error;

use crate::logic::escape_radius;
use crate::spaces::{Mask, PointId, SpaceError, SpacePresentation, Subspace};

pub const DEFAULT_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndsError {
    #[error("no plateau in the (r, n) grid: {trace:?}")]
    NoPlateau { trace: Vec<TraceCell> },
    #[error("window {window} too small: {reason}")]
    WindowTooSmall { window: u64, reason: String },
    #[error("invalid ends parameters: {0}")]
    InvalidParams(String),
    #[error("subspace is not contained in the larger one on the window")]
    NotNested,
    #[error("end {end} meets several ends of the larger subspace")]
    AmbiguousAssignment { end: usize },
    #[error("infinitely many ends (more than {cap} at the plateau)")]
    InfiniteEnds { cap: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// The `(r, n)` grid explored by [`ends`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndsParams {
    /// Adjacency scales, strictly increasing.
    pub scales: Vec<u64>,
    /// Core radii, strictly increasing.
    pub cores: Vec<u64>,
    pub cap: usize,
}

impl EndsParams {
    /// `r ∈ {1, 2, 3, 4}` capped at `W/4`, `n ∈ {W/8, W/4, 3W/8, W/2}`.
    pub fn for_window(w: u64) -> Self {
        let scales: Vec<u64> = (1..=4).filter(|&r| 4 * r <= w).collect();
        let mut cores: Vec<u64> = [w / 8, w / 4, 3 * w / 8, w / 2].to_vec();
        cores.dedup();
        EndsParams { scales, cores, cap: DEFAULT_CAP }
    }

    pub fn validate(&self, w: u64) -> Result<(), EndsError> {
        let increasing = |v: &[u64]| !v.is_empty() && v.windows(2).all(|p| p[0] < p[1]);
        if !increasing(&self.scales) || !increasing(&self.cores) {
            return Err(EndsError::InvalidParams("scales and cores must be nonempty and strictly increasing".into()));
        }
        if self.scales[0] == 0 {
            return Err(EndsError::InvalidParams("scales must be positive".into()));
        }
        let r = *self.scales.last().unwrap();
        let n = *self.cores.last().unwrap();
        if 4 * r > w {
            return Err(EndsError::WindowTooSmall { window: w, reason: format!("largest scale {r} exceeds W/4") });
        }
        if n > escape_radius(w) {
            return Err(EndsError::WindowTooSmall { window: w, reason: format!("largest core {n} exceeds 3W/4") });
        }
        Ok(())
    }

    fn top_half<T>(v: &[T]) -> &[T] {
        &v[v.len() / 2..]
    }

    /// The `(r, n)` cell whose components are reported.
    pub fn plateau_cell(&self) -> (u64, u64) {
        (*self.scales.last().unwrap(), *self.cores.last().unwrap())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndCount {
    Finite(usize),
    InfiniteAtCap(usize),
}

impl EndCount {
    pub fn finite(self) -> Option<usize> {
        match self {
            EndCount::Finite(e) => Some(e),
            EndCount::InfiniteAtCap(_) => None,
        }
    }
}

/// Shell-touching component count for one grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceCell {
    pub r: u64,
    pub n: u64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndComponent {
    pub id: usize,
    /// Members at the plateau cell, sorted. The first one is the representative.
    pub members: Vec<PointId>,
    pub touches_outer_shell: bool,
}

impl EndComponent {
    pub fn representative(&self) -> PointId {
        self.members[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndsReport {
    pub count: EndCount,
    /// Ends at the plateau cell, ordered by smallest member (empty when infinite).
    pub components: Vec<EndComponent>,
    pub trace: Vec<TraceCell>,
    pub params: EndsParams,
    pub window: u64,
}

impl EndsReport {
    pub fn count_at(&self, r: u64, n: u64) -> Option<usize> {
        self.trace.iter().find(|c| c.r == r && c.n == n).map(|c| c.count)
    }
}

/// Union-find with shell flags on roots.
struct Dsu {
    parent: Vec<u32>,
    size: Vec<u32>,
    shell: Vec<bool>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n as u32).collect(), size: vec![1; n], shell: vec![false; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns true when two shell-touching components merged.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        let both = self.shell[a as usize] && self.shell[b as usize];
        self.shell[a as usize] |= self.shell[b as usize];
        both
    }
}

/// Adds the points of `mask` in order of decreasing radius and records the
/// number of shell-touching components each time the radius drops below a
/// core radius. Returns the counts (in the order of `cores`) and the final
/// union-find state.
fn sweep(space: &SpacePresentation, mask: &Mask, r: u64, w: u64, cores: &[u64]) -> (Vec<usize>, Dsu) {
    let len = space.window_len(w);
    let shell = escape_radius(w);
    let nb = space.neighborhood(r);
    let mut dsu = Dsu::new(len);
    let mut counts = vec![0; cores.len()];
    let mut pending = cores.len();
    let mut touching = 0usize;
    for i in (0..len).rev() {
        let x = PointId(i as u32);
        let rx = space.radius(x);
        while pending > 0 && rx < cores[pending - 1] {
            counts[pending - 1] = touching;
            pending -= 1;
        }
        if pending == 0 {
            break;
        }
        if !mask.get(x) {
            continue;
        }
        if rx > shell {
            dsu.shell[i] = true;
            touching += 1;
        }
        nb.for_each(x, w, &mut |y| {
            if y.0 > x.0 && mask.get(y) && dsu.union(x.0, y.0) {
                touching -= 1;
            }
        });
    }
    for c in counts.iter_mut().take(pending) {
        *c = touching;
    }
    (counts, dsu)
}

/// Shell-touching components at one cell, ordered by smallest member.
fn components_at(space: &SpacePresentation, mask: &Mask, r: u64, n: u64, w: u64) -> Vec<EndComponent> {
    let (_, mut dsu) = sweep(space, mask, r, w, &[n]);
    let mut label = vec![usize::MAX; dsu.parent.len()];
    let mut out: Vec<EndComponent> = Vec::new();
    for x in mask.ids() {
        if space.radius(x) < n {
            continue;
        }
        let root = dsu.find(x.0) as usize;
        if !dsu.shell[root] {
            continue;
        }
        if label[root] == usize::MAX {
            label[root] = out.len();
            out.push(EndComponent { id: out.len(), members: Vec::new(), touches_outer_shell: true });
        }
        out[label[root]].members.push(x);
    }
    out
}

/// Ends of a window mask.
pub fn ends_of_mask(space: &SpacePresentation, mask: &Mask, params: &EndsParams, w: u64) -> Result<EndsReport, EndsError> {
    space.check_window(w)?;
    params.validate(w)?;
    let rows: Vec<Vec<usize>> = params
        .scales
        .par_iter()
        .map(|&r| sweep(space, mask, r, w, &params.cores).0)
        .collect();
    let trace: Vec<TraceCell> = params
        .scales
        .iter()
        .zip(&rows)
        .flat_map(|(&r, row)| params.cores.iter().zip(row).map(move |(&n, &count)| TraceCell { r, n, count }))
        .collect();

    let top_r = EndsParams::top_half(&rows);
    let n_half = params.cores.len() / 2;
    let growing = top_r.iter().all(|row| {
        let tail = &row[n_half..];
        tail.len() >= 2 && tail.windows(2).all(|p| p[0] < p[1])
    });
    let block: Vec<usize> = top_r.iter().flat_map(|row| row[n_half..].iter().copied()).collect();
    let over_cap = block.iter().any(|&c| c > params.cap);
    if growing || over_cap {
        return Ok(EndsReport {
            count: EndCount::InfiniteAtCap(params.cap),
            components: Vec::new(),
            trace,
            params: params.clone(),
            window: w,
        });
    }
    if block.windows(2).any(|p| p[0] != p[1]) {
        return Err(EndsError::NoPlateau { trace });
    }
    let (r, n) = params.plateau_cell();
    let components = components_at(space, mask, r, n, w);
    debug_assert_eq!(components.len(), block[0]);
    Ok(EndsReport { count: EndCount::Finite(block[0]), components, trace, params: params.clone(), window: w })
}

/// Number of ends of `u` on the window of radius `w`.
pub fn ends(space: &SpacePresentation, u: &Subspace, params: &EndsParams, w: u64) -> Result<EndsReport, EndsError> {
    space.check_window(w)?;
    ends_of_mask(space, &u.mask(space, w), params, w)
}

/// Assignment of the ends of `U` to the ends of `V ⊇ U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndRestriction {
    pub domain_ends: usize,
    pub codomain_ends: usize,
    /// `assignment[i]` is the end of `V` containing end `i` of `U`.
    pub assignment: Vec<usize>,
}

impl EndRestriction {
    /// The 0/1 matrix with rows indexed by ends of `U`.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.assignment
            .iter()
            .map(|&j| (0..self.codomain_ends).map(|k| u8::from(k == j)).collect())
            .collect()
    }
}

/// Assigns ends between two reports computed with the same parameters.
pub fn restrict_ends(small: &EndsReport, large: &EndsReport) -> Result<EndRestriction, EndsError> {
    let (EndCount::Finite(e_small), EndCount::Finite(e_large)) = (small.count, large.count) else {
        return Err(EndsError::InfiniteEnds { cap: small.params.cap.max(large.params.cap) });
    };
    if small.params != large.params || small.window != large.window {
        return Err(EndsError::InvalidParams("reports use different parameters".into()));
    }
    let len = large.components.iter().flat_map(|c| c.members.last()).map(|p| p.index() + 1).max().unwrap_or(0);
    let mut label = vec![usize::MAX; len];
    for c in &large.components {
        for p in &c.members {
            label[p.index()] = c.id;
        }
    }
    let assignment = small
        .components
        .iter()
        .map(|c| {
            let mut target = None;
            for p in &c.members {
                match label.get(p.index()).copied() {
                    None | Some(usize::MAX) => return Err(EndsError::NotNested),
                    Some(j) if target.is_some_and(|t| t != j) => {
                        return Err(EndsError::AmbiguousAssignment { end: c.id })
                    }
                    Some(j) => target = Some(j),
                }
            }
            Ok(target.expect("components are nonempty"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EndRestriction { domain_ends: e_small, codomain_ends: e_large, assignment })
}

/// End assignment for `U ⊆ V` on the window.
pub fn end_restriction(
    space: &SpacePresentation,
    u: &Subspace,
    v: &Subspace,
    params: &EndsParams,
    w: u64,
) -> Result<EndRestriction, EndsError> {
    space.check_window(w)?;
    let (mu, mv) = (u.mask(space, w), v.mask(space, w));
    if !mu.is_subset(&mv) {
        return Err(EndsError::NotNested);
    }
    restrict_ends(&ends_of_mask(space, &mu, params, w)?, &ends_of_mask(space, &mv, params, w)?)
}
