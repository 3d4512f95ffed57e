//! Proper metric spaces presented by a finite enumeration of a large ball
//! around a basepoint.
//!
//! Every space is materialized once, up to `max_window`, with its points
//! sorted by distance to the basepoint. A window of radius `W` is then the
//! id prefix `0..window_len(W)`, which makes windows monotone for free.
//! Entourages are the metric ones, `E_r = {(x, y) : d(x, y) <= r}`.

mod point;
mod schedule;
mod subspace;

use std::collections::HashMap;

use thiserror::Error;

pub use point::{parse_word, Letter, Point, PointId};
pub use schedule::ScaleSchedule;
pub use subspace::{BlockRule, Mask, Sign, Subspace};

/// Refuse to materialize more points than this.
const MAX_POINTS: u128 = 30_000_000;

const NO_POINT: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("unknown space kind `{0}`")]
    UnknownKind(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("window {requested} exceeds the materialized window {max}")]
    WindowTooLarge { requested: u64, max: u64 },
    #[error("invalid scale schedule: {0}")]
    InvalidSchedule(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeMetric {
    LInf,
    L1,
}

/// Descriptor accepted by [`build_space`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSpec {
    ZPlus,
    Zn { dim: usize, metric: LatticeMetric },
    FreeGroup { rank: usize },
    DihedralInfinity,
    /// Finite metric space given by a distance table; `base` indexes the basepoint.
    Explicit { table: Vec<Vec<u64>>, base: usize },
    DisjointUnion(Box<SpaceSpec>, Box<SpaceSpec>),
    Product(Box<SpaceSpec>, Box<SpaceSpec>),
}

impl SpaceSpec {
    pub fn zn(dim: usize) -> Self {
        SpaceSpec::Zn { dim, metric: LatticeMetric::LInf }
    }

    pub fn disjoint_union(left: SpaceSpec, right: SpaceSpec) -> Self {
        SpaceSpec::DisjointUnion(Box::new(left), Box::new(right))
    }

    pub fn product(left: SpaceSpec, right: SpaceSpec) -> Self {
        SpaceSpec::Product(Box::new(left), Box::new(right))
    }
}

#[derive(Debug)]
enum Kind {
    ZPlus,
    Zn { dim: usize, metric: LatticeMetric },
    FreeGroup { rank: usize },
    DihedralInfinity,
    Explicit { table: Vec<Vec<u64>> },
    DisjointUnion(Box<SpacePresentation>, Box<SpacePresentation>),
    Product(Box<SpacePresentation>, Box<SpacePresentation>),
}

#[derive(Debug)]
enum Lookup {
    Grid { lo: i64, side: usize, dim: usize, cells: Vec<u32> },
    Hash(HashMap<Point, PointId>),
    Union { left: Vec<u32>, right: Vec<u32> },
    Pairs { right_len: usize, cells: Vec<u32> },
}

/// A countable proper metric space materialized on the ball of radius
/// `max_window` around its basepoint, which always has id 0.
#[derive(Debug)]
pub struct SpacePresentation {
    kind: Kind,
    max_window: u64,
    points: Vec<Point>,
    radius: Vec<u64>,
    lookup: Lookup,
}

/// Builds a presentation of `spec`, materialized up to `max_window`.
pub fn build_space(spec: &SpaceSpec, max_window: u64) -> Result<SpacePresentation, SpaceError> {
    let (kind, mut entries): (Kind, Vec<(u64, Point)>) = match spec {
        SpaceSpec::ZPlus => {
            check_size(max_window as u128 + 1)?;
            let entries = (0..=max_window as i64)
                .map(|x| (x as u64, Point::Lattice(vec![x])))
                .collect();
            (Kind::ZPlus, entries)
        }
        SpaceSpec::Zn { dim, metric } => {
            if *dim == 0 {
                return Err(SpaceError::InvalidParameter("zn needs dimension n >= 1".into()));
            }
            let side = 2 * max_window as u128 + 1;
            check_size(side.checked_pow(*dim as u32).unwrap_or(u128::MAX))?;
            (Kind::Zn { dim: *dim, metric: *metric }, lattice_ball(*dim, *metric, max_window))
        }
        SpaceSpec::FreeGroup { rank } => {
            if *rank < 2 {
                return Err(SpaceError::InvalidParameter("free_group needs k >= 2".into()));
            }
            let sphere = 2 * *rank as u128 - 1;
            check_size(2 * *rank as u128 * sphere.checked_pow(max_window as u32).unwrap_or(u128::MAX))?;
            let entries = word_ball(&free_letters(*rank), false, max_window)
                .into_iter()
                .map(|w| (w.len() as u64, Point::Word(w)))
                .collect();
            (Kind::FreeGroup { rank: *rank }, entries)
        }
        SpaceSpec::DihedralInfinity => {
            check_size(2 * max_window as u128 + 1)?;
            let entries = word_ball(&[1, 2], true, max_window)
                .into_iter()
                .map(|w| (w.len() as u64, Point::Word(w)))
                .collect();
            (Kind::DihedralInfinity, entries)
        }
        SpaceSpec::Explicit { table, base } => {
            validate_table(table, *base)?;
            let entries: Vec<(u64, Point)> = (0..table.len())
                .filter(|&i| table[*base][i] <= max_window)
                .map(|i| (table[*base][i], Point::Node(i)))
                .collect();
            (Kind::Explicit { table: table.clone() }, entries)
        }
        SpaceSpec::DisjointUnion(l, r) => {
            let left = build_space(l, max_window)?;
            let right = build_space(r, max_window)?;
            let mut entries = Vec::new();
            for i in 0..left.len() {
                entries.push((left.radius[i], Point::Left(PointId(i as u32))));
            }
            for i in 0..right.len() {
                let rad = right.radius[i] + 1;
                if rad <= max_window {
                    entries.push((rad, Point::Right(PointId(i as u32))));
                }
            }
            (Kind::DisjointUnion(Box::new(left), Box::new(right)), entries)
        }
        SpaceSpec::Product(l, r) => {
            let left = build_space(l, max_window)?;
            let right = build_space(r, max_window)?;
            check_size(left.len() as u128 * right.len() as u128)?;
            let mut entries = Vec::with_capacity(left.len() * right.len());
            for a in 0..left.len() {
                for b in 0..right.len() {
                    let rad = left.radius[a].max(right.radius[b]);
                    entries.push((rad, Point::Pair(PointId(a as u32), PointId(b as u32))));
                }
            }
            (Kind::Product(Box::new(left), Box::new(right)), entries)
        }
    };

    entries.sort();
    let radius: Vec<u64> = entries.iter().map(|e| e.0).collect();
    let points: Vec<Point> = entries.into_iter().map(|e| e.1).collect();
    let lookup = match &kind {
        Kind::ZPlus => grid_lookup(&points, 1, 0, max_window as usize + 1),
        Kind::Zn { dim, .. } => {
            grid_lookup(&points, *dim, -(max_window as i64), 2 * max_window as usize + 1)
        }
        Kind::DisjointUnion(l, r) => {
            let mut left = vec![NO_POINT; l.len()];
            let mut right = vec![NO_POINT; r.len()];
            for (i, p) in points.iter().enumerate() {
                match p {
                    Point::Left(a) => left[a.index()] = i as u32,
                    Point::Right(b) => right[b.index()] = i as u32,
                    _ => unreachable!(),
                }
            }
            Lookup::Union { left, right }
        }
        Kind::Product(l, r) => {
            let right_len = r.len();
            let mut cells = vec![NO_POINT; l.len() * right_len];
            for (i, p) in points.iter().enumerate() {
                if let Point::Pair(a, b) = p {
                    cells[a.index() * right_len + b.index()] = i as u32;
                }
            }
            Lookup::Pairs { right_len, cells }
        }
        _ => hash_lookup(&points),
    };

    Ok(SpacePresentation { kind, max_window, points, radius, lookup })
}

fn check_size(n: u128) -> Result<(), SpaceError> {
    if n > MAX_POINTS {
        Err(SpaceError::InvalidParameter(format!(
            "materializing about {n} points exceeds the limit of {MAX_POINTS}; lower max_window"
        )))
    } else {
        Ok(())
    }
}

fn validate_table(table: &[Vec<u64>], base: usize) -> Result<(), SpaceError> {
    let n = table.len();
    if n == 0 {
        return Err(SpaceError::InvalidParameter("empty distance table".into()));
    }
    if base >= n {
        return Err(SpaceError::InvalidParameter(format!("basepoint {base} out of range")));
    }
    if table.iter().any(|row| row.len() != n) {
        return Err(SpaceError::InvalidParameter("distance table is not square".into()));
    }
    for i in 0..n {
        if table[i][i] != 0 {
            return Err(SpaceError::InvalidParameter(format!("d({i},{i}) != 0")));
        }
        for j in 0..n {
            if table[i][j] != table[j][i] {
                return Err(SpaceError::InvalidParameter(format!(
                    "asymmetric distance table at ({i},{j})"
                )));
            }
            if i != j && table[i][j] == 0 {
                return Err(SpaceError::InvalidParameter(format!("d({i},{j}) = 0 for distinct points")));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[i][k] > table[i][j] + table[j][k] {
                    return Err(SpaceError::InvalidParameter(format!(
                        "triangle inequality fails for ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn lattice_norm(c: &[i64], metric: LatticeMetric) -> u64 {
    match metric {
        LatticeMetric::LInf => c.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0),
        LatticeMetric::L1 => c.iter().map(|x| x.unsigned_abs()).sum(),
    }
}

fn lattice_ball(dim: usize, metric: LatticeMetric, radius: u64) -> Vec<(u64, Point)> {
    let r = radius as i64;
    let mut out = Vec::new();
    let mut c = vec![-r; dim];
    loop {
        let norm = lattice_norm(&c, metric);
        if norm <= radius {
            out.push((norm, Point::Lattice(c.clone())));
        }
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            if c[i] < r {
                c[i] += 1;
                break;
            }
            c[i] = -r;
            i += 1;
        }
    }
}

fn offsets(dim: usize, metric: LatticeMetric, radius: u64) -> Vec<Vec<i64>> {
    lattice_ball(dim, metric, radius)
        .into_iter()
        .map(|(_, p)| match p {
            Point::Lattice(c) => c,
            _ => unreachable!(),
        })
        .collect()
}

fn grid_lookup(points: &[Point], dim: usize, lo: i64, side: usize) -> Lookup {
    let mut cells = vec![NO_POINT; side.pow(dim as u32)];
    for (i, p) in points.iter().enumerate() {
        if let Point::Lattice(c) = p {
            cells[grid_cell(c, lo, side).expect("materialized point inside grid")] = i as u32;
        }
    }
    Lookup::Grid { lo, side, dim, cells }
}

#[inline]
fn grid_cell(c: &[i64], lo: i64, side: usize) -> Option<usize> {
    let mut idx = 0usize;
    for &x in c.iter().rev() {
        let off = x - lo;
        if off < 0 || off as usize >= side {
            return None;
        }
        idx = idx * side + off as usize;
    }
    Some(idx)
}

fn hash_lookup(points: &[Point]) -> Lookup {
    Lookup::Hash(points.iter().enumerate().map(|(i, p)| (p.clone(), PointId(i as u32))).collect())
}

fn free_letters(rank: usize) -> Vec<Letter> {
    (1..=rank as Letter).flat_map(|g| [g, -g]).collect()
}

#[inline]
fn inverse(l: Letter, involutive: bool) -> Letter {
    if involutive {
        l
    } else {
        -l
    }
}

/// All reduced words of length at most `radius`, breadth first.
fn word_ball(letters: &[Letter], involutive: bool, radius: u64) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut frontier = 0;
    for _ in 0..radius {
        let end = out.len();
        for i in frontier..end {
            let last = out[i].last().copied();
            for &l in letters {
                if last.is_none_or(|p| p != inverse(l, involutive)) {
                    let mut w = out[i].clone();
                    w.push(l);
                    out.push(w);
                }
            }
        }
        frontier = end;
    }
    out
}

/// Reduced product `x * w`.
fn multiply(x: &[Letter], w: &[Letter], involutive: bool) -> Vec<Letter> {
    let mut out = x.to_vec();
    for &l in w {
        if out.last() == Some(&inverse(l, involutive)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn word_distance(x: &[Letter], y: &[Letter]) -> u64 {
    let common = x.iter().zip(y).take_while(|(a, b)| a == b).count();
    (x.len() + y.len() - 2 * common) as u64
}

impl SpacePresentation {
    pub fn basepoint(&self) -> PointId {
        PointId(0)
    }

    pub fn max_window(&self) -> u64 {
        self.max_window
    }

    /// Number of materialized points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, x: PointId) -> &Point {
        &self.points[x.index()]
    }

    /// `d(x, basepoint)`.
    #[inline]
    pub fn radius(&self, x: PointId) -> u64 {
        self.radius[x.index()]
    }

    /// Number of points in the ball of radius `w`; ids `0..window_len(w)`.
    pub fn window_len(&self, w: u64) -> usize {
        self.radius.partition_point(|&r| r <= w)
    }

    pub fn window_points(&self, w: u64) -> Result<Vec<PointId>, SpaceError> {
        self.check_window(w)?;
        Ok((0..self.window_len(w) as u32).map(PointId).collect())
    }

    pub fn check_window(&self, w: u64) -> Result<(), SpaceError> {
        if w > self.max_window {
            Err(SpaceError::WindowTooLarge { requested: w, max: self.max_window })
        } else {
            Ok(())
        }
    }

    /// Dimension for `zplus` / `zn`, `None` otherwise.
    pub fn lattice_dim(&self) -> Option<usize> {
        match &self.kind {
            Kind::ZPlus => Some(1),
            Kind::Zn { dim, .. } => Some(*dim),
            _ => None,
        }
    }

    pub fn is_word_space(&self) -> bool {
        matches!(self.kind, Kind::FreeGroup { .. } | Kind::DihedralInfinity)
    }

    /// Distances are path lengths in the scale-1 graph, so `E_r[U]` is
    /// reached by `r` unit steps inside any window.
    pub fn is_geodesic(&self) -> bool {
        match &self.kind {
            Kind::Explicit { .. } => false,
            Kind::DisjointUnion(l, r) | Kind::Product(l, r) => l.is_geodesic() && r.is_geodesic(),
            _ => true,
        }
    }

    pub fn is_disjoint_union(&self) -> bool {
        matches!(self.kind, Kind::DisjointUnion(..))
    }

    pub fn coords(&self, x: PointId) -> Option<&[i64]> {
        match &self.points[x.index()] {
            Point::Lattice(c) => Some(c),
            _ => None,
        }
    }

    pub fn word(&self, x: PointId) -> Option<&[Letter]> {
        match &self.points[x.index()] {
            Point::Word(w) => Some(w),
            _ => None,
        }
    }

    /// Finds the id of a concrete point, if it is materialized.
    pub fn locate(&self, p: &Point) -> Option<PointId> {
        match (&self.lookup, p) {
            (Lookup::Grid { lo, side, dim, cells }, Point::Lattice(c)) if c.len() == *dim => {
                grid_cell(c, *lo, *side).and_then(|i| valid(cells[i]))
            }
            (Lookup::Hash(map), _) => map.get(p).copied(),
            (Lookup::Union { left, .. }, Point::Left(a)) => left.get(a.index()).and_then(|&i| valid(i)),
            (Lookup::Union { right, .. }, Point::Right(b)) => {
                right.get(b.index()).and_then(|&i| valid(i))
            }
            (Lookup::Pairs { right_len, cells }, Point::Pair(a, b)) if b.index() < *right_len => {
                cells.get(a.index() * right_len + b.index()).and_then(|&i| valid(i))
            }
            _ => None,
        }
    }

    /// Locates a lattice point by coordinates.
    pub fn locate_coords(&self, c: &[i64]) -> Option<PointId> {
        match &self.lookup {
            Lookup::Grid { lo, side, dim, cells } if c.len() == *dim => {
                grid_cell(c, *lo, *side).and_then(|i| valid(cells[i]))
            }
            _ => None,
        }
    }

    /// Left and right factors of a product space.
    pub fn factors(&self) -> Option<(&SpacePresentation, &SpacePresentation)> {
        match &self.kind {
            Kind::Product(l, r) | Kind::DisjointUnion(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Human-readable coordinates, resolving composite points through their factors.
    pub fn label(&self, x: PointId) -> String {
        match (self.point(x), self.factors()) {
            (Point::Left(p), Some((l, _))) => format!("left({})", l.label(*p)),
            (Point::Right(p), Some((_, r))) => format!("right({})", r.label(*p)),
            (Point::Pair(a, b), Some((l, r))) => format!("[{},{}]", l.label(*a), r.label(*b)),
            (p, _) => p.to_string(),
        }
    }

    /// Exact distance between two materialized points.
    pub fn distance(&self, x: PointId, y: PointId) -> u64 {
        let (p, q) = (&self.points[x.index()], &self.points[y.index()]);
        match (&self.kind, p, q) {
            (Kind::ZPlus, Point::Lattice(a), Point::Lattice(b)) => a[0].abs_diff(b[0]),
            (Kind::Zn { metric, .. }, Point::Lattice(a), Point::Lattice(b)) => {
                let diff = a.iter().zip(b).map(|(s, t)| s.abs_diff(*t));
                match metric {
                    LatticeMetric::LInf => diff.max().unwrap_or(0),
                    LatticeMetric::L1 => diff.sum(),
                }
            }
            (Kind::FreeGroup { .. } | Kind::DihedralInfinity, Point::Word(a), Point::Word(b)) => {
                word_distance(a, b)
            }
            (Kind::Explicit { table, .. }, Point::Node(i), Point::Node(j)) => table[*i][*j],
            (Kind::DisjointUnion(l, _), Point::Left(a), Point::Left(b)) => l.distance(*a, *b),
            (Kind::DisjointUnion(_, r), Point::Right(a), Point::Right(b)) => r.distance(*a, *b),
            (Kind::DisjointUnion(l, r), Point::Left(a), Point::Right(b))
            | (Kind::DisjointUnion(l, r), Point::Right(b), Point::Left(a)) => {
                l.radius(*a) + 1 + r.radius(*b)
            }
            (Kind::Product(l, r), Point::Pair(a1, b1), Point::Pair(a2, b2)) => {
                l.distance(*a1, *a2).max(r.distance(*b1, *b2))
            }
            _ => unreachable!("point does not belong to this space"),
        }
    }

    /// `(x, y)` lies in the scale-`r` entourage.
    #[inline]
    pub fn in_entourage(&self, r: u64, x: PointId, y: PointId) -> bool {
        self.distance(x, y) <= r
    }

    /// Left multiplication `w * x` on word spaces.
    pub fn left_multiply(&self, w: &[Letter], x: PointId) -> Option<Point> {
        let involutive = matches!(self.kind, Kind::DihedralInfinity);
        self.word(x).map(|xw| Point::Word(multiply(w, xw, involutive)))
    }

    /// Right multiplication `x * w` on word spaces.
    pub fn right_multiply(&self, x: PointId, w: &[Letter]) -> Option<Point> {
        let involutive = matches!(self.kind, Kind::DihedralInfinity);
        self.word(x).map(|xw| Point::Word(multiply(xw, w, involutive)))
    }

    /// Precomputes what is needed to enumerate `E_r[x]` quickly.
    pub fn neighborhood(&self, r: u64) -> Neighborhood<'_> {
        let finder = match &self.kind {
            Kind::ZPlus => Finder::Lattice(offsets(1, LatticeMetric::LInf, r)),
            Kind::Zn { dim, metric } => Finder::Lattice(offsets(*dim, *metric, r)),
            Kind::FreeGroup { rank } => Finder::Words(word_ball(&free_letters(*rank), false, r), false),
            Kind::DihedralInfinity => Finder::Words(word_ball(&[1, 2], true, r), true),
            Kind::Explicit { .. } => Finder::Scan,
            Kind::DisjointUnion(l, rt) => {
                Finder::Composite(Box::new(l.neighborhood(r)), Box::new(rt.neighborhood(r)))
            }
            Kind::Product(l, rt) => {
                Finder::Composite(Box::new(l.neighborhood(r)), Box::new(rt.neighborhood(r)))
            }
        };
        Neighborhood { space: self, r, finder }
    }
}

#[inline]
fn valid(i: u32) -> Option<PointId> {
    (i != NO_POINT).then_some(PointId(i))
}

enum Finder<'s> {
    Lattice(Vec<Vec<i64>>),
    Words(Vec<Vec<Letter>>, bool),
    Scan,
    Composite(Box<Neighborhood<'s>>, Box<Neighborhood<'s>>),
}

/// Enumerates `E_r[x]` restricted to a window.
pub struct Neighborhood<'s> {
    space: &'s SpacePresentation,
    r: u64,
    finder: Finder<'s>,
}

impl<'s> Neighborhood<'s> {
    pub fn scale(&self) -> u64 {
        self.r
    }

    /// Calls `f` on every `y` with `d(x, y) <= r` and `d(y, base) <= window`
    /// (including `x` itself when it is in the window).
    pub fn for_each(&self, x: PointId, window: u64, f: &mut dyn FnMut(PointId)) {
        let space = self.space;
        match &self.finder {
            Finder::Lattice(offs) => {
                let Lookup::Grid { lo, side, cells, .. } = &space.lookup else { unreachable!() };
                let c = space.coords(x).expect("lattice point");
                let mut buf = vec![0i64; c.len()];
                for o in offs {
                    for i in 0..c.len() {
                        buf[i] = c[i] + o[i];
                    }
                    if let Some(cell) = grid_cell(&buf, *lo, *side) {
                        let y = cells[cell];
                        if y != NO_POINT && space.radius[y as usize] <= window {
                            f(PointId(y));
                        }
                    }
                }
            }
            Finder::Words(ball, involutive) => {
                let xw = space.word(x).expect("word point");
                for w in ball {
                    let p = Point::Word(multiply(xw, w, *involutive));
                    if let Some(y) = space.locate(&p) {
                        if space.radius(y) <= window {
                            f(y);
                        }
                    }
                }
            }
            Finder::Scan => {
                for i in 0..space.window_len(window) {
                    let y = PointId(i as u32);
                    if space.distance(x, y) <= self.r {
                        f(y);
                    }
                }
            }
            Finder::Composite(lf, rf) => match (&space.kind, &space.lookup, space.point(x)) {
                (Kind::DisjointUnion(l, r), Lookup::Union { left, right }, p) => {
                    let (own, own_map, other, other_map, own_finder, shift_own, shift_other, a) = match p {
                        Point::Left(a) => (l, left, r, right, lf, 0, 1, *a),
                        Point::Right(b) => (r, right, l, left, rf, 1, 0, *b),
                        _ => unreachable!(),
                    };
                    let own_window = window.saturating_sub(shift_own);
                    if window >= shift_own {
                        own_finder.for_each(a, own_window, &mut |c| {
                            let y = own_map[c.index()];
                            if y != NO_POINT {
                                f(PointId(y));
                            }
                        });
                    }
                    let reach = own.radius(a) + 1;
                    if reach <= self.r {
                        let budget = (self.r - reach).min(window.saturating_sub(shift_other));
                        if window >= shift_other {
                            for c in 0..other.window_len(budget) {
                                let y = other_map[c];
                                if y != NO_POINT && space.radius[y as usize] <= window {
                                    f(PointId(y));
                                }
                            }
                        }
                    }
                }
                (Kind::Product(..), Lookup::Pairs { right_len, cells }, Point::Pair(a, b)) => {
                    let mut lefts = Vec::new();
                    lf.for_each(*a, window, &mut |c| lefts.push(c));
                    let mut rights = Vec::new();
                    rf.for_each(*b, window, &mut |c| rights.push(c));
                    for la in &lefts {
                        for rb in &rights {
                            let y = cells[la.index() * right_len + rb.index()];
                            if y != NO_POINT {
                                f(PointId(y));
                            }
                        }
                    }
                }
                _ => unreachable!(),
            },
        }
    }

    /// Collects `E_r[x]` within the window.
    pub fn collect(&self, x: PointId, window: u64) -> Vec<PointId> {
        let mut out = Vec::new();
        self.for_each(x, window, &mut |y| out.push(y));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1() -> SpacePresentation {
        build_space(&SpaceSpec::zn(1), 32).unwrap()
    }

    #[test]
    fn integer_line_distance() {
        let z = z1();
        let a = z.locate_coords(&[3]).unwrap();
        let b = z.locate_coords(&[7]).unwrap();
        assert_eq!(z.distance(a, b), 4);
    }

    #[test]
    fn free_group_word_length() {
        let f2 = build_space(&SpaceSpec::FreeGroup { rank: 2 }, 4).unwrap();
        let e = f2.basepoint();
        let w = f2.locate(&Point::Word(parse_word("abA").unwrap())).unwrap();
        assert_eq!(f2.distance(e, w), 3);
    }

    #[test]
    fn disjoint_union_bridge() {
        let s = build_space(&SpaceSpec::disjoint_union(SpaceSpec::ZPlus, SpaceSpec::ZPlus), 16)
            .unwrap();
        let (l, r) = s.factors().unwrap();
        let l0 = s.locate(&Point::Left(l.basepoint())).unwrap();
        let r0 = s.locate(&Point::Right(r.basepoint())).unwrap();
        assert_eq!(s.distance(l0, r0), 1);
        let l5 = s.locate(&Point::Left(l.locate_coords(&[5]).unwrap())).unwrap();
        let r3 = s.locate(&Point::Right(r.locate_coords(&[3]).unwrap())).unwrap();
        assert_eq!(s.distance(l5, r3), 9);
    }

    #[test]
    fn window_sizes() {
        let zp = build_space(&SpaceSpec::ZPlus, 8).unwrap();
        let w: Vec<_> = zp.window_points(5).unwrap();
        assert_eq!(w.len(), 6);
        assert!(w.iter().enumerate().all(|(i, p)| zp.coords(*p) == Some(&[i as i64][..])));
        let z2 = build_space(&SpaceSpec::zn(2), 4).unwrap();
        assert_eq!(z2.window_points(2).unwrap().len(), 25);
        assert_eq!(
            z2.window_points(5),
            Err(SpaceError::WindowTooLarge { requested: 5, max: 4 })
        );
    }

    #[test]
    fn entourage_examples() {
        let zp = build_space(&SpaceSpec::ZPlus, 8).unwrap();
        let p = |x: i64| zp.locate_coords(&[x]).unwrap();
        assert!(zp.in_entourage(3, p(2), p(5)));
        assert!(!zp.in_entourage(2, p(0), p(5)));
        let z2 = build_space(&SpaceSpec::zn(2), 4).unwrap();
        let o = z2.locate_coords(&[0, 0]).unwrap();
        let d = z2.locate_coords(&[1, 1]).unwrap();
        assert!(z2.in_entourage(1, o, d));
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            build_space(&SpaceSpec::Zn { dim: 0, metric: LatticeMetric::LInf }, 4),
            Err(SpaceError::InvalidParameter(_))
        ));
        assert!(matches!(
            build_space(&SpaceSpec::FreeGroup { rank: 1 }, 4),
            Err(SpaceError::InvalidParameter(_))
        ));
        assert!(matches!(
            build_space(&SpaceSpec::Explicit { table: vec![], base: 0 }, 4),
            Err(SpaceError::InvalidParameter(_))
        ));
        let asym = vec![vec![0, 1], vec![2, 0]];
        assert!(matches!(
            build_space(&SpaceSpec::Explicit { table: asym, base: 0 }, 4),
            Err(SpaceError::InvalidParameter(_))
        ));
    }

    #[test]
    fn dihedral_ball_is_two_rays() {
        let d = build_space(&SpaceSpec::DihedralInfinity, 10).unwrap();
        assert_eq!(d.window_len(10), 21);
        let ab = d.locate(&Point::Word(vec![1, 2])).unwrap();
        let ba = d.locate(&Point::Word(vec![2, 1])).unwrap();
        assert_eq!(d.distance(ab, ba), 4);
    }

    #[test]
    fn neighborhoods_match_brute_force() {
        let specs = [
            SpaceSpec::ZPlus,
            SpaceSpec::zn(2),
            SpaceSpec::Zn { dim: 2, metric: LatticeMetric::L1 },
            SpaceSpec::FreeGroup { rank: 2 },
            SpaceSpec::DihedralInfinity,
            SpaceSpec::disjoint_union(SpaceSpec::zn(1), SpaceSpec::ZPlus),
            SpaceSpec::product(SpaceSpec::ZPlus, SpaceSpec::zn(1)),
            SpaceSpec::Explicit {
                table: vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]],
                base: 1,
            },
        ];
        for spec in &specs {
            let s = build_space(spec, 5).unwrap();
            for w in [3, 5] {
                for r in [0, 1, 2] {
                    let nb = s.neighborhood(r);
                    for x in 0..s.window_len(w) {
                        let x = PointId(x as u32);
                        let mut got = nb.collect(x, w);
                        got.sort();
                        let want: Vec<_> = (0..s.window_len(w) as u32)
                            .map(PointId)
                            .filter(|&y| s.distance(x, y) <= r)
                            .collect();
                        assert_eq!(got, want, "{spec:?} w={w} r={r} x={x}");
                    }
                }
            }
        }
    }
}
