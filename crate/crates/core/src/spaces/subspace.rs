use std::fmt;

use super::{Letter, Point, PointId, SpaceError, SpacePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn apply(self, x: i64) -> i64 {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

/// Unions of shells `{x : d(x, base) in [a, b]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockRule {
    /// Closed radius intervals.
    Intervals(Vec<(u64, u64)>),
    /// Block `k` is `[a_k - pad_k, ratio * a_k + pad_k]` with
    /// `a_k = ratio^(2k + phase)` and `pad_k = a_k / pad_div` (no padding when
    /// `pad_div == 0`). Padding makes neighbouring phases overlap by an amount
    /// that grows with `k`.
    Geometric { ratio: u64, phase: u32, pad_div: u64 },
}

impl BlockRule {
    pub fn contains(&self, t: u64) -> bool {
        match self {
            BlockRule::Intervals(iv) => iv.iter().any(|&(a, b)| a <= t && t <= b),
            BlockRule::Geometric { ratio, phase, pad_div } => {
                if *ratio < 2 {
                    return false;
                }
                let mut a = match ratio.checked_pow(*phase) {
                    Some(a) => a,
                    None => return false,
                };
                loop {
                    let pad = if *pad_div > 0 { a / pad_div } else { 0 };
                    if a.saturating_sub(pad) > t {
                        return false;
                    }
                    let b = a.saturating_mul(*ratio).saturating_add(pad);
                    if t <= b {
                        return true;
                    }
                    a = match a.checked_mul(ratio * ratio) {
                        Some(a) => a,
                        None => return false,
                    };
                }
            }
        }
    }
}

/// A subset of a space, given by a membership predicate.
///
/// Predicates are evaluated against a [`SpacePresentation`]; those that do
/// not apply to the space's kind (e.g. a ray on a free group) contain
/// nothing, and [`Subspace::validate`] reports them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subspace {
    All,
    /// Lattice ray `{t * sign * e_axis : t >= 0}`; on `Z` this is `Z_+` or `Z_-`.
    Ray { axis: usize, sign: Sign },
    /// `coeffs . x >= rhs` on lattices.
    Halfspace { coeffs: Vec<i64>, rhs: i64 },
    /// Closed orthant `sign_i * x_i >= 0`.
    Orthant(Vec<Sign>),
    /// Widened orthant `slope * sign_i * x_i + |x|_inf >= 0` for all `i`.
    Cone { signs: Vec<Sign>, slope: u64 },
    /// Planar sector swept counterclockwise from direction `from` to `to`.
    Sector { from: [i64; 2], to: [i64; 2] },
    Blocks(BlockRule),
    /// Coordinate sum (lattices), word length (groups), node index (explicit)
    /// congruent to `residue` modulo `modulus`.
    Residue { modulus: u64, residue: u64 },
    /// Words beginning with a prefix.
    Prefix(Vec<Letter>),
    /// Closed ball around the basepoint.
    Ball(u64),
    Left,
    Right,
    /// Sorted explicit point set.
    Explicit(Vec<PointId>),
    Complement(Box<Subspace>),
    Union(Vec<Subspace>),
    Intersection(Vec<Subspace>),
}

impl Subspace {
    pub fn z_plus() -> Self {
        Subspace::Ray { axis: 0, sign: Sign::Plus }
    }

    pub fn z_minus() -> Self {
        Subspace::Ray { axis: 0, sign: Sign::Minus }
    }

    pub fn explicit(mut points: Vec<PointId>) -> Self {
        points.sort();
        points.dedup();
        Subspace::Explicit(points)
    }

    pub fn complement(self) -> Self {
        Subspace::Complement(Box::new(self))
    }

    pub fn union(self, other: Subspace) -> Self {
        Subspace::Union(vec![self, other])
    }

    pub fn intersection(self, other: Subspace) -> Self {
        Subspace::Intersection(vec![self, other])
    }

    /// Checks that every predicate applies to the space's kind.
    pub fn validate(&self, space: &SpacePresentation) -> Result<(), SpaceError> {
        let dim = space.lattice_dim();
        let bad = |what: &str| Err(SpaceError::InvalidParameter(what.to_string()));
        match self {
            Subspace::Ray { axis, .. } => match dim {
                Some(d) if *axis < d => Ok(()),
                _ => bad("ray needs a lattice space with that axis"),
            },
            Subspace::Halfspace { coeffs, .. } => match dim {
                Some(d) if coeffs.len() == d => Ok(()),
                _ => bad("halfspace coefficients must match the lattice dimension"),
            },
            Subspace::Orthant(s) | Subspace::Cone { signs: s, .. } => match dim {
                Some(d) if s.len() == d => Ok(()),
                _ => bad("sign pattern must match the lattice dimension"),
            },
            Subspace::Sector { .. } => match dim {
                Some(2) => Ok(()),
                _ => bad("sectors need a two-dimensional lattice"),
            },
            Subspace::Residue { modulus, .. } if *modulus == 0 => bad("residue modulus must be positive"),
            Subspace::Prefix(_) if !space.is_word_space() => bad("prefix needs a group word space"),
            Subspace::Left | Subspace::Right if !space.is_disjoint_union() => {
                bad("left/right need a disjoint union")
            }
            Subspace::Explicit(pts) => match pts.last() {
                Some(p) if p.index() >= space.len() => bad("explicit point outside the space"),
                _ => Ok(()),
            },
            Subspace::Complement(s) => s.validate(space),
            Subspace::Union(v) | Subspace::Intersection(v) => {
                v.iter().try_for_each(|s| s.validate(space))
            }
            _ => Ok(()),
        }
    }

    /// Membership of a single point.
    pub fn contains(&self, space: &SpacePresentation, x: PointId) -> bool {
        match self {
            Subspace::All => true,
            Subspace::Ray { axis, sign } => space.coords(x).is_some_and(|c| {
                c.get(*axis).is_some_and(|&v| sign.apply(v) >= 0)
                    && c.iter().enumerate().all(|(i, &v)| i == *axis || v == 0)
            }),
            Subspace::Halfspace { coeffs, rhs } => space.coords(x).is_some_and(|c| {
                c.len() == coeffs.len() && c.iter().zip(coeffs).map(|(a, b)| a * b).sum::<i64>() >= *rhs
            }),
            Subspace::Orthant(signs) => space.coords(x).is_some_and(|c| {
                c.len() == signs.len() && c.iter().zip(signs).all(|(&v, s)| s.apply(v) >= 0)
            }),
            Subspace::Cone { signs, slope } => space.coords(x).is_some_and(|c| {
                let norm = c.iter().map(|v| v.abs()).max().unwrap_or(0);
                c.len() == signs.len()
                    && c.iter().zip(signs).all(|(&v, s)| *slope as i64 * s.apply(v) + norm >= 0)
            }),
            Subspace::Sector { from, to } => space.coords(x).is_some_and(|c| {
                c.len() == 2 && in_sector(*from, *to, [c[0], c[1]])
            }),
            Subspace::Blocks(rule) => rule.contains(space.radius(x)),
            Subspace::Residue { modulus, residue } => {
                if *modulus == 0 {
                    return false;
                }
                let m = *modulus as i64;
                let value = match space.point(x) {
                    Point::Lattice(c) => c.iter().sum::<i64>(),
                    Point::Word(w) => w.len() as i64,
                    Point::Node(i) => *i as i64,
                    _ => space.radius(x) as i64,
                };
                value.rem_euclid(m) == (*residue as i64).rem_euclid(m)
            }
            Subspace::Prefix(p) => space.word(x).is_some_and(|w| w.starts_with(p)),
            Subspace::Ball(b) => space.radius(x) <= *b,
            Subspace::Left => matches!(space.point(x), Point::Left(_)),
            Subspace::Right => matches!(space.point(x), Point::Right(_)),
            Subspace::Explicit(pts) => pts.binary_search(&x).is_ok(),
            Subspace::Complement(s) => !s.contains(space, x),
            Subspace::Union(v) => v.iter().any(|s| s.contains(space, x)),
            Subspace::Intersection(v) => v.iter().all(|s| s.contains(space, x)),
        }
    }

    /// Membership over the window of radius `w`.
    pub fn mask(&self, space: &SpacePresentation, w: u64) -> Mask {
        let n = space.window_len(w);
        Mask((0..n as u32).map(|i| self.contains(space, PointId(i))).collect())
    }
}

fn cross(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

fn in_sector(from: [i64; 2], to: [i64; 2], p: [i64; 2]) -> bool {
    let turn = cross(from, to);
    if turn > 0 {
        cross(from, p) >= 0 && cross(p, to) >= 0
    } else if turn < 0 {
        cross(from, p) >= 0 || cross(p, to) >= 0
    } else if from[0] * to[0] + from[1] * to[1] > 0 {
        cross(from, p) == 0 && from[0] * p[0] + from[1] * p[1] >= 0
    } else {
        cross(from, p) >= 0
    }
}

/// Membership bitmap over a window prefix `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask(pub Vec<bool>);

impl Mask {
    pub fn empty(len: usize) -> Self {
        Mask(vec![false; len])
    }

    pub fn full(len: usize) -> Self {
        Mask(vec![true; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, x: PointId) -> bool {
        self.0.get(x.index()).copied().unwrap_or(false)
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        self.0.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| PointId(i as u32))
    }

    pub fn and(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| *a && *b).collect())
    }

    pub fn or(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(&other.0).map(|(a, b)| *a || *b).collect())
    }

    pub fn not(&self) -> Mask {
        Mask(self.0.iter().map(|a| !a).collect())
    }

    /// `self` is contained in `other`.
    pub fn is_subset(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| !*a || *b)
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::Explicit(self.ids().collect())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}
