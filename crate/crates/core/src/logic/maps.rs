use rayon::prelude::*;

use super::{check_scales, escape_radius, growth_status, probe_windows, radial_status, LogicError, ScaleBound, Verdict, Witness, MAX_WITNESSES};
use crate::spaces::{Letter, Point, PointId, ScaleSchedule, SpaceError, SpacePresentation, Subspace};

/// A map tabulated on the ball of radius `window` of its domain.
///
/// Entries are `None` for points outside the declared domain subset.
#[derive(Clone, Debug)]
pub struct MapTable<'a> {
    domain: &'a SpacePresentation,
    codomain: &'a SpacePresentation,
    window: u64,
    images: Vec<Option<PointId>>,
}

impl<'a> MapTable<'a> {
    /// Tabulates `f` on the window. `f` returns `Ok(None)` for points outside
    /// the domain subset.
    pub fn tabulate<F>(
        domain: &'a SpacePresentation,
        codomain: &'a SpacePresentation,
        window: u64,
        f: F,
    ) -> Result<Self, LogicError>
    where
        F: Fn(PointId) -> Result<Option<PointId>, LogicError> + Sync,
    {
        domain.check_window(window)?;
        let images = (0..domain.window_len(window) as u32)
            .into_par_iter()
            .map(|x| f(PointId(x)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MapTable { domain, codomain, window, images })
    }

    /// Tabulates a map given on concrete points.
    pub fn from_points<F>(
        domain: &'a SpacePresentation,
        codomain: &'a SpacePresentation,
        window: u64,
        f: F,
    ) -> Result<Self, LogicError>
    where
        F: Fn(&Point) -> Option<Point> + Sync,
    {
        Self::tabulate(domain, codomain, window, |x| match f(domain.point(x)) {
            None => Ok(None),
            Some(p) => codomain.locate(&p).map(Some).ok_or(LogicError::ImageOutsideWindow(x)),
        })
    }

    pub fn identity(space: &'a SpacePresentation, window: u64) -> Result<Self, LogicError> {
        Self::tabulate(space, space, window, |x| Ok(Some(x)))
    }

    /// Inclusion of a subset, as a partial self-map.
    pub fn inclusion(space: &'a SpacePresentation, subset: &Subspace, window: u64) -> Result<Self, LogicError> {
        Self::tabulate(space, space, window, |x| Ok(subset.contains(space, x).then_some(x)))
    }

    /// `x ↦ A x + b` between lattices.
    pub fn affine(
        domain: &'a SpacePresentation,
        codomain: &'a SpacePresentation,
        window: u64,
        matrix: &[Vec<i64>],
        offset: &[i64],
    ) -> Result<Self, LogicError> {
        let (Some(n), Some(m)) = (domain.lattice_dim(), codomain.lattice_dim()) else {
            return Err(SpaceError::InvalidParameter("affine maps need lattice spaces".into()).into());
        };
        if matrix.len() != m || offset.len() != m || matrix.iter().any(|row| row.len() != n) {
            return Err(SpaceError::InvalidParameter(format!("affine map needs a {m}x{n} matrix and {m} offsets")).into());
        }
        Self::tabulate(domain, codomain, window, |x| {
            let c = domain.coords(x).expect("lattice point");
            let image: Vec<i64> = matrix
                .iter()
                .zip(offset)
                .map(|(row, b)| row.iter().zip(c).map(|(a, t)| a * t).sum::<i64>() + b)
                .collect();
            codomain.locate_coords(&image).map(Some).ok_or(LogicError::ImageOutsideWindow(x))
        })
    }

    /// `x ↦ x + v` on a lattice.
    pub fn translation(space: &'a SpacePresentation, window: u64, v: &[i64]) -> Result<Self, LogicError> {
        let n = v.len();
        let eye: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self::affine(space, space, window, &eye, v)
    }

    /// `x ↦ d(x, base)` into a one-dimensional lattice.
    pub fn norm(domain: &'a SpacePresentation, codomain: &'a SpacePresentation, window: u64) -> Result<Self, LogicError> {
        Self::tabulate(domain, codomain, window, |x| {
            let r = domain.radius(x) as i64;
            codomain.locate_coords(&[r]).map(Some).ok_or(LogicError::ImageOutsideWindow(x))
        })
    }

    /// `x ↦ w x` on a word space.
    pub fn left_multiplication(space: &'a SpacePresentation, window: u64, w: &[Letter]) -> Result<Self, LogicError> {
        Self::tabulate(space, space, window, |x| {
            let p = space.left_multiply(w, x).ok_or(SpaceError::InvalidParameter("not a word space".into()))?;
            space.locate(&p).map(Some).ok_or(LogicError::ImageOutsideWindow(x))
        })
    }

    /// `x ↦ x w` on a word space.
    pub fn right_multiplication(space: &'a SpacePresentation, window: u64, w: &[Letter]) -> Result<Self, LogicError> {
        Self::tabulate(space, space, window, |x| {
            let p = space.right_multiply(x, w).ok_or(SpaceError::InvalidParameter("not a word space".into()))?;
            space.locate(&p).map(Some).ok_or(LogicError::ImageOutsideWindow(x))
        })
    }

    /// `f x g` between product spaces.
    pub fn product(
        domain: &'a SpacePresentation,
        codomain: &'a SpacePresentation,
        window: u64,
        f: &MapTable<'_>,
        g: &MapTable<'_>,
    ) -> Result<Self, LogicError> {
        Self::tabulate(domain, codomain, window, |x| {
            let Point::Pair(a, b) = domain.point(x) else {
                return Err(SpaceError::InvalidParameter("product maps need product spaces".into()).into());
            };
            let (Some(fa), Some(gb)) = (f.image(*a), g.image(*b)) else {
                return Ok(None);
            };
            codomain.locate(&Point::Pair(fa, gb)).map(Some).ok_or(LogicError::ImageOutsideWindow(x))
        })
    }

    /// Restricts the domain to a subset.
    pub fn restrict(&self, subset: &Subspace) -> Self {
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(i, y)| y.filter(|_| subset.contains(self.domain, PointId(i as u32))))
            .collect();
        MapTable { images, ..self.clone() }
    }

    pub fn domain(&self) -> &'a SpacePresentation {
        self.domain
    }

    pub fn codomain(&self) -> &'a SpacePresentation {
        self.codomain
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    /// `f(x)`, or `None` outside the tabulated domain.
    pub fn image(&self, x: PointId) -> Option<PointId> {
        self.images.get(x.index()).copied().flatten()
    }

    /// Tabulated `(x, f(x))` pairs with `x` in the window of radius `w`.
    pub fn pairs(&self, w: u64) -> impl Iterator<Item = (PointId, PointId)> + '_ {
        let n = self.domain.window_len(w).min(self.images.len());
        self.images[..n].iter().enumerate().filter_map(|(i, y)| y.map(|y| (PointId(i as u32), y)))
    }

    pub(crate) fn check_window(&self, w: u64) -> Result<(), LogicError> {
        if w > self.window {
            Err(SpaceError::WindowTooLarge { requested: w, max: self.window }.into())
        } else {
            Ok(())
        }
    }
}

/// Witnesses in the escape zone whose value exceeds the supremum seen on
/// the `3W/4` probe window.
fn growth_witnesses<T>(w: u64, samples: &[(u64, u64, T)], make: impl Fn(&T) -> Witness) -> Vec<Witness> {
    let mid = probe_windows(w)[1];
    let sup_mid = samples.iter().filter(|s| s.0 <= mid).map(|s| s.1).max();
    samples
        .iter()
        .filter(|s| s.0 > escape_radius(w) && Some(s.1) > sup_mid)
        .take(MAX_WITNESSES)
        .map(|s| make(&s.2))
        .collect()
}

fn growth_verdict<T>(w: u64, scale: u64, samples: &[(u64, u64, T)], make: impl Fn(&T) -> Witness) -> Verdict {
    let plain: Vec<(u64, u64)> = samples.iter().map(|s| (s.0, s.1)).collect();
    let (status, bound) = growth_status(w, &plain);
    let witness = growth_witnesses(w, samples, make);
    Verdict::from_scales(w, vec![ScaleBound { scale, bound, status }], witness)
}

/// Checks that `{(f(x), g(x))}` is an entourage: the displacement
/// `d(f x, g x)` must stop growing.
pub fn closeness_verdict(f: &MapTable, g: &MapTable, sched: &ScaleSchedule, w: u64) -> Result<Verdict, LogicError> {
    if !std::ptr::eq(f.domain, g.domain) || !std::ptr::eq(f.codomain, g.codomain) {
        return Err(LogicError::DomainMismatch);
    }
    check_scales(w, sched.max_scale())?;
    f.check_window(w)?;
    g.check_window(w)?;
    let y = f.codomain;
    let samples: Vec<(u64, u64, PointId)> = f
        .pairs(w)
        .filter_map(|(x, fx)| g.image(x).map(|gx| (f.domain.radius(x), y.distance(fx, gx), x)))
        .collect();
    Ok(growth_verdict(w, sched.max_scale(), &samples, |x| Witness::Point(*x)))
}

/// Largest `d(f x, f y)` over pairs with `d(x, y) <= r`, bucketed by
/// `max(|x|, |y|)`.
fn expansion_by_radius(f: &MapTable, r: u64, w: u64) -> Vec<(u64, u64, (PointId, PointId))> {
    let dom = f.domain;
    let nb = dom.neighborhood(r);
    let n = dom.window_len(w);
    let mut best: Vec<Option<(u64, (PointId, PointId))>> = (0..n as u32)
        .into_par_iter()
        .fold(
            || vec![None; w as usize + 1],
            |mut acc: Vec<Option<(u64, (PointId, PointId))>>, x| {
                let x = PointId(x);
                if let Some(fx) = f.image(x) {
                    nb.for_each(x, w, &mut |y| {
                        if let Some(fy) = f.image(y) {
                            let m = dom.radius(x).max(dom.radius(y)) as usize;
                            let d = f.codomain.distance(fx, fy);
                            if acc[m].is_none_or(|(b, _)| d > b) {
                                acc[m] = Some((d, (x, y)));
                            }
                        }
                    });
                }
                acc
            },
        )
        .reduce(
            || vec![None; w as usize + 1],
            |mut a, b| {
                for (s, t) in a.iter_mut().zip(b) {
                    if let Some((d, p)) = t {
                        if s.is_none_or(|(e, q)| d > e || (d == e && p < q)) {
                            *s = Some((d, p));
                        }
                    }
                }
                a
            },
        );
    best.iter_mut()
        .enumerate()
        .filter_map(|(m, s)| s.take().map(|(d, p)| (m as u64, d, p)))
        .collect()
}

/// Checks coarse uniformity (for each scale `r`, `d(x, y) <= r` forces
/// `d(f x, f y) <= s(r)` with stabilized `s(r)`) and coarse properness
/// (preimages of balls of radius `W/16` and `W/8` around the codomain
/// basepoint are bounded). Per-scale entries for properness carry the
/// ball radius as their scale.
pub fn coarse_map_verdict(f: &MapTable, sched: &ScaleSchedule, w: u64) -> Result<Verdict, LogicError> {
    check_scales(w, sched.max_scale())?;
    f.check_window(w)?;
    let uniform: Vec<Verdict> = sched
        .scales()
        .iter()
        .map(|&r| {
            let samples = expansion_by_radius(f, r, w);
            growth_verdict(w, r, &samples, |&(x, y)| Witness::Pair(x, y))
        })
        .collect();
    let proper: Vec<Verdict> = [w / 16, w / 8]
        .into_iter()
        .map(|b| {
            let pre: Vec<PointId> = f
                .pairs(w)
                .filter(|&(_, fx)| f.codomain.radius(fx) <= b)
                .map(|(x, _)| x)
                .collect();
            let mut radii: Vec<u64> = pre.iter().map(|&x| f.domain.radius(x)).collect();
            radii.sort_unstable();
            radii.dedup();
            let (status, bound) = radial_status(w, w, &radii);
            let witness = pre
                .iter()
                .filter(|&&x| f.domain.radius(x) > escape_radius(w))
                .take(MAX_WITNESSES)
                .map(|&x| Witness::Point(x))
                .collect();
            Verdict::from_scales(w, vec![ScaleBound { scale: b, bound, status }], witness)
        })
        .collect();
    let parts: Vec<&Verdict> = uniform.iter().chain(&proper).collect();
    Ok(Verdict::all_of(&parts))
}

/// Checks `E[im f] = Y`: the distance from codomain points to the image
/// must stop growing.
pub fn coarsely_surjective_verdict(f: &MapTable, sched: &ScaleSchedule, w: u64) -> Result<Verdict, LogicError> {
    check_scales(w, sched.max_scale())?;
    f.check_window(w)?;
    let y = f.codomain;
    y.check_window(w)?;
    let mut image: Vec<PointId> = f.pairs(w).map(|(_, fx)| fx).collect();
    image.sort_unstable();
    image.dedup();
    let samples: Vec<(u64, u64, PointId)> = (0..y.window_len(w) as u32)
        .into_par_iter()
        .map(|p| {
            let p = PointId(p);
            let d = if image.binary_search(&p).is_ok() {
                0
            } else {
                image.iter().map(|&q| y.distance(p, q)).min().unwrap_or(u64::MAX)
            };
            (y.radius(p), d, p)
        })
        .collect();
    Ok(growth_verdict(w, sched.max_scale(), &samples, |p| Witness::Point(*p)))
}
