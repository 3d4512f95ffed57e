//! Seeded invariant checks shared by the property tests and the acceptance run.

use std::sync::OnceLock;

use coarse::cohomology::{cech_complex, cohomology, smith_normal_form, AbelianGroupFG, CechParams, IntegerMatrix};
use coarse::logic::{coentourage_verdict, cover_characterizations, cover_verdict, is_bounded_subset, PairPredicate};
use coarse::spaces::{build_space, LatticeMetric, Point, PointId, ScaleSchedule, SpacePresentation, SpaceSpec, Subspace};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{block_family, block_set};

pub type Check = Result<(), String>;

pub const W: u64 = 256;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn zoo() -> &'static [SpacePresentation] {
    static ZOO: OnceLock<Vec<SpacePresentation>> = OnceLock::new();
    ZOO.get_or_init(|| {
        let table: Vec<Vec<u64>> = (0..12).map(|i| (0..12).map(|j| if i == j { 0 } else { 1 + (i + j) % 2 }).collect()).collect();
        [
            SpaceSpec::ZPlus,
            SpaceSpec::zn(1),
            SpaceSpec::zn(2),
            SpaceSpec::Zn { dim: 2, metric: LatticeMetric::L1 },
            SpaceSpec::FreeGroup { rank: 2 },
            SpaceSpec::DihedralInfinity,
            SpaceSpec::disjoint_union(SpaceSpec::zn(1), SpaceSpec::ZPlus),
            SpaceSpec::product(SpaceSpec::ZPlus, SpaceSpec::zn(1)),
            SpaceSpec::Explicit { table, base: 0 },
        ]
        .iter()
        .map(|s| build_space(s, 8).unwrap())
        .collect()
    })
}

pub fn half_line() -> &'static SpacePresentation {
    static S: OnceLock<SpacePresentation> = OnceLock::new();
    S.get_or_init(|| build_space(&SpaceSpec::ZPlus, W).unwrap())
}

fn line() -> &'static SpacePresentation {
    static S: OnceLock<SpacePresentation> = OnceLock::new();
    S.get_or_init(|| build_space(&SpaceSpec::zn(1), 64).unwrap())
}

pub fn sched() -> ScaleSchedule {
    ScaleSchedule::for_window(vec![1, 2, 4, 8, 16], W).unwrap()
}

/// Distance computed from coordinates alone, where that is possible.
fn coordinate_distance(space: &SpacePresentation, x: PointId, y: PointId) -> Option<u64> {
    match (space.point(x), space.point(y)) {
        (Point::Lattice(a), Point::Lattice(b)) if a.len() == 2 => {
            let d = [a[0].abs_diff(b[0]), a[1].abs_diff(b[1])];
            // d((0,0), (1,1)) tells l-infinity from l1.
            let linf = space.distance(space.basepoint(), space.locate_coords(&[1, 1])?) == 1;
            Some(if linf { d[0].max(d[1]) } else { d[0] + d[1] })
        }
        (Point::Lattice(a), Point::Lattice(b)) if a.len() == 1 => Some(a[0].abs_diff(b[0])),
        (Point::Word(a), Point::Word(b)) if !is_dihedral(space) => {
            let common = a.iter().zip(b).take_while(|(p, q)| p == q).count();
            Some((a.len() + b.len() - 2 * common) as u64)
        }
        _ => None,
    }
}

fn is_dihedral(space: &SpacePresentation) -> bool {
    space.locate(&Point::Word(vec![1, 1])).is_none()
}

/// Metric axioms on `count` random triples from every space of the zoo.
pub fn metric_axioms(seed: u64, count: usize) -> Check {
    let mut g = rng(seed);
    for _ in 0..count {
        let space = &zoo()[g.gen_range(0..zoo().len())];
        let n = space.len() as u32;
        let [x, y, z] = [(); 3].map(|_| PointId(g.gen_range(0..n)));
        let (dxy, dyz, dxz) = (space.distance(x, y), space.distance(y, z), space.distance(x, z));
        ensure!(space.distance(x, x) == 0, "d(x, x) != 0");
        ensure!((dxy == 0) == (x == y), "d separates points");
        ensure!(dxy == space.distance(y, x), "symmetry at {x} {y}");
        ensure!(dxz <= dxy + dyz, "triangle at {x} {y} {z}");
        ensure!(space.radius(x) == space.distance(space.basepoint(), x), "radius");
        if let Some(d) = coordinate_distance(space, x, y) {
            ensure!(dxy == d, "distance {dxy} vs coordinates {d}");
        }
    }
    Ok(())
}

/// `E_r[x]` is the brute-force ball, `E_s ∘ E_r ⊆ E_{r+s}`, with equality
/// on geodesic spaces away from the window edge.
pub fn entourage_composition(seed: u64) -> Check {
    let mut g = rng(seed);
    let space = &zoo()[g.gen_range(0..zoo().len())];
    let w = 8;
    let len = space.window_len(w) as u32;
    let x = PointId(g.gen_range(0..len));
    let (r, s) = (g.gen_range(0..3u64), g.gen_range(0..3u64));
    let ball = |x: PointId, r: u64| {
        let mut v = space.neighborhood(r).collect(x, w);
        v.sort();
        v
    };
    let brute: Vec<PointId> = (0..len).map(PointId).filter(|&y| space.distance(x, y) <= r).collect();
    ensure!(ball(x, r) == brute, "E_{r}[{x}] differs from the brute-force ball");
    let mut composed: Vec<PointId> = ball(x, r).into_iter().flat_map(|y| ball(y, s)).collect();
    composed.sort();
    composed.dedup();
    let wide = ball(x, r + s);
    ensure!(composed.iter().all(|y| wide.binary_search(y).is_ok()), "composition leaves E_(r+s)");
    if space.is_geodesic() && space.radius(x) + r + s <= w {
        ensure!(composed == wide, "composition misses part of E_(r+s)");
    }
    Ok(())
}

/// Subsets and finite unions of coentourages are coentourages.
pub fn coentourage_closure(seed: u64) -> Check {
    let mut g = rng(seed);
    let space = half_line();
    let sets: Vec<Subspace> = (0..4).map(|_| block_set(&mut g, 300)).collect();
    let c1 = PairPredicate::Cross(sets[0].clone(), sets[1].clone());
    let c2 = PairPredicate::Cross(sets[2].clone(), sets[3].clone());
    let d = PairPredicate::OutsideSquares(vec![sets[1].clone(), sets[3].clone()]);
    let v = |c: &PairPredicate| coentourage_verdict(space, c, &sched(), W).unwrap();
    let (v1, v2) = (v(&c1), v(&c2));
    let union = v(&c1.clone().or(c2));
    let sub = v(&c1.and(d));
    ensure!(union.status == v1.status.combine(v2.status), "union {} from {} and {}", union.status, v1.status, v2.status);
    ensure!(!v1.holds() || sub.holds(), "subset of a coentourage gives {}", sub.status);
    ensure!(!sub.fails() || v1.fails(), "superset of a non-coentourage gives {}", v1.status);
    Ok(())
}

/// `B x B` is a coentourage exactly when `B` is bounded.
pub fn square_iff_bounded(seed: u64) -> Check {
    let b = block_set(&mut rng(seed), 300);
    let square = coentourage_verdict(half_line(), &PairPredicate::Square(b.clone()), &sched(), W).unwrap();
    let bounded = is_bounded_subset(half_line(), &b, W).unwrap();
    ensure!(square.status == bounded.status, "square {} vs bounded {} for {b:?}", square.status, bounded.status);
    Ok(())
}

/// Both characterizations of a coarse cover give the same status.
pub fn characterizations_agree(seed: u64) -> Check {
    let family = block_family(&mut rng(seed), 400);
    let check = cover_characterizations(half_line(), &Subspace::All, &family, &sched(), W).map_err(|e| e.to_string())?;
    ensure!(check.agree(), "pairwise {} vs divergence {} for {family:?}", check.pairwise.status, check.divergence.status);
    Ok(())
}

/// Identity, base change, local character and monotonicity of coarse covers.
pub fn grothendieck_axioms(seed: u64) -> Check {
    let mut g = rng(seed);
    let verdict = |target: &Subspace, family: &[Subspace]| cover_verdict(half_line(), target, family, &sched(), W).map_err(|e| e.to_string());

    let v = block_set(&mut g, 300);
    ensure!(verdict(&v, &[Subspace::All])?.holds(), "{{X}} does not cover {v:?}");
    ensure!(verdict(&v, std::slice::from_ref(&v))?.holds(), "{{V}} does not cover V");

    let family = block_family(&mut g, 400);
    if !verdict(&Subspace::All, &family)?.holds() {
        return Ok(());
    }
    let restricted: Vec<Subspace> = family.iter().map(|u| Subspace::Intersection(vec![u.clone(), v.clone()])).collect();
    ensure!(verdict(&v, &restricted)?.holds(), "base change to {v:?}");

    let other = block_family(&mut g, 400);
    if verdict(&Subspace::All, &other)?.holds() {
        let mut refined = Vec::new();
        for u in &family {
            let local: Vec<Subspace> = other.iter().map(|o| Subspace::Intersection(vec![u.clone(), o.clone()])).collect();
            ensure!(verdict(u, &local)?.holds(), "local cover of {u:?}");
            refined.extend(local);
        }
        ensure!(verdict(&Subspace::All, &refined)?.holds(), "composite cover");
    }
    let mut bigger = family;
    bigger.push(v);
    ensure!(verdict(&Subspace::All, &bigger)?.holds(), "enlarged family");
    Ok(())
}

fn rational_rank(m: &IntegerMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m.to_dense().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in c..cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Random matrix up to 40 x 40 with entries in `[-9, 9]`: dense, low rank or sparse.
pub fn random_matrix(seed: u64) -> IntegerMatrix {
    let mut g = rng(seed);
    let (rows, cols) = (g.gen_range(1..=40usize), g.gen_range(1..=40usize));
    let mut dense: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| g.gen_range(-9..=9)).collect()).collect();
    match g.gen_range(0..3u8) {
        1 if rows > 1 => {
            let keep = g.gen_range(1..rows);
            for i in keep..rows {
                let (s, k) = (g.gen_range(0..keep), if g.gen_bool(0.5) { 1 } else { -1 });
                dense[i] = dense[s].iter().map(|v| k * v).collect();
            }
        }
        2 => {
            for v in dense.iter_mut().flatten() {
                if g.gen_bool(0.8) {
                    *v = 0;
                }
            }
        }
        _ => {}
    }
    IntegerMatrix::from_rows(&dense)
}

/// Smith normal form: `U M V = D`, unimodular `U` and `V`, a positive
/// divisibility chain and rank equal to the rank over the rationals.
pub fn smith_normal_form_checks(seed: u64) -> Check {
    let m = random_matrix(seed);
    let s = smith_normal_form(&m);
    ensure!(s.rank() == rational_rank(&m), "rank {} vs rational rank {}", s.rank(), rational_rank(&m));
    ensure!(s.u.mul(&m).mul(&s.v) == s.d, "U M V != D");
    ensure!(s.u.determinant().abs().is_one(), "U not unimodular");
    ensure!(s.v.determinant().abs().is_one(), "V not unimodular");
    for (i, d) in s.divisors.iter().enumerate() {
        ensure!(d.is_positive() && s.d.get(i, i) == *d, "diagonal entry {i}");
        ensure!(i == 0 || (d % &s.divisors[i - 1]).is_zero(), "divisibility at {i}");
    }
    ensure!(s.d.iter().all(|(i, j, v)| (i == j && i < s.rank()) || v.is_zero()), "D not diagonal");
    ensure!(m.mul(&s.kernel_basis()).is_zero(), "kernel basis");
    Ok(())
}

/// `D D = 0`, `H^0 = A` on the one-ended half-line and cohomology that does
/// not depend on the order of the cover. Families that are not covers are skipped.
pub fn complexes_and_permutations(seed: u64) -> Check {
    let mut g = rng(seed);
    let coeff = [AbelianGroupFG::integers(), AbelianGroupFG::cyclic(2), AbelianGroupFG::cyclic(6)][g.gen_range(0..3)].clone();
    let params = CechParams { sched: sched(), ..CechParams::for_window(W).unwrap() };
    let family = block_family(&mut g, 400);
    let Ok(cx) = cech_complex(half_line(), &Subspace::All, &family, &coeff, &params) else { return Ok(()) };
    cx.check_square_zero().map_err(|e| e.to_string())?;
    let h = cohomology(&cx).map_err(|e| e.to_string())?;
    ensure!(h.group(0) == coeff, "H^0 = {}", h.group(0));
    let mut permuted = family.clone();
    permuted.rotate_left(g.gen_range(0..family.len()));
    permuted.swap(0, family.len() - 1);
    let cy = cech_complex(half_line(), &Subspace::All, &permuted, &coeff, &params).map_err(|e| e.to_string())?;
    cy.check_square_zero().map_err(|e| e.to_string())?;
    ensure!(cohomology(&cy).map_err(|e| e.to_string())?.groups == h.groups, "permuted cover changes cohomology");
    Ok(())
}

/// Three-piece covers `{(-inf, a], [-b, inf), Ball(a + b)}` of the line, in every order.
pub fn line_covers_with_three_pieces(seed: u64) -> Check {
    let mut g = rng(seed);
    let (a, b) = (g.gen_range(0..12u64), g.gen_range(0..12u64));
    let params = CechParams::for_window(64).unwrap();
    let z = AbelianGroupFG::integers();
    let mut family = vec![
        Subspace::Halfspace { coeffs: vec![-1], rhs: -(a as i64) },
        Subspace::Halfspace { coeffs: vec![1], rhs: -(b as i64) },
        Subspace::Ball(a + b),
    ];
    let mut reference = None;
    for _ in 0..3 {
        let cx = cech_complex(line(), &Subspace::All, &family, &z, &params).map_err(|e| e.to_string())?;
        cx.check_square_zero().map_err(|e| e.to_string())?;
        let h = cohomology(&cx).map_err(|e| e.to_string())?;
        ensure!(h.group(0) == AbelianGroupFG::free(2), "H^0 = {}", h.group(0));
        ensure!(h.groups[1..].iter().all(AbelianGroupFG::is_zero), "higher cohomology");
        ensure!(reference.get_or_insert_with(|| h.groups.clone()) == &h.groups, "order dependence");
        family.rotate_left(1);
    }
    Ok(())
}
