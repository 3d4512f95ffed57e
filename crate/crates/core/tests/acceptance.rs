//! Acceptance run: one line per criterion with its measured time.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use coarse::cohomology::{cech_complex, cohomology, mayer_vietoris_report, AbelianGroupFG, CechParams, CohomologyResult};
use coarse::covers::{line_halves, z2_cake, zn_cake, zplus_blocks};
use coarse::ends::{ends, EndCount, EndsParams};
use coarse::logic::{cover_characterizations, cover_verdict, flasque_verdict, MapTable, Status, Witness};
use coarse::spaces::{build_space, ScaleSchedule, SpacePresentation, SpaceSpec, Subspace};
use common::suites::{self, Check};

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

type Suite = fn(u64) -> Check;
type Criterion = fn() -> Check;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn z() -> AbelianGroupFG {
    AbelianGroupFG::integers()
}

fn within(limit: Duration, start: Instant, what: &str) -> Check {
    let t = start.elapsed();
    ensure!(t < limit, "{what} took {t:.2?}, limit {limit:?}");
    Ok(())
}

fn cech(space: &SpacePresentation, cover: &[Subspace], w: u64) -> Result<CohomologyResult, String> {
    let params = CechParams::for_window(w).map_err(err)?;
    let cx = cech_complex(space, &Subspace::All, cover, &z(), &params).map_err(err)?;
    cx.check_square_zero().map_err(err)?;
    cohomology(&cx).map_err(err)
}

fn ends_table() -> Check {
    let cases = [
        ("Z_+", SpaceSpec::ZPlus, 256, 1),
        ("Z", SpaceSpec::zn(1), 256, 2),
        ("Z^2", SpaceSpec::zn(2), 64, 1),
        ("D_inf", SpaceSpec::DihedralInfinity, 256, 2),
        ("Z+Z", SpaceSpec::disjoint_union(SpaceSpec::zn(1), SpaceSpec::zn(1)), 256, 4),
    ];
    for (name, spec, w, expected) in cases {
        let start = Instant::now();
        let space = build_space(&spec, w).map_err(err)?;
        let report = ends(&space, &Subspace::All, &EndsParams::for_window(w), w).map_err(err)?;
        ensure!(report.count == EndCount::Finite(expected), "e({name}) = {:?}, expected {expected}", report.count);
        within(Duration::from_secs(5), start, name)?;
    }
    Ok(())
}

/// Size of the sphere of radius `n` in the Cayley graph of `F_2`, by breadth-first search.
fn free_group_sphere(n: usize) -> usize {
    let gens: [(i8, i8); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    let mut seen: BTreeSet<Vec<(i8, i8)>> = BTreeSet::from([Vec::new()]);
    let mut frontier = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for word in &frontier {
            for g in gens {
                let mut w: Vec<(i8, i8)> = word.clone();
                if w.last() == Some(&(-g.0, -g.1)) {
                    w.pop();
                } else {
                    w.push(g);
                }
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    frontier.len()
}

fn free_group_ends() -> Check {
    let space = build_space(&SpaceSpec::FreeGroup { rank: 2 }, 8).map_err(err)?;
    let params = EndsParams { scales: vec![1], cores: vec![2, 3, 4, 5], cap: 64 };
    let report = ends(&space, &Subspace::All, &params, 8).map_err(err)?;
    ensure!(matches!(report.count, EndCount::InfiniteAtCap(_)), "count {:?}", report.count);
    let counts: Vec<usize> = (2..=5).map(|n| report.count_at(1, n).unwrap_or(0)).collect();
    ensure!(counts.windows(2).all(|p| p[0] < p[1]), "counts {counts:?} not increasing");
    let oracle: Vec<usize> = (2..=5).map(free_group_sphere).collect();
    ensure!(counts == oracle, "counts {counts:?}, breadth-first {oracle:?}");
    Ok(())
}

fn line_cohomology() -> Check {
    let start = Instant::now();
    let space = build_space(&SpaceSpec::zn(1), 256).map_err(err)?;
    let h = cech(&space, &line_halves(), 256)?;
    let h0 = h.group(0);
    ensure!(h0.rank() == 2 && h0.torsion().is_empty(), "H0 = {h0}");
    ensure!(h.groups[1..].iter().all(AbelianGroupFG::is_zero), "higher groups {:?}", h.groups);
    within(Duration::from_secs(5), start, "Z")
}

fn plane_cohomology() -> Check {
    let start = Instant::now();
    let space = build_space(&SpaceSpec::zn(2), 64).map_err(err)?;
    let h = cech(&space, &z2_cake(), 64)?;
    ensure!(h.group(0) == z() && h.group(1) == z() && h.group(2).is_zero(), "H = {:?}", h.groups);
    within(Duration::from_secs(60), start, "Z^2")
}

fn space_cohomology() -> Check {
    let start = Instant::now();
    let w = 32;
    let space = build_space(&SpaceSpec::zn(3), w).map_err(err)?;
    let cover = zn_cake(3, 2);
    let params = CechParams::for_window(w).map_err(err)?;
    let v = cover_verdict(&space, &Subspace::All, &cover, &params.sched, w).map_err(err)?;
    ensure!(v.holds(), "cone cover {}", v.status);
    let h = cech(&space, &cover, w)?;
    ensure!(h.group(0) == z() && h.group(1).is_zero() && h.group(2) == z(), "H = {:?}", h.groups);
    ensure!(h.groups[3..].iter().all(AbelianGroupFG::is_zero), "H^>=3 = {:?}", &h.groups[3..]);
    within(Duration::from_secs(600), start, "Z^3")
}

fn half_line_acyclic() -> Check {
    let w = 256;
    let space = build_space(&SpaceSpec::ZPlus, w).map_err(err)?;
    let params = CechParams::for_window(w).map_err(err)?;
    for (ratio, pad) in [(2, 4), (3, 3), (2, 2)] {
        let cover = zplus_blocks(ratio, pad);
        let v = cover_verdict(&space, &Subspace::All, &cover, &params.sched, w).map_err(err)?;
        ensure!(v.holds(), "blocks({ratio}, {pad}) {}", v.status);
        let h = cech(&space, &cover, w)?;
        ensure!(h.group(0) == z(), "blocks({ratio}, {pad}): H0 = {}", h.group(0));
        ensure!(h.groups[1..].iter().all(AbelianGroupFG::is_zero), "blocks({ratio}, {pad}): {:?}", h.groups);
    }
    Ok(())
}

fn bounded_vanishing() -> Check {
    let table: Vec<Vec<u64>> = (0..20).map(|i| (0..20).map(|j| if i == j { 0 } else { 1 + (i + j) as u64 % 2 }).collect()).collect();
    let space = build_space(&SpaceSpec::Explicit { table, base: 0 }, 4).map_err(err)?;
    ensure!(space.len() == 20, "{} points", space.len());
    let params = CechParams {
        sched: ScaleSchedule::for_window(vec![1], 4).map_err(err)?,
        ends: EndsParams { scales: vec![1], cores: vec![1, 2, 3], cap: 64 },
        window: 4,
    };
    let cx = cech_complex(&space, &Subspace::All, &[], &z(), &params).map_err(err)?;
    cx.check_square_zero().map_err(err)?;
    let h = cohomology(&cx).map_err(err)?;
    ensure!(h.group(0).is_zero() && h.groups.iter().all(AbelianGroupFG::is_zero), "H = {:?}", h.groups);
    Ok(())
}

fn cover_regression() -> Check {
    let w = 256;
    let line = build_space(&SpaceSpec::zn(1), w).map_err(err)?;
    let sched = CechParams::for_window(w).map_err(err)?.sched;
    let halves = cover_verdict(&line, &Subspace::All, &line_halves(), &sched, w).map_err(err)?;
    ensure!(halves.holds(), "halves {}", halves.status);
    let parity = [Subspace::Residue { modulus: 2, residue: 0 }, Subspace::Residue { modulus: 2, residue: 1 }];
    let v = cover_verdict(&line, &Subspace::All, &parity, &sched, w).map_err(err)?;
    ensure!(v.status == Status::Fails, "parity {}", v.status);
    ensure!(
        v.witness.iter().any(|x| matches!(x, Witness::Pair(a, b) if line.distance(*a, *b) == 1)),
        "no witness pair at distance 1"
    );
    let mut statuses = [0usize; 3];
    for seed in 0..100 {
        let family = common::block_family(&mut suites::rng(seed), 400);
        let check = cover_characterizations(suites::half_line(), &Subspace::All, &family, &sched, w).map_err(err)?;
        ensure!(check.agree(), "seed {seed}: pairwise {} vs divergence {}", check.pairwise.status, check.divergence.status);
        statuses[check.pairwise.status as usize] += 1;
    }
    ensure!(statuses[Status::Holds as usize] > 0 && statuses[Status::Fails as usize] > 0, "families not varied: {statuses:?}");
    Ok(())
}

fn mayer_vietoris() -> Check {
    let line = build_space(&SpaceSpec::zn(1), 256).map_err(err)?;
    let params = CechParams::for_window(256).map_err(err)?;
    let mv = mayer_vietoris_report(&line, &Subspace::All, &Subspace::z_minus(), &Subspace::z_plus(), &z(), &params).map_err(err)?;
    ensure!(mv.exact(), "Z: {:?}", mv.nodes);
    ensure!(mv.h0_union == AbelianGroupFG::free(2) && mv.h1_union.is_zero(), "Z: H0 {} H1 {}", mv.h0_union, mv.h1_union);

    let plane = build_space(&SpaceSpec::zn(2), 64).map_err(err)?;
    let params = CechParams::for_window(64).map_err(err)?;
    let cake = z2_cake();
    let pieces = [
        (Subspace::Union(cake[0..3].to_vec()), Subspace::Union(vec![cake[2].clone(), cake[3].clone(), cake[4].clone(), cake[0].clone()])),
        (Subspace::Union(cake[0..2].to_vec()), Subspace::Union(cake[1..5].to_vec())),
    ];
    for (i, (a, b)) in pieces.iter().enumerate() {
        let mv = mayer_vietoris_report(&plane, &Subspace::All, a, b, &z(), &params).map_err(err)?;
        ensure!(mv.exact(), "Z^2 cover {i}: {:?}", mv.nodes);
        ensure!((mv.ends_union, mv.ends_intersection) == (1, 2), "Z^2 cover {i}: ends {} / {}", mv.ends_union, mv.ends_intersection);
        ensure!(mv.h0_union == z() && mv.h1_union == z(), "Z^2 cover {i}: H0 {} H1 {}", mv.h0_union, mv.h1_union);
    }
    Ok(())
}

fn flasqueness() -> Check {
    let (w, horizon) = (256, 64);
    let sched = CechParams::for_window(w).map_err(err)?.sched;
    let zp = build_space(&SpaceSpec::ZPlus, 257).map_err(err)?;
    let shift = MapTable::translation(&zp, w, &[1]).map_err(err)?;
    let r = flasque_verdict(&zp, &shift, &sched, w, horizon).map_err(err)?;
    ensure!(r.close.holds() && r.escape.holds() && r.uniform.holds(), "shift: {} {} {}", r.close.status, r.escape.status, r.uniform.status);
    let line = build_space(&SpaceSpec::zn(1), w).map_err(err)?;
    let id = MapTable::identity(&line, w).map_err(err)?;
    let r = flasque_verdict(&line, &id, &sched, w, horizon).map_err(err)?;
    ensure!(r.escape.fails(), "identity escape {}", r.escape.status);
    ensure!(r.close.holds() && r.uniform.holds(), "identity: close {} uniform {}", r.close.status, r.uniform.status);
    Ok(())
}

fn property_suites() -> Check {
    let runs: [(&str, Suite, u64); 8] = [
        ("entourage composition", suites::entourage_composition, 200),
        ("coentourage closure", suites::coentourage_closure, 100),
        ("square iff bounded", suites::square_iff_bounded, 100),
        ("cover characterizations", suites::characterizations_agree, 100),
        ("grothendieck axioms", suites::grothendieck_axioms, 100),
        ("smith normal form", suites::smith_normal_form_checks, 500),
        ("complexes and permutations", suites::complexes_and_permutations, 60),
        ("line covers", suites::line_covers_with_three_pieces, 20),
    ];
    suites::metric_axioms(1, 10_000).map_err(|e| format!("metric axioms: {e}"))?;
    for (name, check, count) in runs {
        for seed in 0..count {
            check(seed).map_err(|e| format!("{name}, seed {seed}: {e}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("ends table", ends_table),
        ("free group ends", free_group_ends),
        ("cohomology of Z", line_cohomology),
        ("cohomology of Z^2", plane_cohomology),
        ("cohomology of Z^3", space_cohomology),
        ("Z_+ block covers acyclic", half_line_acyclic),
        ("bounded space vanishing", bounded_vanishing),
        ("cover predicate regression", cover_regression),
        ("Mayer-Vietoris exactness", mayer_vietoris),
        ("flasqueness", flasqueness),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let t = start.elapsed();
        match result {
            Ok(()) => println!("criterion {:>2} PASS  {name}  ({t:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}  ({t:.2?}): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
