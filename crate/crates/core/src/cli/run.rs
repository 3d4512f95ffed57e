use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{Command, JobConfig, MapExpr, PairExpr, PointLit, SetExpr};
use super::report::{Entry, Report};
use super::{CliError, ModuleError};
use crate::cohomology::{
    cech_complex, cohomology, constant_sections, mayer_vietoris_report, refinement_comparison, CechParams, CohomologyError,
    CohomologyResult,
};
use crate::ends::{end_restriction, ends, EndCount, EndsError, EndsParams, EndsReport};
use crate::logic::{
    closeness_verdict, coarse_map_verdict, coarsely_surjective_verdict, coentourage_verdict, cover_verdict, flasque_verdict,
    is_bounded_subset, is_refinement, shift_cover, MapTable, PairPredicate, ScaleBound, Status, Verdict, Witness,
};
use crate::spaces::{build_space, Point, PointId, ScaleSchedule, SpacePresentation, Subspace};

type Fields = Vec<(String, String)>;

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn lit_text(p: &PointLit) -> String {
    match p {
        PointLit::Int(v) => v.to_string(),
        PointLit::Word(w) if w.is_empty() => "e".into(),
        PointLit::Word(w) => Point::Word(w.clone()).to_string(),
        PointLit::List(items) => format!("[{}]", join(items.iter().map(lit_text), ",")),
        PointLit::Left(q) => format!("left {}", lit_text(q)),
        PointLit::Right(q) => format!("right {}", lit_text(q)),
    }
}

fn concrete(space: &SpacePresentation, p: &PointLit) -> Option<Point> {
    let ints = |items: &[PointLit]| items.iter().map(|q| if let PointLit::Int(v) = q { Some(*v) } else { None }).collect::<Option<Vec<_>>>();
    match (p, space.factors()) {
        (PointLit::Left(q), Some((l, _))) if space.is_disjoint_union() => Some(Point::Left(l.locate(&concrete(l, q)?)?)),
        (PointLit::Right(q), Some((_, r))) if space.is_disjoint_union() => Some(Point::Right(r.locate(&concrete(r, q)?)?)),
        (PointLit::List(items), Some((l, r))) if !space.is_disjoint_union() && items.len() == 2 => {
            Some(Point::Pair(l.locate(&concrete(l, &items[0])?)?, r.locate(&concrete(r, &items[1])?)?))
        }
        (PointLit::Int(v), None) if space.lattice_dim() == Some(1) => Some(Point::Lattice(vec![*v])),
        (PointLit::List(items), None) if space.lattice_dim().is_some() => Some(Point::Lattice(ints(items)?)),
        (PointLit::Word(w), None) if space.is_word_space() => Some(Point::Word(w.clone())),
        (PointLit::Int(v), None) if space.lattice_dim().is_none() && !space.is_word_space() => {
            usize::try_from(*v).ok().map(Point::Node)
        }
        _ => None,
    }
}

fn point_id(space: &SpacePresentation, p: &PointLit) -> Result<PointId, ModuleError> {
    concrete(space, p).and_then(|q| space.locate(&q)).ok_or_else(|| ModuleError::UnknownPoint(lit_text(p)))
}

fn subspace(space: &SpacePresentation, s: &SetExpr) -> Result<Subspace, ModuleError> {
    let out = match s {
        SetExpr::Leaf(u) => u.clone(),
        SetExpr::Points(ps) => Subspace::explicit(ps.iter().map(|p| point_id(space, p)).collect::<Result<_, _>>()?),
        SetExpr::Compl(inner) => subspace(space, inner)?.complement(),
        SetExpr::Union(parts) => Subspace::Union(parts.iter().map(|p| subspace(space, p)).collect::<Result<_, _>>()?),
        SetExpr::Inter(parts) => Subspace::Intersection(parts.iter().map(|p| subspace(space, p)).collect::<Result<_, _>>()?),
    };
    out.validate(space)?;
    Ok(out)
}

fn family(space: &SpacePresentation, f: &[SetExpr]) -> Result<Vec<Subspace>, ModuleError> {
    f.iter().map(|s| subspace(space, s)).collect()
}

fn map_table<'a>(space: &'a SpacePresentation, w: u64, m: &MapExpr) -> Result<MapTable<'a>, ModuleError> {
    Ok(match m {
        MapExpr::Identity => MapTable::identity(space, w)?,
        MapExpr::Shift(v) => MapTable::translation(space, w, v)?,
        MapExpr::Affine { matrix, offset } => MapTable::affine(space, space, w, matrix, offset)?,
        MapExpr::LeftMul(word) => MapTable::left_multiplication(space, w, word)?,
        MapExpr::RightMul(word) => MapTable::right_multiplication(space, w, word)?,
        MapExpr::Product(f, g) => {
            let (l, r) = match space.factors() {
                Some(lr) if !space.is_disjoint_union() => lr,
                _ => return Err(crate::spaces::SpaceError::InvalidParameter("product maps need a product space".into()).into()),
            };
            let (ft, gt) = (map_table(l, w, f)?, map_table(r, w, g)?);
            MapTable::product(space, space, w, &ft, &gt)?
        }
        MapExpr::Restrict(f, u) => map_table(space, w, f)?.restrict(&subspace(space, u)?),
    })
}

fn pair_predicate(space: &SpacePresentation, w: u64, p: &PairExpr) -> Result<PairPredicate, ModuleError> {
    Ok(match p {
        PairExpr::Diagonal => PairPredicate::Diagonal,
        PairExpr::Square(u) => PairPredicate::Square(subspace(space, u)?),
        PairExpr::Cross(u, v) => PairPredicate::Cross(subspace(space, u)?, subspace(space, v)?),
        PairExpr::OutsideSquares(f) => PairPredicate::OutsideSquares(family(space, f)?),
        PairExpr::Graph(m) => {
            let t = map_table(space, w, m)?;
            PairPredicate::Graph((0..space.window_len(w) as u32).map(|x| t.image(PointId(x))).collect())
        }
        PairExpr::Not(q) => pair_predicate(space, w, q)?.not(),
        PairExpr::And(v) => PairPredicate::And(v.iter().map(|q| pair_predicate(space, w, q)).collect::<Result<_, _>>()?),
        PairExpr::Or(v) => PairPredicate::Or(v.iter().map(|q| pair_predicate(space, w, q)).collect::<Result<_, _>>()?),
    })
}

fn witness_text(space: &SpacePresentation, w: &Witness) -> String {
    match w {
        Witness::Point(x) => space.label(*x),
        Witness::Pair(x, y) => format!("{}~{}", space.label(*x), space.label(*y)),
    }
}

fn scale_text(b: &ScaleBound) -> String {
    format!("{}:{}:{}", b.scale, b.bound.map_or("-".to_string(), |v| v.to_string()), b.status)
}

fn verdict_fields(space: &SpacePresentation, prefix: &str, v: &Verdict) -> Fields {
    vec![
        (format!("{prefix}.status"), v.status.to_string()),
        (format!("{prefix}.R"), v.scale.to_string()),
        (format!("{prefix}.W"), v.window.to_string()),
        (format!("{prefix}.bound"), v.bound.map_or("none".into(), |b| b.to_string())),
        (format!("{prefix}.witness"), join(v.witness.iter().map(|w| witness_text(space, w)), " ")),
        (format!("{prefix}.scales"), join(v.per_scale.iter().map(scale_text), " ")),
    ]
}

fn verdict_summary(space: &SpacePresentation, v: &Verdict) -> String {
    match (v.status, v.bound, v.witness.first()) {
        (Status::Holds, Some(b), _) => format!("bound {b}"),
        (Status::Fails, _, Some(w)) => format!("witness {}", witness_text(space, w)),
        (s, _, _) => s.to_string(),
    }
}

struct Outcome {
    status: Status,
    stamp: (u64, u64),
    summary: String,
    fields: Fields,
}

fn from_verdict(space: &SpacePresentation, v: &Verdict) -> Outcome {
    Outcome { status: v.status, stamp: (v.scale, v.window), summary: verdict_summary(space, v), fields: verdict_fields(space, "verdict", v) }
}

fn ends_fields(space: &SpacePresentation, rep: &EndsReport) -> Fields {
    let (r, n) = rep.params.plateau_cell();
    let (count, infinite) = match rep.count {
        EndCount::Finite(e) => (e.to_string(), false),
        EndCount::InfiniteAtCap(_) => ("infinite".to_string(), true),
    };
    vec![
        ("ends.count".into(), count),
        ("ends.infinite".into(), infinite.to_string()),
        ("ends.R".into(), r.to_string()),
        ("ends.W".into(), rep.window.to_string()),
        ("ends.plateau".into(), format!("r={r} n={n}")),
        ("ends.trace".into(), join(rep.trace.iter().map(|c| format!("r{}n{}:{}", c.r, c.n, c.count)), " ")),
        ("ends.representatives".into(), join(rep.components.iter().map(|c| space.label(c.representative())), " ")),
    ]
}

fn ends_summary(rep: &EndsReport) -> String {
    match rep.count {
        EndCount::Finite(e) => format!("e = {e}"),
        EndCount::InfiniteAtCap(cap) => {
            let top = rep.trace.iter().map(|c| c.count).max().unwrap_or(0);
            format!("infinitely many ends ({top} components, cap {cap})")
        }
    }
}

fn cohomology_fields(prefix: &str, h: &CohomologyResult, degrees: usize) -> Fields {
    let mut out = vec![
        (format!("{prefix}.coeff"), h.coeff.to_string()),
        (format!("{prefix}.dims"), join(&h.dims, ",")),
        (format!("{prefix}.euler"), h.euler_characteristic().to_string()),
    ];
    for k in 0..degrees.max(1) {
        let g = h.group(k);
        out.push((format!("{prefix}.H{k}"), g.to_string()));
        out.push((format!("{prefix}.H{k}.rank"), g.rank().to_string()));
        out.push((format!("{prefix}.H{k}.torsion"), join(g.torsion(), ",")));
    }
    out
}

fn cohomology_summary(h: &CohomologyResult, degrees: usize) -> String {
    join((0..degrees.max(1)).map(|k| format!("H{k}={}", h.group(k))), " ")
}

/// Converts an unverified cover into a reportable outcome instead of an error.
fn cover_rejected(e: &CohomologyError, sched: &ScaleSchedule, w: u64) -> Option<Outcome> {
    match e {
        CohomologyError::CoverNotVerified(status) => Some(Outcome {
            status: *status,
            stamp: (sched.max_scale(), w),
            summary: format!("cover check {status}"),
            fields: vec![("verdict.status".into(), status.to_string())],
        }),
        _ => None,
    }
}

fn metric_check(space: &SpacePresentation, w: u64, samples: usize, seed: u64) -> Outcome {
    let n = space.window_len(w) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witness = Vec::new();
    let mut violations = 0usize;
    for _ in 0..samples {
        let (x, y, z) = (PointId(rng.gen_range(0..n)), PointId(rng.gen_range(0..n)), PointId(rng.gen_range(0..n)));
        let (dxy, dyz, dxz) = (space.distance(x, y), space.distance(y, z), space.distance(x, z));
        let ok = space.distance(x, x) == 0 && dxy == space.distance(y, x) && (x == y || dxy > 0) && dxz <= dxy + dyz;
        if !ok {
            violations += 1;
            if witness.len() < crate::logic::MAX_WITNESSES {
                witness.push(format!("{}~{}~{}", space.label(x), space.label(y), space.label(z)));
            }
        }
    }
    let status = if violations == 0 { Status::Holds } else { Status::Fails };
    Outcome {
        status,
        stamp: (0, w),
        summary: format!("{samples} triples, {violations} violations"),
        fields: vec![
            ("verdict.status".into(), status.to_string()),
            ("verdict.R".into(), "0".into()),
            ("verdict.W".into(), w.to_string()),
            ("metric.samples".into(), samples.to_string()),
            ("metric.seed".into(), seed.to_string()),
            ("metric.violations".into(), violations.to_string()),
            ("verdict.witness".into(), witness.join(" ")),
        ],
    }
}

struct Context<'a> {
    space: &'a SpacePresentation,
    w: u64,
    sched: ScaleSchedule,
    ends: EndsParams,
    cech: CechParams,
    cfg: &'a JobConfig,
}

fn execute(cx: &Context, command: &Command) -> Result<Outcome, ModuleError> {
    let (space, w, sched) = (cx.space, cx.w, &cx.sched);
    let coeff = &cx.cfg.params.coeff;
    Ok(match command {
        Command::Metric => metric_check(space, w, cx.cfg.params.samples, cx.cfg.params.seed),
        Command::Bounded(u) => from_verdict(space, &is_bounded_subset(space, &subspace(space, u)?, w)?),
        Command::Coentourage(p) => from_verdict(space, &coentourage_verdict(space, &pair_predicate(space, w, p)?, sched, w)?),
        Command::Cover { target, family: f } => {
            from_verdict(space, &cover_verdict(space, &subspace(space, target)?, &family(space, f)?, sched, w)?)
        }
        Command::ShiftCover { r, target, family: f } => {
            let (shifted, t) = shift_cover(space, *r, &family(space, f)?, &subspace(space, target)?, w)?;
            let mut o = from_verdict(space, &cover_verdict(space, &t, &shifted, sched, w)?);
            o.fields.push(("shift.r".into(), r.to_string()));
            o
        }
        Command::Refinement { fine, coarse } => {
            let found = is_refinement(space, &family(space, fine)?, &family(space, coarse)?, w);
            let status = if found.is_some() { Status::Holds } else { Status::Fails };
            let assignment = found.map_or("none".to_string(), |a| join(a, ","));
            Outcome {
                status,
                stamp: (0, w),
                summary: format!("assignment {assignment}"),
                fields: vec![
                    ("verdict.status".into(), status.to_string()),
                    ("verdict.R".into(), "0".into()),
                    ("verdict.W".into(), w.to_string()),
                    ("refinement.assignment".into(), assignment),
                ],
            }
        }
        Command::Closeness(f, g) => {
            let (f, g) = (map_table(space, w, f)?, map_table(space, w, g)?);
            from_verdict(space, &closeness_verdict(&f, &g, sched, w)?)
        }
        Command::CoarseMap(f) => from_verdict(space, &coarse_map_verdict(&map_table(space, w, f)?, sched, w)?),
        Command::Surjective(f) => from_verdict(space, &coarsely_surjective_verdict(&map_table(space, w, f)?, sched, w)?),
        Command::Flasque { map, horizon } => {
            let n = horizon.unwrap_or_else(|| cx.cfg.horizon());
            let rep = flasque_verdict(space, &map_table(space, w, map)?, sched, w, n)?;
            let mut o = from_verdict(space, &rep.overall);
            o.summary = format!("close {}, escape {}, uniform {}", rep.close.status, rep.escape.status, rep.uniform.status);
            o.fields.extend(verdict_fields(space, "flasque.close", &rep.close));
            o.fields.extend(verdict_fields(space, "flasque.escape", &rep.escape));
            o.fields.extend(verdict_fields(space, "flasque.uniform", &rep.uniform));
            o.fields.push(("flasque.horizon".into(), rep.horizon.to_string()));
            o.fields.push(("flasque.inner_window".into(), rep.inner_window.to_string()));
            o
        }
        Command::Ends(u) => match ends(space, &subspace(space, u)?, &cx.ends, w) {
            Ok(rep) => Outcome {
                status: Status::Holds,
                stamp: (rep.params.plateau_cell().0, w),
                summary: ends_summary(&rep),
                fields: ends_fields(space, &rep),
            },
            Err(EndsError::NoPlateau { trace }) => Outcome {
                status: Status::Inconclusive,
                stamp: (cx.ends.plateau_cell().0, w),
                summary: "no plateau".into(),
                fields: vec![
                    ("ends.count".into(), "unknown".into()),
                    ("ends.trace".into(), join(trace.iter().map(|c| format!("r{}n{}:{}", c.r, c.n, c.count)), " ")),
                ],
            },
            Err(e) => return Err(e.into()),
        },
        Command::EndRestriction(u, v) => {
            let res = end_restriction(space, &subspace(space, u)?, &subspace(space, v)?, &cx.ends, w)?;
            Outcome {
                status: Status::Holds,
                stamp: (cx.ends.plateau_cell().0, w),
                summary: format!("{} -> {} ends, assignment {}", res.domain_ends, res.codomain_ends, join(&res.assignment, ",")),
                fields: vec![
                    ("restriction.domain_ends".into(), res.domain_ends.to_string()),
                    ("restriction.codomain_ends".into(), res.codomain_ends.to_string()),
                    ("restriction.assignment".into(), join(&res.assignment, ",")),
                ],
            }
        }
        Command::Sections(u) => {
            let g = constant_sections(space, &subspace(space, u)?, coeff, &cx.ends, w)?;
            Outcome {
                status: Status::Holds,
                stamp: (cx.ends.plateau_cell().0, w),
                summary: format!("sections {g}"),
                fields: vec![("sections.group".into(), g.to_string()), ("sections.rank".into(), g.rank().to_string())],
            }
        }
        Command::Cohomology { target, cover } => {
            let (t, f) = (subspace(space, target)?, family(space, cover)?);
            let complex = match cech_complex(space, &t, &f, coeff, &cx.cech) {
                Ok(c) => c,
                Err(e) => return cover_rejected(&e, sched, w).ok_or(e.into()),
            };
            let h = cohomology(&complex)?;
            let mut fields = verdict_fields(space, "verdict", &complex.verdict);
            fields.extend(cohomology_fields("cohomology", &h, complex.degrees()));
            Outcome {
                status: Status::Holds,
                stamp: (complex.verdict.scale, w),
                summary: cohomology_summary(&h, complex.degrees()),
                fields,
            }
        }
        Command::MayerVietoris { target, a, b } => {
            let (t, a, b) = (subspace(space, target)?, subspace(space, a)?, subspace(space, b)?);
            let rep = match mayer_vietoris_report(space, &t, &a, &b, coeff, &cx.cech) {
                Ok(r) => r,
                Err(e) => return cover_rejected(&e, sched, w).ok_or(e.into()),
            };
            let status = if rep.exact() { Status::Holds } else { Status::Fails };
            let mut fields = verdict_fields(space, "verdict", &rep.verdict);
            fields[0].1 = status.to_string();
            fields.extend([
                ("mv.ends".into(), format!("{},{},{},{}", rep.ends_union, rep.ends_a, rep.ends_b, rep.ends_intersection)),
                ("mv.rank_iota".into(), rep.rank_iota.to_string()),
                ("mv.rank_phi".into(), rep.rank_phi.to_string()),
                ("mv.rank_delta".into(), rep.rank_delta.to_string()),
                ("mv.H0".into(), rep.h0_union.to_string()),
                ("mv.H1".into(), rep.h1_union.to_string()),
                ("mv.exact".into(), rep.exact().to_string()),
            ]);
            for node in &rep.nodes {
                fields.push((format!("mv.node.{}", node.name), format!("ker={} im={} exact={}", node.kernel_rank, node.image_rank, node.exact())));
            }
            Outcome {
                status,
                stamp: (rep.verdict.scale, w),
                summary: format!("exact {}, H0={} H1={}", rep.exact(), rep.h0_union, rep.h1_union),
                fields,
            }
        }
        Command::Compare { target, fine, coarse } => {
            let (t, f, c) = (subspace(space, target)?, family(space, fine)?, family(space, coarse)?);
            let cmp = match refinement_comparison(space, &t, &f, &c, coeff, &cx.cech) {
                Ok(r) => r,
                Err(e) => return cover_rejected(&e, sched, w).ok_or(e.into()),
            };
            let top = cmp.induced_ranks.len();
            let mut fields = cohomology_fields("compare.fine", &cmp.fine, top);
            fields.extend(cohomology_fields("compare.coarse", &cmp.coarse, top));
            fields.push(("compare.assignment".into(), join(&cmp.assignment, ",")));
            fields.push(("compare.induced_ranks".into(), join(&cmp.induced_ranks, ",")));
            fields.push(("compare.stabilized".into(), cmp.stabilized.to_string()));
            Outcome {
                status: Status::Holds,
                stamp: (sched.max_scale(), w),
                summary: format!("stabilized {}, induced ranks {}", cmp.stabilized, join(&cmp.induced_ranks, ",")),
                fields,
            }
        }
    })
}

/// Runs every command of `config` in order.
pub fn run(config: &JobConfig) -> Result<Report, CliError> {
    config.validate()?;
    let w = config.window();
    let wrap = |index: usize, label: &str, source: ModuleError| CliError::Command { index, label: label.to_string(), source };
    let space = build_space(&config.space, config.space_window()).map_err(|e| wrap(0, "space", e.into()))?;
    let cx = Context {
        space: &space,
        w,
        sched: config.schedule()?,
        ends: config.ends_params()?,
        cech: config.cech_params()?,
        cfg: config,
    };
    let mut entries = Vec::with_capacity(config.jobs.len());
    for (i, job) in config.jobs.iter().enumerate() {
        let o = execute(&cx, &job.command).map_err(|e| wrap(i + 1, &job.label, e))?;
        entries.push(Entry {
            label: job.label.clone(),
            command: job.command.name(),
            status: o.status,
            stamp: o.stamp,
            summary: o.summary,
            fields: o.fields,
        });
    }
    Ok(Report { space: config.space_source.clone(), window: w, seed: config.params.seed, entries })
}
