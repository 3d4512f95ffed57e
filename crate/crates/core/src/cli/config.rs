//! Job configurations: `section.key = value` lines resolved into typed
//! expressions.
//!
//! Names are resolved at parse time. Point literals stay symbolic until the
//! space is materialized by [`run`](super::run).

use std::collections::{BTreeMap, HashSet};

use super::syntax::{parse_located, single, Located, Phrase, Term, TermKind};
use super::CliError;
use crate::cohomology::{AbelianGroupFG, CechParams};
use crate::ends::{EndsParams, DEFAULT_CAP};
use crate::spaces::{parse_word, BlockRule, LatticeMetric, Letter, ScaleSchedule, Sign, SpaceSpec, Subspace};

/// A point written in the config, interpreted against the space kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointLit {
    /// Coordinate on a one-dimensional lattice or node index of a finite space.
    Int(i64),
    /// Group word; `e` is the identity.
    Word(Vec<Letter>),
    /// Coordinates on `Z^n`, or the two factors of a product point.
    List(Vec<PointLit>),
    Left(Box<PointLit>),
    Right(Box<PointLit>),
}

/// Subspace expression; everything except explicit points maps directly to
/// a [`Subspace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    Leaf(Subspace),
    Points(Vec<PointLit>),
    Compl(Box<SetExpr>),
    Union(Vec<SetExpr>),
    Inter(Vec<SetExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapExpr {
    Identity,
    Shift(Vec<i64>),
    Affine { matrix: Vec<Vec<i64>>, offset: Vec<i64> },
    LeftMul(Vec<Letter>),
    RightMul(Vec<Letter>),
    /// Factorwise map on a product space.
    Product(Box<MapExpr>, Box<MapExpr>),
    Restrict(Box<MapExpr>, SetExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairExpr {
    Diagonal,
    Square(SetExpr),
    Cross(SetExpr, SetExpr),
    OutsideSquares(Vec<SetExpr>),
    Graph(MapExpr),
    Not(Box<PairExpr>),
    And(Vec<PairExpr>),
    Or(Vec<PairExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    /// Randomized check of the metric axioms on sampled triples.
    Metric,
    Bounded(SetExpr),
    Coentourage(PairExpr),
    Cover { target: SetExpr, family: Vec<SetExpr> },
    ShiftCover { r: u64, target: SetExpr, family: Vec<SetExpr> },
    Refinement { fine: Vec<SetExpr>, coarse: Vec<SetExpr> },
    Closeness(MapExpr, MapExpr),
    CoarseMap(MapExpr),
    Surjective(MapExpr),
    Flasque { map: MapExpr, horizon: Option<u64> },
    Ends(SetExpr),
    EndRestriction(SetExpr, SetExpr),
    Sections(SetExpr),
    Cohomology { target: SetExpr, cover: Vec<SetExpr> },
    MayerVietoris { target: SetExpr, a: SetExpr, b: SetExpr },
    Compare { target: SetExpr, fine: Vec<SetExpr>, coarse: Vec<SetExpr> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Metric => "metric",
            Command::Bounded(_) => "bounded",
            Command::Coentourage(_) => "coentourage",
            Command::Cover { .. } => "cover",
            Command::ShiftCover { .. } => "shift_cover",
            Command::Refinement { .. } => "refinement",
            Command::Closeness(..) => "closeness",
            Command::CoarseMap(_) => "coarse_map",
            Command::Surjective(_) => "surjective",
            Command::Flasque { .. } => "flasque",
            Command::Ends(_) => "ends",
            Command::EndRestriction(..) => "end_restriction",
            Command::Sections(_) => "sections",
            Command::Cohomology { .. } => "cohomology",
            Command::MayerVietoris { .. } => "mayer_vietoris",
            Command::Compare { .. } => "compare",
        }
    }

    fn uses_maps(&self) -> bool {
        fn pair(p: &PairExpr) -> bool {
            match p {
                PairExpr::Graph(_) => true,
                PairExpr::Not(q) => pair(q),
                PairExpr::And(v) | PairExpr::Or(v) => v.iter().any(pair),
                _ => false,
            }
        }
        match self {
            Command::Closeness(..) | Command::CoarseMap(_) | Command::Surjective(_) | Command::Flasque { .. } => true,
            Command::Coentourage(p) => pair(p),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub label: String,
    pub line: usize,
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub window: u64,
    /// Cover and coentourage scales; defaults to `1, 2, 4, ...` up to `W/8`.
    pub scales: Option<Vec<u64>>,
    pub ends_r: Option<Vec<u64>>,
    pub ends_n: Option<Vec<u64>>,
    pub cap: usize,
    pub coeff: AbelianGroupFG,
    /// Flasque horizon; defaults to `W/4`.
    pub horizon: Option<u64>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub space: SpaceSpec,
    /// The `space.kind` value as written.
    pub space_source: String,
    pub max_window: Option<u64>,
    pub subspaces: BTreeMap<String, SetExpr>,
    pub maps: BTreeMap<String, MapExpr>,
    pub params: Params,
    pub jobs: Vec<Job>,
}

const KEYWORDS: &[&str] = &["all", "empty", "identity", "diagonal", "metric"];

fn out_of_range(name: &str, value: impl ToString, reason: impl Into<String>) -> CliError {
    CliError::ParamOutOfRange { name: name.into(), value: value.to_string(), reason: reason.into() }
}

impl JobConfig {
    pub fn window(&self) -> u64 {
        self.params.window
    }

    /// Materialized radius: the window, doubled when a command tabulates maps
    /// so that images near the rim stay inside the presentation.
    pub fn space_window(&self) -> u64 {
        self.max_window.unwrap_or_else(|| {
            let w = self.params.window;
            if self.jobs.iter().any(|j| j.command.uses_maps()) {
                2 * w
            } else {
                w
            }
        })
    }

    pub fn schedule(&self) -> Result<ScaleSchedule, CliError> {
        let w = self.params.window;
        let scales = match &self.params.scales {
            Some(s) => s.clone(),
            None => CechParams::for_window(w).map_err(|e| out_of_range("params.window", w, e.to_string()))?.sched.scales().to_vec(),
        };
        let text = scales.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        if scales.last().is_some_and(|&r| 4 * r > w) {
            return Err(out_of_range("params.scales", text, format!("largest scale exceeds W/4 = {}", w / 4)));
        }
        ScaleSchedule::new(scales).map_err(|e| out_of_range("params.scales", text, e.to_string()))
    }

    pub fn ends_params(&self) -> Result<EndsParams, CliError> {
        let w = self.params.window;
        let default = EndsParams::for_window(w);
        let p = EndsParams {
            scales: self.params.ends_r.clone().unwrap_or(default.scales),
            cores: self.params.ends_n.clone().unwrap_or(default.cores),
            cap: self.params.cap,
        };
        p.validate(w).map_err(|e| out_of_range("params.ends_r/ends_n", format!("{:?}/{:?}", p.scales, p.cores), e.to_string()))?;
        Ok(p)
    }

    pub fn cech_params(&self) -> Result<CechParams, CliError> {
        Ok(CechParams { window: self.params.window, sched: self.schedule()?, ends: self.ends_params()? })
    }

    pub fn horizon(&self) -> u64 {
        self.params.horizon.unwrap_or(self.params.window / 4).max(1)
    }

    /// Checks every numeric parameter against the window.
    pub fn validate(&self) -> Result<(), CliError> {
        let w = self.params.window;
        if w < 4 {
            return Err(out_of_range("params.window", w, "the window must be at least 4"));
        }
        if let Some(m) = self.max_window {
            if w > m {
                return Err(out_of_range("params.window", w, format!("exceeds space.max_window = {m}")));
            }
        }
        self.schedule()?;
        self.ends_params()?;
        if self.params.horizon == Some(0) {
            return Err(out_of_range("params.horizon", 0, "the horizon must be positive"));
        }
        for job in &self.jobs {
            if let Command::ShiftCover { r, .. } = job.command {
                if 4 * r > w {
                    return Err(out_of_range(&format!("run.{}", job.label), r, "shift exceeds W/4"));
                }
            }
        }
        Ok(())
    }

    /// Replaces the window, as `--window` does.
    pub fn with_window(mut self, w: u64) -> Result<Self, CliError> {
        self.params.window = w;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.params.seed = seed;
        self
    }
}

struct Entry {
    line: usize,
    key_col: usize,
    raw: String,
    value_col: usize,
    value: Vec<Phrase>,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> CliError {
    CliError::SyntaxError { line, col, message: message.into() }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|f| f.is_ascii_alphabetic() || f == '_') && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

/// Parses a configuration file.
pub fn parse_config(text: &str) -> Result<JobConfig, CliError> {
    let mut entries: Vec<(String, Entry)> = Vec::new();
    let mut seen = HashSet::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")));
    while let Some((line, content)) = lines.next() {
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.chars().take_while(|c| c.is_whitespace()).count();
        let Some(eq) = content.find('=') else {
            return Err(syntax(line, lead + 1, "expected `key = value`"));
        };
        let key = content[..eq].trim().to_string();
        if key.is_empty() || !key.split('.').all(is_ident) {
            return Err(syntax(line, lead + 1, format!("malformed key `{key}`")));
        }
        if !seen.insert(key.clone()) {
            return Err(syntax(line, lead + 1, format!("duplicate key `{key}`")));
        }
        let value_col = content[..eq + 1].chars().count() + 1;
        // A trailing backslash continues the value on the next line.
        let mut located: Vec<Located> = Vec::new();
        let mut segment = (line, value_col, &content[eq + 1..]);
        loop {
            let (l, c0, text) = segment;
            let trimmed = text.trim_end();
            let continued = trimmed.ends_with('\\');
            let body = if continued { &trimmed[..trimmed.len() - 1] } else { text };
            located.extend(body.chars().enumerate().map(|(i, ch)| (ch, l, c0 + i)));
            if !continued {
                break;
            }
            match lines.next() {
                Some((next, t)) => {
                    located.push((' ', l, c0 + body.chars().count()));
                    segment = (next, 1, t);
                }
                None => return Err(syntax(l, c0 + body.chars().count(), "continuation at end of file")),
            }
        }
        let end = located.last().map_or((line, value_col), |&(_, l, c)| (l, c + 1));
        let raw: String = located.iter().map(|c| c.0).collect::<String>().trim().to_string();
        // Coefficient groups use their own notation (`Z^2 + Z/3`).
        let value = if key == "params.coeff" { Vec::new() } else { parse_located(&located, end)? };
        entries.push((key, Entry { line, key_col: lead + 1, raw, value_col, value }));
    }

    let mut space_kind = None;
    let mut table = None;
    let mut base = 0usize;
    let mut max_window = None;
    let mut window = None;
    let mut params = Params {
        window: 0,
        scales: None,
        ends_r: None,
        ends_n: None,
        cap: DEFAULT_CAP,
        coeff: AbelianGroupFG::integers(),
        horizon: None,
        samples: 10_000,
        seed: 0,
    };
    let mut set_defs = BTreeMap::new();
    let mut map_defs = BTreeMap::new();
    let mut runs = Vec::new();

    for (key, e) in &entries {
        let (section, rest) = key.split_once('.').unwrap_or((key.as_str(), ""));
        let scalar = || -> Result<&Term, CliError> {
            match e.value.as_slice() {
                [p] => single(p),
                _ => Err(syntax(e.line, e.value_col, "expected a single value")),
            }
        };
        let uints = || -> Result<Vec<u64>, CliError> { e.value.iter().map(|p| single(p)?.as_uint()).collect() };
        match (section, rest) {
            ("space", "kind") => space_kind = Some(e),
            ("space", "table") => {
                let rows = e
                    .value
                    .iter()
                    .map(|p| match &single(p)?.kind {
                        TermKind::List(items) => items.iter().map(|q| single(q)?.as_uint()).collect::<Result<Vec<_>, _>>(),
                        _ => Err(p[0].error("expected a table row `[d, d, ...]`")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                table = Some(rows);
            }
            ("space", "base") => base = scalar()?.as_uint()? as usize,
            ("space", "max_window") => max_window = Some(scalar()?.as_uint()?),
            ("params", "window") => window = Some(scalar()?.as_uint()?),
            ("params", "scales") => params.scales = Some(uints()?),
            ("params", "ends_r") => params.ends_r = Some(uints()?),
            ("params", "ends_n") => params.ends_n = Some(uints()?),
            ("params", "cap") => params.cap = scalar()?.as_uint()? as usize,
            ("params", "coeff") => {
                params.coeff = e.raw.parse().map_err(|_| syntax(e.line, e.value_col, format!("invalid coefficient group `{}`", e.raw)))?
            }
            ("params", "horizon") => params.horizon = Some(scalar()?.as_uint()?),
            ("params", "samples") => params.samples = scalar()?.as_uint()? as usize,
            ("params", "seed") => params.seed = scalar()?.as_uint()?,
            ("subspace" | "map" | "run", name) if is_ident(name) => {
                if section != "run" && KEYWORDS.contains(&name) {
                    return Err(syntax(e.line, e.key_col, format!("`{name}` is reserved")));
                }
                let phrase = match e.value.as_slice() {
                    [p] => p.clone(),
                    _ => return Err(syntax(e.line, e.value_col, "expected a single expression")),
                };
                match section {
                    "subspace" => {
                        set_defs.insert(name.to_string(), phrase);
                    }
                    "map" => {
                        map_defs.insert(name.to_string(), phrase);
                    }
                    _ => runs.push((name.to_string(), e.line, phrase)),
                }
            }
            _ => return Err(syntax(e.line, e.key_col, format!("unknown key `{key}`"))),
        }
    }

    let kind = space_kind.ok_or_else(|| CliError::MissingKey("space.kind".into()))?;
    let space = match kind.value.as_slice() {
        [p] => space_spec(single(p)?, table.as_ref(), base)?,
        _ => return Err(syntax(kind.line, kind.value_col, "expected a single space")),
    };
    params.window = window.ok_or_else(|| CliError::MissingKey("params.window".into()))?;

    let mut r = Resolver { set_defs: &set_defs, map_defs: &map_defs, sets: BTreeMap::new(), maps: BTreeMap::new(), stack: Vec::new() };
    for name in set_defs.keys() {
        r.set_by_name(name, None)?;
    }
    for name in map_defs.keys() {
        r.map_by_name(name, None)?;
    }
    let jobs = runs
        .iter()
        .map(|(label, line, phrase)| Ok(Job { label: label.clone(), line: *line, command: r.command(phrase)? }))
        .collect::<Result<Vec<_>, CliError>>()?;

    let config = JobConfig {
        space,
        space_source: kind.raw.clone(),
        max_window,
        subspaces: r.sets,
        maps: r.maps,
        params,
        jobs,
    };
    config.validate()?;
    Ok(config)
}

fn args_of<'t>(t: &'t Term, name: &str, n: std::ops::RangeInclusive<usize>) -> Result<&'t [Phrase], CliError> {
    match &t.kind {
        TermKind::Call(_, args) if n.contains(&args.len()) => Ok(args),
        TermKind::Call(..) => Err(t.error(format!("`{name}` takes {} to {} arguments", n.start(), n.end()))),
        _ => Err(t.error(format!("`{name}` needs arguments"))),
    }
}

fn space_spec(t: &Term, table: Option<&Vec<Vec<u64>>>, base: usize) -> Result<SpaceSpec, CliError> {
    let sub = |p: &Phrase| space_spec(single(p)?, table, base);
    match &t.kind {
        TermKind::Ident(k) => match k.as_str() {
            "zplus" => Ok(SpaceSpec::ZPlus),
            "dihedral_infinity" => Ok(SpaceSpec::DihedralInfinity),
            "explicit" => {
                let table = table.ok_or_else(|| CliError::MissingKey("space.table".into()))?;
                Ok(SpaceSpec::Explicit { table: table.clone(), base })
            }
            other => Err(CliError::UnknownName(other.into())),
        },
        TermKind::Call(k, _) => match k.as_str() {
            "zn" => {
                let a = args_of(t, k, 1..=2)?;
                let dim = single(&a[0])?.as_uint()? as usize;
                let metric = match a.get(1).map(single).transpose()?.map(Term::as_ident).transpose()? {
                    None | Some("linf") => LatticeMetric::LInf,
                    Some("l1") => LatticeMetric::L1,
                    Some(other) => return Err(a[1][0].error(format!("unknown metric `{other}`"))),
                };
                Ok(SpaceSpec::Zn { dim, metric })
            }
            "free_group" => Ok(SpaceSpec::FreeGroup { rank: single(&args_of(t, k, 1..=1)?[0])?.as_uint()? as usize }),
            "disjoint_union" | "product" => {
                let a = args_of(t, k, 2..=2)?;
                let (l, r) = (sub(&a[0])?, sub(&a[1])?);
                Ok(if k == "product" { SpaceSpec::product(l, r) } else { SpaceSpec::disjoint_union(l, r) })
            }
            other => Err(CliError::UnknownName(other.into())),
        },
        _ => Err(t.error("expected a space kind")),
    }
}

struct Resolver<'a> {
    set_defs: &'a BTreeMap<String, Phrase>,
    map_defs: &'a BTreeMap<String, Phrase>,
    sets: BTreeMap<String, SetExpr>,
    maps: BTreeMap<String, MapExpr>,
    stack: Vec<String>,
}

fn sign(t: &Term) -> Result<Sign, CliError> {
    match t.kind {
        TermKind::Sign(true) => Ok(Sign::Plus),
        TermKind::Sign(false) => Ok(Sign::Minus),
        _ => Err(t.error("expected `+` or `-`")),
    }
}

fn word(t: &Term) -> Result<Vec<Letter>, CliError> {
    match t.as_ident()? {
        "e" => Ok(Vec::new()),
        s => parse_word(s).ok_or_else(|| t.error(format!("invalid word `{s}`"))),
    }
}

fn int_vector(t: &Term) -> Result<Vec<i64>, CliError> {
    match &t.kind {
        TermKind::Int(v) => Ok(vec![*v]),
        TermKind::List(items) => items.iter().map(|p| single(p)?.as_int()).collect(),
        _ => Err(t.error("expected an integer or a list of integers")),
    }
}

fn pair_of_ints(t: &Term) -> Result<[i64; 2], CliError> {
    match int_vector(t)?.as_slice() {
        &[a, b] if matches!(t.kind, TermKind::List(_)) => Ok([a, b]),
        _ => Err(t.error("expected `[a, b]`")),
    }
}

fn point(p: &Phrase) -> Result<PointLit, CliError> {
    match p.as_slice() {
        [t] => match &t.kind {
            TermKind::Int(v) => Ok(PointLit::Int(*v)),
            TermKind::Ident(_) => Ok(PointLit::Word(word(t)?)),
            TermKind::List(items) => Ok(PointLit::List(items.iter().map(point).collect::<Result<_, _>>()?)),
            _ => Err(t.error("expected a point")),
        },
        [tag, rest @ ..] if matches!(&tag.kind, TermKind::Ident(s) if s == "left" || s == "right") => {
            let inner = Box::new(point(&rest.to_vec())?);
            Ok(if tag.as_ident()? == "left" { PointLit::Left(inner) } else { PointLit::Right(inner) })
        }
        [_, extra, ..] => Err(extra.error("unexpected extra term")),
        [] => unreachable!("phrases are nonempty"),
    }
}

fn block_rule(t: &Term, args: &[Phrase]) -> Result<BlockRule, CliError> {
    let first = &args[0];
    if matches!(&first[0].kind, TermKind::Ident(s) if s == "geom") {
        if args.len() != 1 {
            return Err(t.error("geometric blocks take one argument `geom R [phase P] [pad D]`"));
        }
        let mut ratio = None;
        let mut phase = 0u32;
        let mut pad_div = 0u64;
        let mut i = 1;
        while i < first.len() {
            match &first[i].kind {
                TermKind::Int(_) if ratio.is_none() && i == 1 => {
                    ratio = Some(first[i].as_uint()?);
                    i += 1;
                }
                TermKind::Ident(k) if (k == "phase" || k == "pad") && i + 1 < first.len() => {
                    let v = first[i + 1].as_uint()?;
                    if k == "phase" {
                        phase = u32::try_from(v).map_err(|_| first[i + 1].error("phase too large"))?;
                    } else {
                        pad_div = v;
                    }
                    i += 2;
                }
                _ => return Err(first[i].error("expected `phase N` or `pad N`")),
            }
        }
        let ratio = ratio.ok_or_else(|| first[0].error("missing ratio after `geom`"))?;
        if ratio < 2 {
            return Err(first[1].error("the ratio must be at least 2"));
        }
        return Ok(BlockRule::Geometric { ratio, phase, pad_div });
    }
    let intervals = args
        .iter()
        .map(|p| {
            let t = single(p)?;
            let v = int_vector(t)?;
            match v.as_slice() {
                &[a, b] if 0 <= a && a <= b => Ok((a as u64, b as u64)),
                _ => Err(t.error("expected an interval `[a, b]` with 0 <= a <= b")),
            }
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(BlockRule::Intervals(intervals))
}

impl Resolver<'_> {
    fn enter(&mut self, name: &str, at: Option<&Term>) -> Result<(), CliError> {
        if self.stack.iter().any(|n| n == name) {
            let msg = format!("cyclic definition of `{name}`");
            return Err(at.map_or_else(|| syntax(0, 0, msg.clone()), |t| t.error(msg.clone())));
        }
        self.stack.push(name.to_string());
        Ok(())
    }

    fn set_by_name(&mut self, name: &str, at: Option<&Term>) -> Result<SetExpr, CliError> {
        if let Some(s) = self.sets.get(name) {
            return Ok(s.clone());
        }
        let phrase = self.set_defs.get(name).ok_or_else(|| CliError::UnknownName(name.into()))?;
        self.enter(&format!("subspace.{name}"), at)?;
        let s = self.set(phrase)?;
        self.stack.pop();
        self.sets.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn map_by_name(&mut self, name: &str, at: Option<&Term>) -> Result<MapExpr, CliError> {
        if let Some(m) = self.maps.get(name) {
            return Ok(m.clone());
        }
        let phrase = self.map_defs.get(name).ok_or_else(|| CliError::UnknownName(name.into()))?;
        self.enter(&format!("map.{name}"), at)?;
        let m = self.map(phrase)?;
        self.stack.pop();
        self.maps.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn sets(&mut self, args: &[Phrase]) -> Result<Vec<SetExpr>, CliError> {
        args.iter().map(|p| self.set(p)).collect()
    }

    fn family(&mut self, p: &Phrase) -> Result<Vec<SetExpr>, CliError> {
        let t = single(p)?;
        match &t.kind {
            TermKind::List(items) => self.sets(items),
            _ => Err(t.error("expected a family `[U, V, ...]`")),
        }
    }

    fn set(&mut self, p: &Phrase) -> Result<SetExpr, CliError> {
        let t = single(p)?;
        let leaf = |s: Subspace| Ok(SetExpr::Leaf(s));
        match &t.kind {
            TermKind::Ident(name) => match name.as_str() {
                "all" => leaf(Subspace::All),
                "empty" => leaf(Subspace::Explicit(Vec::new())),
                _ => self.set_by_name(name, Some(t)),
            },
            TermKind::Call(name, args) => match name.as_str() {
                "union" | "inter" if args.is_empty() => Err(t.error(format!("`{name}` needs arguments"))),
                "union" => Ok(SetExpr::Union(self.sets(args)?)),
                "inter" => Ok(SetExpr::Inter(self.sets(args)?)),
                "compl" => Ok(SetExpr::Compl(Box::new(self.set(&args_of(t, name, 1..=1)?[0])?))),
                "points" => Ok(SetExpr::Points(args.iter().map(point).collect::<Result<_, _>>()?)),
                "ray" => {
                    let a = args_of(t, name, 1..=2)?;
                    let sign = sign(single(&a[0])?)?;
                    let axis = a.get(1).map(|p| single(p)?.as_uint()).transpose()?.unwrap_or(0) as usize;
                    leaf(Subspace::Ray { axis, sign })
                }
                "halfspace" => {
                    let a = args_of(t, name, 1..=usize::MAX)?;
                    let (last, init) = a.split_last().expect("nonempty");
                    let (lhs, rhs) = match last.as_slice() {
                        [l, ge, r] if ge.kind == TermKind::Ge => (l.as_int()?, r.as_int()?),
                        _ => return Err(last[0].error("expected `a >= c` in the last argument")),
                    };
                    let mut coeffs = init.iter().map(|p| single(p)?.as_int()).collect::<Result<Vec<_>, _>>()?;
                    coeffs.push(lhs);
                    leaf(Subspace::Halfspace { coeffs, rhs })
                }
                "sector" => {
                    let a = args_of(t, name, 1..=usize::MAX)?;
                    if matches!(a[0][0].kind, TermKind::List(_)) {
                        let a = args_of(t, name, 2..=2)?;
                        return leaf(Subspace::Sector { from: pair_of_ints(single(&a[0])?)?, to: pair_of_ints(single(&a[1])?)? });
                    }
                    let (signs, slope) = match a.split_last() {
                        Some((last, init)) if matches!(&last[0].kind, TermKind::Ident(s) if s == "slope") => {
                            let slope = match last.as_slice() {
                                [_, v] => v.as_uint()?,
                                _ => return Err(last[0].error("expected `slope N`")),
                            };
                            (init, Some(slope))
                        }
                        _ => (a, None),
                    };
                    let signs = signs.iter().map(|p| sign(single(p)?)).collect::<Result<Vec<_>, _>>()?;
                    match slope {
                        Some(slope) => leaf(Subspace::Cone { signs, slope }),
                        None => leaf(Subspace::Orthant(signs)),
                    }
                }
                "blocks" => leaf(Subspace::Blocks(block_rule(t, args_of(t, name, 1..=usize::MAX)?)?)),
                "residue" => {
                    let a = args_of(t, name, 2..=2)?;
                    leaf(Subspace::Residue { modulus: single(&a[0])?.as_uint()?, residue: single(&a[1])?.as_uint()? })
                }
                "ball" => leaf(Subspace::Ball(single(&args_of(t, name, 1..=1)?[0])?.as_uint()?)),
                "prefix" => leaf(Subspace::Prefix(word(single(&args_of(t, name, 1..=1)?[0])?)?)),
                "part" => {
                    let side = single(&args_of(t, name, 1..=1)?[0])?;
                    match side.as_ident()? {
                        "left" => leaf(Subspace::Left),
                        "right" => leaf(Subspace::Right),
                        _ => Err(side.error("expected `left` or `right`")),
                    }
                }
                _ => Err(t.error(format!("unknown subspace constructor `{name}`"))),
            },
            _ => Err(t.error("expected a subspace")),
        }
    }

    fn map(&mut self, p: &Phrase) -> Result<MapExpr, CliError> {
        let t = single(p)?;
        match &t.kind {
            TermKind::Ident(name) if name == "identity" => Ok(MapExpr::Identity),
            TermKind::Ident(name) => self.map_by_name(name, Some(t)),
            TermKind::Call(name, _) => match name.as_str() {
                "shift" => Ok(MapExpr::Shift(int_vector(single(&args_of(t, name, 1..=1)?[0])?)?)),
                "affine" => {
                    let a = args_of(t, name, 2..=2)?;
                    let m = single(&a[0])?;
                    let matrix = match &m.kind {
                        TermKind::Int(v) => vec![vec![*v]],
                        TermKind::List(rows) => rows.iter().map(|r| int_vector(single(r)?)).collect::<Result<_, _>>()?,
                        _ => return Err(m.error("expected a matrix `[[a, b], [c, d]]`")),
                    };
                    Ok(MapExpr::Affine { matrix, offset: int_vector(single(&a[1])?)? })
                }
                "lmul" => Ok(MapExpr::LeftMul(word(single(&args_of(t, name, 1..=1)?[0])?)?)),
                "rmul" => Ok(MapExpr::RightMul(word(single(&args_of(t, name, 1..=1)?[0])?)?)),
                "product" => {
                    let a = args_of(t, name, 2..=2)?;
                    Ok(MapExpr::Product(Box::new(self.map(&a[0])?), Box::new(self.map(&a[1])?)))
                }
                "restrict" => {
                    let a = args_of(t, name, 2..=2)?;
                    Ok(MapExpr::Restrict(Box::new(self.map(&a[0])?), self.set(&a[1])?))
                }
                _ => Err(t.error(format!("unknown map constructor `{name}`"))),
            },
            _ => Err(t.error("expected a map")),
        }
    }

    fn pair(&mut self, p: &Phrase) -> Result<PairExpr, CliError> {
        let t = single(p)?;
        match &t.kind {
            TermKind::Ident(name) if name == "diagonal" => Ok(PairExpr::Diagonal),
            TermKind::Call(name, args) => match name.as_str() {
                "square" => Ok(PairExpr::Square(self.set(&args_of(t, name, 1..=1)?[0])?)),
                "cross" => {
                    let a = args_of(t, name, 2..=2)?;
                    Ok(PairExpr::Cross(self.set(&a[0])?, self.set(&a[1])?))
                }
                "outside_squares" => Ok(PairExpr::OutsideSquares(self.sets(args)?)),
                "graph" => Ok(PairExpr::Graph(self.map(&args_of(t, name, 1..=1)?[0])?)),
                "not" => Ok(PairExpr::Not(Box::new(self.pair(&args_of(t, name, 1..=1)?[0])?))),
                "and" | "or" => {
                    let parts = args_of(t, name, 1..=usize::MAX)?.iter().map(|q| self.pair(q)).collect::<Result<_, _>>()?;
                    Ok(if name == "and" { PairExpr::And(parts) } else { PairExpr::Or(parts) })
                }
                _ => Err(t.error(format!("unknown pair constructor `{name}`"))),
            },
            _ => Err(t.error("expected a pair set")),
        }
    }

    fn command(&mut self, p: &Phrase) -> Result<Command, CliError> {
        let t = single(p)?;
        let (name, args): (&str, &[Phrase]) = match &t.kind {
            TermKind::Ident(n) => (n, &[]),
            TermKind::Call(n, a) => (n, a),
            _ => return Err(t.error("expected a command")),
        };
        let want = |n: usize| -> Result<&[Phrase], CliError> {
            if args.len() == n {
                Ok(args)
            } else {
                Err(t.error(format!("`{name}` takes {n} argument(s)")))
            }
        };
        Ok(match name {
            "metric" => {
                want(0)?;
                Command::Metric
            }
            "bounded" => Command::Bounded(self.set(&want(1)?[0])?),
            "coentourage" => Command::Coentourage(self.pair(&want(1)?[0])?),
            "cover" => {
                let a = want(2)?;
                Command::Cover { target: self.set(&a[0])?, family: self.family(&a[1])? }
            }
            "shift_cover" => {
                let a = want(3)?;
                Command::ShiftCover { r: single(&a[0])?.as_uint()?, target: self.set(&a[1])?, family: self.family(&a[2])? }
            }
            "refinement" => {
                let a = want(2)?;
                Command::Refinement { fine: self.family(&a[0])?, coarse: self.family(&a[1])? }
            }
            "closeness" => {
                let a = want(2)?;
                Command::Closeness(self.map(&a[0])?, self.map(&a[1])?)
            }
            "coarse_map" => Command::CoarseMap(self.map(&want(1)?[0])?),
            "surjective" => Command::Surjective(self.map(&want(1)?[0])?),
            "flasque" => match args.len() {
                1 => Command::Flasque { map: self.map(&args[0])?, horizon: None },
                2 => Command::Flasque { map: self.map(&args[0])?, horizon: Some(single(&args[1])?.as_uint()?) },
                _ => return Err(t.error("`flasque` takes a map and an optional horizon")),
            },
            "ends" => Command::Ends(self.set(&want(1)?[0])?),
            "end_restriction" => {
                let a = want(2)?;
                Command::EndRestriction(self.set(&a[0])?, self.set(&a[1])?)
            }
            "sections" => Command::Sections(self.set(&want(1)?[0])?),
            "cohomology" => {
                let a = want(2)?;
                Command::Cohomology { target: self.set(&a[0])?, cover: self.family(&a[1])? }
            }
            "mayer_vietoris" => {
                let a = want(3)?;
                Command::MayerVietoris { target: self.set(&a[0])?, a: self.set(&a[1])?, b: self.set(&a[2])? }
            }
            "compare" => {
                let a = want(3)?;
                Command::Compare { target: self.set(&a[0])?, fine: self.family(&a[1])?, coarse: self.family(&a[2])? }
            }
            other => return Err(t.error(format!("unknown command `{other}`"))),
        })
    }
}
