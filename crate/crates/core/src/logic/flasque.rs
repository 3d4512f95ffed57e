use rayon::prelude::*;

use super::{check_scales, closeness_verdict, growth_status, LogicError, MapTable, ScaleBound, Status, Verdict, Witness, MAX_WITNESSES};
use crate::spaces::{PointId, ScaleSchedule, SpacePresentation};

/// Outcome of the three flasqueness conditions for a self-map `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlasqueReport {
    /// `φ` is close to the identity.
    pub close: Verdict,
    /// Iterates eventually leave every sampled ball and stay away.
    pub escape: Verdict,
    /// `⋃_n (φ^n)^2(E_r)` is an entourage for each scale.
    pub uniform: Verdict,
    pub overall: Verdict,
    /// Window on which the iterates were followed.
    pub inner_window: u64,
    pub horizon: u64,
}

impl FlasqueReport {
    pub fn holds(&self) -> bool {
        self.overall.holds()
    }
}

/// Orbits `orbit[n][x] = φ^n(x)` for `n <= horizon` and `x` in the inner window.
fn orbits(phi: &MapTable, inner: usize, horizon: u64) -> Result<Vec<Vec<PointId>>, LogicError> {
    let mut out = Vec::with_capacity(horizon as usize + 1);
    out.push((0..inner as u32).map(PointId).collect::<Vec<_>>());
    for step in 1..=horizon {
        let prev = out.last().expect("nonempty");
        let next = prev
            .iter()
            .map(|&x| phi.image(x))
            .collect::<Option<Vec<_>>>()
            .ok_or(LogicError::IterateEscapesWindow { step })?;
        out.push(next);
    }
    Ok(out)
}

/// Condition (ii) for one ball of radius `b`: the hit counts
/// `|φ^n(X) ∩ B|` must reach zero and stay there.
fn escape_from_ball(space: &SpacePresentation, orbit: &[Vec<PointId>], b: u64, inner_w: u64) -> Verdict {
    let hits: Vec<usize> = orbit
        .iter()
        .map(|xs| xs.iter().filter(|&&y| space.radius(y) <= b).count())
        .collect();
    let horizon = hits.len() - 1;
    let last_hit = hits.iter().rposition(|&h| h > 0);
    let (status, bound) = match last_hit {
        None => (Status::Holds, Some(0)),
        Some(n) if n < horizon => (Status::Holds, Some(n as u64 + 1)),
        Some(_) if hits[horizon] >= hits[horizon / 2] => (Status::Fails, None),
        Some(_) => (Status::Inconclusive, None),
    };
    let witness = if status == Status::Fails {
        orbit[horizon]
            .iter()
            .enumerate()
            .filter(|(_, &y)| space.radius(y) <= b)
            .take(MAX_WITNESSES)
            .map(|(x, &y)| Witness::Pair(PointId(x as u32), y))
            .collect()
    } else {
        Vec::new()
    };
    Verdict::from_scales(inner_w, vec![ScaleBound { scale: b, bound, status }], witness)
}

/// Condition (iii) at scale `r`: `d(φ^n x, φ^n y)` over `n <= N` and
/// `d(x, y) <= r` must stop growing with the radius.
fn uniform_at_scale(space: &SpacePresentation, orbit: &[Vec<PointId>], r: u64, inner_w: u64) -> Verdict {
    let nb = space.neighborhood(r);
    let inner = orbit[0].len();
    let samples: Vec<(u64, u64, PointId, PointId)> = (0..inner as u32)
        .into_par_iter()
        .map(|x| {
            let x = PointId(x);
            let mut best = (0, x, x);
            nb.for_each(x, inner_w, &mut |y| {
                let d = orbit.iter().map(|o| space.distance(o[x.index()], o[y.index()])).max().unwrap_or(0);
                if d > best.0 {
                    best = (d, x, y);
                }
            });
            (space.radius(x), best.0, best.1, best.2)
        })
        .collect();
    let plain: Vec<(u64, u64)> = samples.iter().map(|s| (s.0, s.1)).collect();
    let (status, bound) = growth_status(inner_w, &plain);
    let witness = if status == Status::Fails {
        let sup = bound.unwrap_or(0);
        samples
            .iter()
            .filter(|s| s.1 == sup)
            .take(MAX_WITNESSES)
            .map(|s| Witness::Pair(s.2, s.3))
            .collect()
    } else {
        Vec::new()
    };
    Verdict::from_scales(inner_w, vec![ScaleBound { scale: r, bound, status }], witness)
}

/// Checks that `φ` witnesses flasqueness up to `horizon` iterations.
///
/// Iterates are followed from the inner window `W - N c`, where `c` is the
/// largest displacement `d(x, φ x)` on the window, so that every iterate
/// stays inside the tabulated ball. Balls of radius `N/4` and `N/2` are
/// sampled for condition (ii).
pub fn flasque_verdict(
    space: &SpacePresentation,
    phi: &MapTable,
    sched: &ScaleSchedule,
    w: u64,
    horizon: u64,
) -> Result<FlasqueReport, LogicError> {
    if horizon == 0 {
        return Err(LogicError::IterateEscapesWindow { step: 0 });
    }
    check_scales(w, sched.max_scale())?;
    phi.check_window(w)?;
    let id = MapTable::identity(space, w)?;
    let close = closeness_verdict(phi, &id, sched, w)?;
    let c = phi.pairs(w).map(|(x, y)| space.distance(x, y)).max().unwrap_or(0);
    let reach = horizon.saturating_mul(c);
    if reach >= w {
        return Err(LogicError::IterateEscapesWindow { step: w / c.max(1) });
    }
    let inner_w = w - reach;
    check_scales(inner_w, sched.max_scale())?;
    let orbit = orbits(phi, space.window_len(inner_w), horizon)?;

    let balls: Vec<Verdict> = [horizon / 4, horizon / 2]
        .into_iter()
        .map(|b| escape_from_ball(space, &orbit, b, inner_w))
        .collect();
    let escape = Verdict::all_of(&balls.iter().collect::<Vec<_>>());
    let scales: Vec<Verdict> = sched
        .scales()
        .iter()
        .map(|&r| uniform_at_scale(space, &orbit, r, inner_w))
        .collect();
    let uniform = Verdict::all_of(&scales.iter().collect::<Vec<_>>());
    let overall = Verdict::all_of(&[&close, &escape, &uniform]);
    Ok(FlasqueReport { close, escape, uniform, overall, inner_window: inner_w, horizon })
}
