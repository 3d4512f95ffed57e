#![allow(dead_code)]

pub mod suites;

use coarse::spaces::{BlockRule, Subspace};
use rand::Rng;

/// Random family of block unions over a radial space.
///
/// Radii `0..=reach` are cut into consecutive blocks; every block goes to
/// one of `2..=4` members and is widened by a padding that is either zero,
/// a constant of at most 4 or at least an eighth of its position. Overlaps
/// thus stay below half of a top scale of 16 or grow past twice it in the
/// outer quarter of a 256 window, where both cover tests see the same thing.
pub fn block_family(rng: &mut impl Rng, reach: u64) -> Vec<Subspace> {
    let members = rng.gen_range(2..=4usize);
    let mode = rng.gen_range(0..3u8);
    let (constant, divisor) = (rng.gen_range(1..=4u64), rng.gen_range(2..=4u64));
    let pad = |c: u64| match mode {
        0 => 0,
        1 => constant,
        _ => c / divisor,
    };
    let mut cuts = vec![0u64];
    while *cuts.last().unwrap() < reach {
        let last = *cuts.last().unwrap();
        let step = rng.gen_range(4..=(last / 2).max(8));
        cuts.push((last + step).min(reach));
    }
    let mut intervals: Vec<Vec<(u64, u64)>> = vec![Vec::new(); members];
    let mut previous = usize::MAX;
    for pair in cuts.windows(2) {
        let mut colour = rng.gen_range(0..members);
        if colour == previous {
            colour = (colour + 1) % members;
        }
        previous = colour;
        let (a, b) = (pair[0], pair[1]);
        let end = if b == reach { u64::MAX / 4 } else { b + pad(b) };
        intervals[colour].push((a.saturating_sub(pad(a)), end));
    }
    intervals
        .into_iter()
        .filter(|iv| !iv.is_empty())
        .map(|iv| Subspace::Blocks(BlockRule::Intervals(iv)))
        .collect()
}

/// Random union of radius intervals, bounded or not.
pub fn block_set(rng: &mut impl Rng, reach: u64) -> Subspace {
    let n = rng.gen_range(1..=4);
    let mut iv = Vec::new();
    for _ in 0..n {
        let a = rng.gen_range(0..reach);
        let b = if rng.gen_bool(0.3) { u64::MAX / 4 } else { rng.gen_range(a..reach) };
        iv.push((a, b));
    }
    Subspace::Blocks(BlockRule::Intervals(iv))
}
