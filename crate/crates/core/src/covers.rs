//! Ready-made coarse covers of the standard lattices.

use crate::spaces::{BlockRule, Sign, Subspace};

/// `{Z_-, Z_+}`.
pub fn line_halves() -> Vec<Subspace> {
    vec![Subspace::z_minus(), Subspace::z_plus()]
}

/// Five planar sectors centred at multiples of 72 degrees, each about 108
/// degrees wide. Neighbours overlap in wedges of roughly 36 degrees and
/// non-neighbours meet only near the origin.
pub fn z2_cake() -> Vec<Subspace> {
    let sector = |from: [i64; 2], to: [i64; 2]| Subspace::Sector { from, to };
    vec![
        sector([5, -7], [5, 7]),
        sector([3, 1], [-5, 7]),
        sector([0, 1], [-3, -1]),
        sector([-3, 1], [0, -1]),
        sector([-5, -7], [3, -1]),
    ]
}

/// The `2^n` widened orthants `slope * s_i * x_i + |x|_inf >= 0` of `Z^n`.
/// Two of them meet in an unbounded set exactly when their sign patterns
/// agree somewhere, so the nerve at infinity is the boundary of the
/// cross-polytope.
pub fn zn_cake(n: usize, slope: u64) -> Vec<Subspace> {
    (0..1usize << n)
        .map(|bits| {
            let signs = (0..n).map(|i| if bits >> i & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect();
            Subspace::Cone { signs, slope }
        })
        .collect()
}

/// Two interleaved families of geometric radius blocks whose overlaps grow
/// with the radius.
pub fn zplus_blocks(ratio: u64, pad_div: u64) -> Vec<Subspace> {
    (0..2)
        .map(|phase| Subspace::Blocks(BlockRule::Geometric { ratio, phase, pad_div }))
        .collect()
}
