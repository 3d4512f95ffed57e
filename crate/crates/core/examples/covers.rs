//! Coarse cover verdicts on the line: both characterizations, witnesses
//! for a non-cover and the thickened cover `E_r[U_i]`.

use coarse::covers::line_halves;
use coarse::logic::{cover_characterizations, cover_verdict, shift_cover, Witness};
use coarse::spaces::{build_space, ScaleSchedule, SpaceSpec, Subspace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = 256;
    let space = build_space(&SpaceSpec::zn(1), w)?;
    let sched = ScaleSchedule::for_window(vec![1, 2, 4, 8, 16], w)?;

    let halves = line_halves();
    let check = cover_characterizations(&space, &Subspace::All, &halves, &sched, w)?;
    println!("halves: pairwise {} (bound {:?}), divergence {} (bound {:?})",
        check.pairwise.status, check.pairwise.bound, check.divergence.status, check.divergence.bound);

    let parity = [
        Subspace::Residue { modulus: 2, residue: 0 },
        Subspace::Residue { modulus: 2, residue: 1 },
    ];
    let v = cover_verdict(&space, &Subspace::All, &parity, &sched, w)?;
    let shown: Vec<String> = v
        .witness
        .iter()
        .take(4)
        .map(|x| match x {
            Witness::Pair(a, b) => format!("{}~{}", space.label(*a), space.label(*b)),
            Witness::Point(a) => space.label(*a),
        })
        .collect();
    println!("parity: {} at (R, W) = ({}, {}), witnesses {}", v.status, v.scale, v.window, shown.join(" "));

    let (thick, target) = shift_cover(&space, 3, &halves, &Subspace::All, w)?;
    let v = cover_verdict(&space, &target, &thick, &sched, w / 2)?;
    println!("E_3-thickened halves: {}", v.status);
    Ok(())
}
