//! Čech cohomology of coarse covers: the line, the plane cake and torsion
//! coefficients.

use coarse::cohomology::{cech_complex, cohomology, AbelianGroupFG, CechParams};
use coarse::covers::{line_halves, z2_cake, zplus_blocks};
use coarse::spaces::{build_space, SpaceSpec, Subspace};

fn show(name: &str, space: &SpaceSpec, w: u64, cover: &[Subspace], coeff: &AbelianGroupFG) -> Result<(), Box<dyn std::error::Error>> {
    let x = build_space(space, w)?;
    let params = CechParams::for_window(w)?;
    let cx = cech_complex(&x, &Subspace::All, cover, coeff, &params)?;
    let h = cohomology(&cx)?;
    let dims: Vec<usize> = (0..cx.degrees()).map(|k| cx.dim(k)).collect();
    let groups: Vec<String> = (0..cx.degrees()).map(|k| format!("H{k}={}", h.group(k))).collect();
    println!("{name:<28} dims {dims:?}  {}  chi={}", groups.join(" "), h.euler_characteristic());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let z = AbelianGroupFG::integers();
    show("Z, halves", &SpaceSpec::zn(1), 256, &line_halves(), &z)?;
    show("Z_+, blocks", &SpaceSpec::ZPlus, 256, &zplus_blocks(2, 4), &z)?;
    show("Z^2, five sectors", &SpaceSpec::zn(2), 64, &z2_cake(), &z)?;
    show("Z^2, five sectors, Z/6", &SpaceSpec::zn(2), 64, &z2_cake(), &AbelianGroupFG::cyclic(6))?;
    Ok(())
}
