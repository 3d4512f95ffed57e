//! Mayer-Vietoris exactness for 2-covers of the line and the plane.

use coarse::cohomology::{mayer_vietoris_report, AbelianGroupFG, CechParams};
use coarse::covers::z2_cake;
use coarse::spaces::{build_space, SpacePresentation, SpaceSpec, Subspace};

fn report(name: &str, space: &SpacePresentation, a: Subspace, b: Subspace, w: u64) -> Result<(), Box<dyn std::error::Error>> {
    let params = CechParams::for_window(w)?;
    let mv = mayer_vietoris_report(space, &Subspace::All, &a, &b, &AbelianGroupFG::integers(), &params)?;
    println!("{name}: ends (X, A+B, A^B) = ({}, {}, {}), H0 = {}, H1 = {}, exact = {}",
        mv.ends_union, mv.ends_a + mv.ends_b, mv.ends_intersection, mv.h0_union, mv.h1_union, mv.exact());
    for node in &mv.nodes {
        println!("    {node:?}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let line = build_space(&SpaceSpec::zn(1), 256)?;
    report("Z = Z_- u Z_+", &line, Subspace::z_minus(), Subspace::z_plus(), 256)?;

    let plane = build_space(&SpaceSpec::zn(2), 64)?;
    let cake = z2_cake();
    let a = Subspace::Union(cake[0..3].to_vec());
    let b = Subspace::Union(vec![cake[3].clone(), cake[4].clone(), cake[0].clone()]);
    report("Z^2 = A u B", &plane, a, b, 64)?;
    Ok(())
}
