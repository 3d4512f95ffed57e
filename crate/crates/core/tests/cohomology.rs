use coarse::cohomology::{cech_complex, cohomology, constant_sections, mayer_vietoris_report, refinement_comparison, AbelianGroupFG, CechParams};
use coarse::covers::{line_halves, z2_cake, zplus_blocks};
use coarse::logic::shift_cover;
use coarse::spaces::{build_space, SpaceSpec, Subspace};

fn z() -> AbelianGroupFG {
    AbelianGroupFG::integers()
}

#[test]
fn line_with_two_rays() {
    let space = build_space(&SpaceSpec::zn(1), 256).unwrap();
    let params = CechParams::for_window(256).unwrap();
    let cx = cech_complex(&space, &Subspace::All, &line_halves(), &z(), &params).unwrap();
    assert_eq!((cx.dim(0), cx.dim(1)), (2, 0));
    let h = cohomology(&cx).unwrap();
    assert_eq!(h.group(0), AbelianGroupFG::free(2));
    assert!(h.group(1).is_zero());
}

#[test]
fn plane_with_five_sectors() {
    let space = build_space(&SpaceSpec::zn(2), 64).unwrap();
    let params = CechParams::for_window(64).unwrap();
    let cx = cech_complex(&space, &Subspace::All, &z2_cake(), &z(), &params).unwrap();
    assert_eq!((cx.dim(0), cx.dim(1), cx.dim(2)), (5, 5, 0));
    let h = cohomology(&cx).unwrap();
    assert_eq!(h.group(0), z());
    assert_eq!(h.group(1), z());
    assert!(h.group(2).is_zero());
}

#[test]
fn torsion_coefficients() {
    let space = build_space(&SpaceSpec::zn(2), 64).unwrap();
    let params = CechParams::for_window(64).unwrap();
    let z6 = AbelianGroupFG::cyclic(6);
    let h = cohomology(&cech_complex(&space, &Subspace::All, &z2_cake(), &z6, &params).unwrap()).unwrap();
    assert_eq!(h.group(0), z6);
    assert_eq!(h.group(1), z6);
}

#[test]
fn half_line_block_covers() {
    let space = build_space(&SpaceSpec::ZPlus, 256).unwrap();
    let params = CechParams::for_window(256).unwrap();
    for (ratio, pad) in [(2, 4), (3, 3), (2, 2)] {
        let cx = cech_complex(&space, &Subspace::All, &zplus_blocks(ratio, pad), &z(), &params).unwrap();
        let h = cohomology(&cx).unwrap();
        assert_eq!(h.group(0), z(), "ratio {ratio}");
        assert!(h.group(1).is_zero(), "ratio {ratio}");
    }
}

#[test]
fn sections() {
    let zp = build_space(&SpaceSpec::ZPlus, 256).unwrap();
    let params = CechParams::for_window(256).unwrap();
    assert_eq!(constant_sections(&zp, &Subspace::All, &z(), &params.ends, 256).unwrap(), z());
    assert!(constant_sections(&zp, &Subspace::Ball(30), &AbelianGroupFG::cyclic(5), &params.ends, 256).unwrap().is_zero());
    let line = build_space(&SpaceSpec::zn(1), 256).unwrap();
    assert_eq!(constant_sections(&line, &Subspace::All, &z(), &params.ends, 256).unwrap(), AbelianGroupFG::free(2));
}

#[test]
fn mayer_vietoris_on_the_line_and_plane() {
    let line = build_space(&SpaceSpec::zn(1), 256).unwrap();
    let params = CechParams::for_window(256).unwrap();
    let [a, b] = <[Subspace; 2]>::try_from(line_halves()).unwrap();
    let mv = mayer_vietoris_report(&line, &Subspace::All, &a, &b, &z(), &params).unwrap();
    assert!(mv.exact(), "{mv:?}");
    assert_eq!((mv.ends_union, mv.ends_a + mv.ends_b, mv.ends_intersection), (2, 2, 0));

    let mv = mayer_vietoris_report(&line, &Subspace::z_plus(), &Subspace::z_plus(), &Subspace::z_plus(), &z(), &params).unwrap();
    assert!(mv.exact());
    assert_eq!((mv.ends_union, mv.ends_a + mv.ends_b, mv.ends_intersection), (1, 2, 1));

    let plane = build_space(&SpaceSpec::zn(2), 64).unwrap();
    let params = CechParams::for_window(64).unwrap();
    let cake = z2_cake();
    let a = Subspace::Union(cake[0..3].to_vec());
    let b = Subspace::Union(vec![cake[3].clone(), cake[4].clone(), cake[0].clone()]);
    let mv = mayer_vietoris_report(&plane, &Subspace::All, &a, &b, &z(), &params).unwrap();
    assert!(mv.exact(), "{mv:?}");
    assert_eq!(mv.ends_intersection, 2);
    assert_eq!(mv.h1_union, z());
}

#[test]
fn refinement() {
    let line = build_space(&SpaceSpec::zn(1), 256).unwrap();
    let params = CechParams::for_window(256).unwrap();
    let cmp = refinement_comparison(&line, &Subspace::All, &line_halves(), &line_halves(), &z(), &params).unwrap();
    assert!(cmp.stabilized);
    // The line has two ends, so the trivial cover already sees both.
    let cmp = refinement_comparison(&line, &Subspace::All, &line_halves(), &[Subspace::All], &z(), &params).unwrap();
    assert!(cmp.stabilized);

    let plane = build_space(&SpaceSpec::zn(2), 64).unwrap();
    let params = CechParams::for_window(64).unwrap();
    let cmp = refinement_comparison(&plane, &Subspace::All, &z2_cake(), &[Subspace::All], &z(), &params).unwrap();
    assert!(!cmp.stabilized);
    assert_eq!((cmp.fine.betti(), cmp.coarse.betti()), (vec![1, 1, 0, 0, 0], vec![1]));
    let (shifted, _) = shift_cover(&plane, 2, &z2_cake(), &Subspace::All, 64).unwrap();
    let cmp = refinement_comparison(&plane, &Subspace::All, &z2_cake(), &shifted, &z(), &params).unwrap();
    assert!(cmp.stabilized, "{:?}", cmp.induced_ranks);
}
