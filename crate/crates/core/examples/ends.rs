//! Counts ends of a few model spaces and shows the stabilization trace.

use coarse::ends::{ends, EndCount, EndsParams};
use coarse::spaces::{build_space, SpaceSpec, Subspace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spaces = [
        ("Z_+", SpaceSpec::ZPlus, 256),
        ("Z", SpaceSpec::zn(1), 256),
        ("D_inf", SpaceSpec::DihedralInfinity, 256),
        ("Z + Z", SpaceSpec::disjoint_union(SpaceSpec::zn(1), SpaceSpec::zn(1)), 256),
        ("Z^2", SpaceSpec::zn(2), 64),
    ];
    for (name, spec, w) in spaces {
        let space = build_space(&spec, w)?;
        let report = ends(&space, &Subspace::All, &EndsParams::for_window(w), w)?;
        let reps: Vec<String> = report
            .components
            .iter()
            .map(|c| {
                let x = c.representative();
                if space.is_word_space() { format!("|w|={}", space.radius(x)) } else { space.label(x) }
            })
            .collect();
        println!("{name:>6}: {:?} at W={w}, representatives {}", report.count, reps.join(" "));
    }

    // The free group: the shell count keeps tripling with the core radius.
    let f2 = build_space(&SpaceSpec::FreeGroup { rank: 2 }, 8)?;
    let params = EndsParams { scales: vec![1], cores: vec![2, 3, 4, 5], cap: 64 };
    let report = ends(&f2, &Subspace::All, &params, 8)?;
    let counts: Vec<usize> = report.trace.iter().map(|c| c.count).collect();
    println!("   F_2: counts {counts:?} over n = 2..5");
    assert!(matches!(report.count, EndCount::InfiniteAtCap(_)));
    Ok(())
}
