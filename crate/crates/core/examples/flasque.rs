//! Flasqueness: the shift on Z_+ pushes everything to infinity, the
//! identity on Z does not.

use coarse::logic::{flasque_verdict, MapTable};
use coarse::spaces::{build_space, ScaleSchedule, SpaceSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (w, horizon) = (256, 64);
    let sched = ScaleSchedule::for_window(vec![1, 2, 4], w)?;

    let zp = build_space(&SpaceSpec::ZPlus, w + 1)?;
    let shift = MapTable::translation(&zp, w, &[1])?;
    let r = flasque_verdict(&zp, &shift, &sched, w, horizon)?;
    println!("Z_+, x -> x+1: close {}, escape {}, uniform {} on inner window {}",
        r.close.status, r.escape.status, r.uniform.status, r.inner_window);

    let z = build_space(&SpaceSpec::zn(1), w)?;
    let id = MapTable::identity(&z, w)?;
    let r = flasque_verdict(&z, &id, &sched, w, horizon)?;
    println!("Z, identity:   close {}, escape {}, uniform {}", r.close.status, r.escape.status, r.uniform.status);
    Ok(())
}
