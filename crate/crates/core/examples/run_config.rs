//! Runs a config file through the library, as `coarse run` does.
//!
//! `cargo run --release --example run_config -- crates/core/examples/line.cfg`

use coarse::cli::{parse_config, run};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/half_line.cfg").to_string());
    let config = parse_config(&std::fs::read_to_string(&path)?)?;
    let report = run(&config)?;
    print!("{}", report.table());
    println!("exit code {}", report.exit_code());
    Ok(())
}
