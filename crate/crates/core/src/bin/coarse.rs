use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coarse::cli::{parse_config, run, EXIT_ERROR};

#[derive(Parser)]
#[command(name = "coarse", version, about = "Desk-scale coarse geometry: covers, ends and Cech cohomology")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command of a config file and print a report.
    Run {
        config: PathBuf,
        /// Also write the flat key-value report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override `params.window`.
        #[arg(long)]
        window: Option<u64>,
        /// Override `params.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let Cmd::Run { config, out, window, seed } = Cli::parse().command;
    let result = (|| -> Result<i32, String> {
        let text = std::fs::read_to_string(&config).map_err(|e| format!("{}: {e}", config.display()))?;
        let mut cfg = parse_config(&text).map_err(|e| format!("{}:{e}", config.display()))?;
        if let Some(w) = window {
            cfg = cfg.with_window(w).map_err(|e| e.to_string())?;
        }
        if let Some(s) = seed {
            cfg = cfg.with_seed(s);
        }
        let report = run(&cfg).map_err(|e| e.to_string())?;
        print!("{}", report.table());
        if let Some(path) = out {
            std::fs::write(&path, report.key_values()).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        Ok(report.exit_code())
    })();
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
