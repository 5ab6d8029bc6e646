//! Parses a TOML analysis config, runs it and writes JSON and CSV reports.
//!
//! `cargo run --example config_report -- path/to/config.toml out_dir`

use std::path::PathBuf;

use shiftinv::report::TaskOutcome;
use shiftinv::{run, AnalysisConfig};

const DEFAULT_CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/ex51.toml");

fn main() -> shiftinv::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| DEFAULT_CONFIG.into()));
    let out = args.next().map(PathBuf::from).unwrap_or_else(std::env::temp_dir).join("shiftinv_report");

    let cfg = AnalysisConfig::load(&path)?;
    let report = run(&cfg)?;
    for t in &report.tasks {
        match &t.outcome {
            TaskOutcome::Ok { .. } => println!("task {} ({}) ok", t.index, t.kind),
            TaskOutcome::Error { code, message } => println!("task {} ({}) {code}: {message}", t.index, t.kind),
        }
    }
    std::fs::create_dir_all(&out)?;
    report.write_json(&out.join("report.json"))?;
    for p in report.write_csv_tables(&out)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
