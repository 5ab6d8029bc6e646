use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use shiftinv::config::{AnalysisConfig, ExampleId, OutputFormat};
use shiftinv::report::Report;
use shiftinv::runner::{example_config, run};
use shiftinv::Error;

/// Frame, invariance and Sobolev diagnostics for shift-invariant spaces.
#[derive(Parser)]
#[command(name = "shiftinv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a TOML config and print or write the report.
    Analyze {
        config: PathBuf,
        /// Write the JSON report here instead of the config's output path or stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a shipped paper example.
    Example {
        /// ex51, ex52, ex53, sinc_sharpness, chi_J_frame or bspline_noninvariance
        id: String,
        /// Parameter override, e.g. `N=4` or `n=512`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a saved JSON report as JSON or CSV tables.
    Emit {
        #[arg(long, value_enum)]
        format: Format,
        report: PathBuf,
        /// Output file (json) or directory (csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_ASSERTION: u8 = 3;

fn parse_override(s: &str) -> Result<(String, f64), Error> {
    let invalid = |m: &str| Error::ConfigInvalid {
        path: format!("overrides.{s}"),
        message: m.into(),
    };
    let (k, v) = s.split_once('=').ok_or_else(|| invalid("expected KEY=VALUE"))?;
    let v: f64 = v.trim().parse().map_err(|_| invalid("value is not a number"))?;
    Ok((k.trim().to_string(), v))
}

fn write_report(report: &Report, format: OutputFormat, out: Option<&PathBuf>) -> Result<(), Error> {
    match (format, out) {
        (OutputFormat::Json, Some(p)) => report.write_json(p),
        (OutputFormat::Json, None) => {
            println!("{}", report.to_json());
            Ok(())
        }
        (OutputFormat::Csv, out) => {
            let dir = out.cloned().unwrap_or_else(|| PathBuf::from("report_csv"));
            for p in report.write_csv_tables(&dir)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

fn finish(report: &Report) -> ExitCode {
    let failed = report.failed_assertions();
    for (task, name) in &failed {
        eprintln!("assertion failed: task {task}: {name}");
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_ASSERTION)
    }
}

fn execute(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Analyze { config, out } => {
            let cfg = AnalysisConfig::load(&config)?;
            let report = run(&cfg)?;
            let (format, target) = match (&out, &cfg.output) {
                (Some(p), _) => (OutputFormat::Json, Some(p.clone())),
                (None, Some(o)) => (o.format, Some(PathBuf::from(&o.path))),
                (None, None) => (OutputFormat::Json, None),
            };
            write_report(&report, format, target.as_ref())?;
            Ok(finish(&report))
        }
        Command::Example { id, overrides, out } => {
            let id = ExampleId::parse(&id)?;
            let overrides = overrides
                .iter()
                .map(|s| parse_override(s))
                .collect::<Result<BTreeMap<_, _>, _>>()?;
            let report = run(&example_config(id, overrides))?;
            write_report(&report, OutputFormat::Json, out.as_ref())?;
            for t in &report.tasks {
                if let shiftinv::report::TaskOutcome::Error { code, message } = &t.outcome {
                    eprintln!("{code}: {message}");
                    if code == "ConfigInvalid" || code == "UnknownExample" {
                        return Ok(ExitCode::from(EXIT_CONFIG));
                    }
                    return Ok(ExitCode::FAILURE);
                }
            }
            Ok(finish(&report))
        }
        Command::Emit { format, report, out } => {
            let report = Report::read(&report)?;
            let format = match format {
                Format::Json => OutputFormat::Json,
                Format::Csv => OutputFormat::Csv,
            };
            write_report(&report, format, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("SHIFTINV_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            match e {
                Error::ConfigInvalid { .. } | Error::UnknownExample(_) => ExitCode::from(EXIT_CONFIG),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
