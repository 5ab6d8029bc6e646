use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use shiftinv::report::{Report, TaskOutcome, TaskResult};
use shiftinv::runner::example_config;
use shiftinv::{run, AnalysisConfig, ExampleId};

fn shiftinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftinv"))
        .args(args)
        .env("SHIFTINV_THREADS", "1")
        .output()
        .expect("binary runs")
}

const SOBOLEV_CONFIG: &str = r#"
schema_version = 1

[generators.chi]
family = { kind = "indicator_box", lower = [-0.5], upper = [0.5] }

[[tasks]]
kind = "sobolev"
generator = "chi"
s = [0.5]
mode = "fourier_integral"
ladder = [100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0, 6400.0]
"#;

fn quick_overrides(id: ExampleId) -> BTreeMap<String, f64> {
    let n = match id {
        ExampleId::SincSharpness => None,
        ExampleId::BsplineNoninvariance => Some(256.0),
        _ => Some(128.0),
    };
    n.map(|n| BTreeMap::from([("n".to_string(), n)])).unwrap_or_default()
}

#[test]
fn presets_are_deterministic_and_round_trip() {
    for id in ExampleId::ALL {
        let cfg = example_config(id, quick_overrides(id));
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        let ja = a.without_timing().to_json();
        assert_eq!(ja, b.without_timing().to_json(), "{}", id.name());
        let back = Report::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a, "{}", id.name());
        assert!(matches!(&a.tasks[0].outcome, TaskOutcome::Ok { result: TaskResult::PaperExample(_) }));
    }
}

#[test]
fn csv_ladder_keeps_order() {
    let cfg = AnalysisConfig::from_toml_str(SOBOLEV_CONFIG).unwrap();
    let report = run(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = report.write_csv_tables(dir.path()).unwrap();
    let ladder = files.iter().find(|p| p.ends_with("task0_ladder0.csv")).expect("ladder table");
    let mut rdr = csv::Reader::from_path(ladder).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["N", "S"]);
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect();
    let ns: Vec<f64> = rows.iter().map(|r| r.0).collect();
    assert_eq!(ns, vec![100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0, 6400.0]);
    assert!(rows.windows(2).all(|w| w[1].1 >= w[0].1));
}

#[test]
fn example_command_writes_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = shiftinv(&["example", "chi_J_frame", "--override", "n=128", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = Report::read(&out).unwrap();
    assert!(rep.failed_assertions().is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(shiftinv(&["example", "ex99"]).status.code(), Some(2));
    assert_eq!(shiftinv(&["example", "ex52", "--override", "eps=0.3"]).status.code(), Some(2));
    assert_eq!(shiftinv(&["example", "ex52", "--override", "colour=1"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "schema_version = 1\nunknown_key = 3\n").unwrap();
    let o = shiftinv(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ConfigInvalid"));

    // a coarse rank threshold blurs the hat-function ledger below 99%
    let o = shiftinv(&[
        "example",
        "bspline_noninvariance",
        "--override",
        "n=256",
        "--override",
        "rank_tol=1e-6",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn analyze_then_emit_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, SOBOLEV_CONFIG).unwrap();
    let json = dir.path().join("r.json");
    let o = shiftinv(&["analyze", cfg.to_str().unwrap(), "--out", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let csv_dir = dir.path().join("tables");
    let o = shiftinv(&["emit", "--format", "csv", json.to_str().unwrap(), "--out", csv_dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(Path::new(&csv_dir.join("tasks.csv")).exists());
    assert!(Path::new(&csv_dir.join("task0_ladder0.csv")).exists());

    let again = dir.path().join("again.json");
    let o = shiftinv(&["emit", "--format", "json", json.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(Report::read(&again).unwrap(), Report::read(&json).unwrap());
}

#[test]
fn shipped_config_parses_and_validates() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/ex51.toml");
    let cfg = AnalysisConfig::load(Path::new(path)).unwrap();
    cfg.validate().unwrap();
    assert_eq!(cfg.tasks.len(), 4);
    let back = AnalysisConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
    assert_eq!(back, cfg);
}
