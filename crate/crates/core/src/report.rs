//! Run reports and their JSON / CSV emitters.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{AnalysisConfig, ExampleId};
use crate::error::{Error, Result};
use crate::sobolev::{KernelRatio, SobolevEstimate};
use crate::spectral::{Classification, InvarianceResult, RankEntry};

pub const TOOLKIT: &str = "shiftinv";

/// Everything produced by one `analyze` or `example` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub toolkit: String,
    pub version: String,
    pub config: AnalysisConfig,
    pub tasks: Vec<TaskReport>,
    /// Wall-clock data; the only part of a report that differs between identical runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub task_seconds: Vec<f64>,
}

impl Report {
    pub fn new(config: AnalysisConfig) -> Self {
        Report {
            toolkit: TOOLKIT.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            tasks: Vec::new(),
            timing: None,
        }
    }

    /// The report with wall-clock data removed.
    pub fn without_timing(&self) -> Report {
        Report {
            timing: None,
            ..self.clone()
        }
    }

    /// Paper-example assertions that failed, as `(task index, assertion name)`.
    pub fn failed_assertions(&self) -> Vec<(usize, String)> {
        let mut out = Vec::new();
        for t in &self.tasks {
            if let TaskOutcome::Ok {
                result: TaskResult::PaperExample(ex),
            } = &t.outcome
            {
                for a in ex.assertions.iter().filter(|a| !a.passed) {
                    out.push((t.index, a.name.clone()));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed report: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Report::from_json(&fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Writes one CSV file per table into `dir`, returning the paths in write order.
    pub fn write_csv_tables(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut summary = Table::new(&["task", "kind", "status", "code", "detail"]);
        for t in &self.tasks {
            match &t.outcome {
                TaskOutcome::Error { code, message } => {
                    summary.row([t.index.to_string(), t.kind.clone(), "error".into(), code.clone(), message.clone()]);
                }
                TaskOutcome::Ok { result } => {
                    summary.row([
                        t.index.to_string(),
                        t.kind.clone(),
                        "ok".into(),
                        String::new(),
                        result.headline(),
                    ]);
                    result.tables(&format!("task{}", t.index), &mut |name, table| {
                        written.push(table.write(&dir.join(format!("{name}.csv")))?);
                        Ok(())
                    })?;
                }
            }
        }
        written.insert(0, summary.write(&dir.join("tasks.csv"))?);
        Ok(written)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub index: usize,
    pub kind: String,
    pub outcome: TaskOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TaskOutcome {
    Ok { result: TaskResult },
    Error { code: String, message: String },
}

impl TaskOutcome {
    pub fn from_result(r: Result<TaskResult>) -> Self {
        match r {
            Ok(result) => TaskOutcome::Ok { result },
            Err(e) => TaskOutcome::Error {
                code: e.code().into(),
                message: e.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TaskResult {
    Classify(ClassifyResult),
    Invariance(InvarianceSummary),
    Sobolev { estimates: Vec<SobolevEstimate> },
    Moment { estimate: SobolevEstimate },
    KernelRatio(KernelSummary),
    PaperExample(ExampleReport),
}

impl TaskResult {
    fn headline(&self) -> String {
        match self {
            TaskResult::Classify(c) => format!(
                "status={:?} riesz={} rho={}",
                c.classification.status, c.classification.is_riesz, c.classification.rho
            ),
            TaskResult::Invariance(s) => format!("invariant={} mismatches={}", s.invariant, s.mismatches),
            TaskResult::Sobolev { estimates } => estimates
                .iter()
                .map(|e| format!("s={} {:?}", e.s, e.verdict))
                .collect::<Vec<_>>()
                .join("; "),
            TaskResult::Moment { estimate } => format!("{:?} slope={}", estimate.verdict, estimate.fit.slope),
            TaskResult::KernelRatio(k) => format!("ratios={}", k.ratios.len()),
            TaskResult::PaperExample(e) => format!(
                "{} passed={} ({}/{})",
                e.id.name(),
                e.passed,
                e.assertions.iter().filter(|a| a.passed).count(),
                e.assertions.len()
            ),
        }
    }

    fn tables(&self, prefix: &str, sink: &mut dyn FnMut(String, Table) -> Result<()>) -> Result<()> {
        match self {
            TaskResult::Classify(c) => {
                sink(format!("{prefix}_classification"), classification_table(&c.classification))?;
                let mut t = Table::new(&["rank", "count"]);
                for r in &c.rank_histogram {
                    t.row([r.rank.to_string(), r.count.to_string()]);
                }
                sink(format!("{prefix}_ranks"), t)
            }
            TaskResult::Invariance(s) => invariance_tables(prefix, s, sink),
            TaskResult::Sobolev { estimates } => {
                for (j, e) in estimates.iter().enumerate() {
                    sink(format!("{prefix}_ladder{j}"), ladder_table(e))?;
                }
                Ok(())
            }
            TaskResult::Moment { estimate } => sink(format!("{prefix}_ladder0"), ladder_table(estimate)),
            TaskResult::KernelRatio(k) => sink(format!("{prefix}_kernel"), kernel_table(&k.ratios)),
            TaskResult::PaperExample(e) => {
                let mut t = Table::new(&["assertion", "passed", "detail"]);
                for a in &e.assertions {
                    t.row([a.name.clone(), a.passed.to_string(), a.detail.clone()]);
                }
                sink(format!("{prefix}_assertions"), t)?;
                let mut t = Table::new(&["metric", "value"]);
                for (k, v) in &e.metrics {
                    t.row([k.clone(), fmt_f64(*v)]);
                }
                sink(format!("{prefix}_metrics"), t)?;
                for c in &e.classifications {
                    sink(format!("{prefix}_{}_classification", c.name), classification_table(&c.classification))?;
                }
                for inv in &e.invariance {
                    invariance_tables(&format!("{prefix}_{}", inv.name), &inv.summary, sink)?;
                }
                for est in &e.estimates {
                    sink(format!("{prefix}_{}_ladder", est.name), ladder_table(&est.estimate))?;
                }
                if !e.kernels.is_empty() {
                    sink(format!("{prefix}_kernel"), kernel_table(&e.kernels))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCount {
    pub rank: usize,
    pub count: usize,
}

pub fn rank_histogram(ranks: &[usize]) -> Vec<RankCount> {
    let mut m = BTreeMap::new();
    for r in ranks {
        *m.entry(*r).or_insert(0) += 1;
    }
    m.into_iter().map(|(rank, count)| RankCount { rank, count }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub classification: Classification,
    pub rank_histogram: Vec<RankCount>,
    /// Lattice-sum radius used for every node.
    pub radius: f64,
}

/// Count of nodes per `(rank on Λ*, summed rank over the Γ* cosets)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTally {
    pub rank_lambda: usize,
    pub sum_gamma: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceSummary {
    pub invariant: bool,
    pub index: usize,
    pub reps: Vec<Vec<f64>>,
    pub rank_tol_lambda: f64,
    pub rank_tol_gamma: f64,
    pub trunc_err: f64,
    pub nodes: usize,
    pub mismatches: usize,
    pub tally: Vec<RankTally>,
    /// Per-node ledger; omitted when the caller asks for the tally only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ledger: Vec<RankEntry>,
}

impl InvarianceSummary {
    pub fn from_result(r: &InvarianceResult, keep_ledger: bool) -> Self {
        let mut m = BTreeMap::new();
        for e in &r.ledger {
            *m.entry((e.rank_lambda, e.sum_gamma())).or_insert(0) += 1;
        }
        InvarianceSummary {
            invariant: r.invariant,
            index: r.index,
            reps: r.reps.clone(),
            rank_tol_lambda: r.rank_tol_lambda,
            rank_tol_gamma: r.rank_tol_gamma,
            trunc_err: r.trunc_err,
            nodes: r.ledger.len(),
            mismatches: r.mismatches,
            tally: m
                .into_iter()
                .map(|((rank_lambda, sum_gamma), count)| RankTally {
                    rank_lambda,
                    sum_gamma,
                    count,
                })
                .collect(),
            ledger: if keep_ledger { r.ledger.clone() } else { Vec::new() },
        }
    }

    /// Share of nodes whose ranks read `rank_lambda` vs `sum_gamma`.
    pub fn fraction(&self, rank_lambda: usize, sum_gamma: usize) -> f64 {
        let hits: usize = self
            .tally
            .iter()
            .filter(|t| t.rank_lambda == rank_lambda && t.sum_gamma == sum_gamma)
            .map(|t| t.count)
            .sum();
        hits as f64 / self.nodes.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSummary {
    pub ratios: Vec<KernelRatio>,
    /// Relative spread of the ratios with `|ξ| >= 50`, per order `s`.
    pub spread_far: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedClassification {
    pub name: String,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedInvariance {
    pub name: String,
    pub summary: InvarianceSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedEstimate {
    pub name: String,
    pub estimate: SobolevEstimate,
}

/// Outcome of one shipped paper example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub id: ExampleId,
    #[serde(with = "crate::float_serde::map")]
    pub params: BTreeMap<String, f64>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
    #[serde(with = "crate::float_serde::map")]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classifications: Vec<NamedClassification>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub invariance: Vec<NamedInvariance>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub estimates: Vec<NamedEstimate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kernels: Vec<KernelRatio>,
}

impl ExampleReport {
    pub fn new(id: ExampleId, params: BTreeMap<String, f64>) -> Self {
        ExampleReport {
            id,
            params,
            assertions: Vec::new(),
            passed: true,
            metrics: BTreeMap::new(),
            classifications: Vec::new(),
            invariance: Vec::new(),
            estimates: Vec::new(),
            kernels: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

// ---------------------------------------------------------------------------
// CSV tables
// ---------------------------------------------------------------------------

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        self.rows.push(cells.into_iter().collect());
    }

    fn write(&self, path: &Path) -> Result<PathBuf> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::IoFailure(e.to_string()))?;
        w.write_record(&self.header).map_err(|e| Error::IoFailure(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| Error::IoFailure(e.to_string()))?;
        }
        w.flush()?;
        Ok(path.to_path_buf())
    }
}

fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn ladder_table(e: &SobolevEstimate) -> Table {
    let mut t = Table::new(&["N", "S"]);
    for (n, s) in &e.partials {
        t.row([fmt_f64(*n), fmt_f64(*s)]);
    }
    t
}

fn kernel_table(ratios: &[KernelRatio]) -> Table {
    let mut t = Table::new(&["xi", "s", "kernel", "value", "ratio"]);
    for r in ratios {
        t.row([
            r.xi.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(" "),
            fmt_f64(r.s),
            format!("{:?}", r.kernel),
            fmt_f64(r.value),
            fmt_f64(r.ratio),
        ]);
    }
    t
}

fn classification_table(c: &Classification) -> Table {
    let mut t = Table::new(&["field", "value"]);
    let rows = [
        ("status", format!("{:?}", c.status)),
        ("is_frame", c.is_frame.to_string()),
        ("is_riesz", c.is_riesz.to_string()),
        ("frame_lower", fmt_f64(c.frame_bounds.0)),
        ("frame_upper", fmt_f64(c.frame_bounds.1)),
        ("rho", c.rho.to_string()),
        ("min_rank", c.min_rank.to_string()),
        ("rank_constant", c.rank_constant.to_string()),
        ("transition_nodes", c.transition_nodes.len().to_string()),
        ("n_per_axis", c.confidence.n_per_axis.to_string()),
        ("nodes", c.confidence.nodes.to_string()),
        ("rank_tol", fmt_f64(c.confidence.rank_tol)),
        ("t_max", fmt_f64(c.confidence.t_max)),
        ("trunc_err", fmt_f64(c.confidence.trunc_err)),
        ("eps_tail", fmt_f64(c.confidence.eps_tail)),
    ];
    for (k, v) in rows {
        t.row([k.to_string(), v]);
    }
    t
}

fn invariance_tables(
    prefix: &str,
    s: &InvarianceSummary,
    sink: &mut dyn FnMut(String, Table) -> Result<()>,
) -> Result<()> {
    let mut t = Table::new(&["rank_lambda", "sum_gamma", "count"]);
    for r in &s.tally {
        t.row([r.rank_lambda.to_string(), r.sum_gamma.to_string(), r.count.to_string()]);
    }
    sink(format!("{prefix}_tally"), t)?;
    if !s.ledger.is_empty() {
        let mut t = Table::new(&["x", "rank_lambda", "ranks_gamma"]);
        for e in &s.ledger {
            t.row([
                e.x.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(" "),
                e.rank_lambda.to_string(),
                e.ranks_gamma.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "),
            ]);
        }
        sink(format!("{prefix}_ledger"), t)?;
    }
    Ok(())
}
