//! Analysis configuration: named lattices and generators plus a task list.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{GeneratorConfig, GeneratorSet, GeneratorSpec};
use crate::lattice::Lattice;
use crate::sobolev::{Kernel, RdMode};

pub const SCHEMA_VERSION: u32 = 1;
pub const MIN_GRID: usize = 2;
pub const MAX_GRID: usize = 4096;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn default_grid() -> usize {
    256
}

fn default_eps_tail() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    /// Row-major basis matrices by name.
    #[serde(default)]
    pub lattices: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(default)]
    pub generators: BTreeMap<String, GeneratorConfig>,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: String,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
}

fn default_format() -> OutputFormat {
    OutputFormat::Json
}

/// Identifier of a shipped paper example.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleId {
    Ex51,
    Ex52,
    Ex53,
    SincSharpness,
    ChiJFrame,
    BsplineNoninvariance,
}

impl ExampleId {
    pub const ALL: [ExampleId; 6] = [
        ExampleId::Ex51,
        ExampleId::Ex52,
        ExampleId::Ex53,
        ExampleId::SincSharpness,
        ExampleId::ChiJFrame,
        ExampleId::BsplineNoninvariance,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExampleId::Ex51 => "ex51",
            ExampleId::Ex52 => "ex52",
            ExampleId::Ex53 => "ex53",
            ExampleId::SincSharpness => "sinc_sharpness",
            ExampleId::ChiJFrame => "chi_J_frame",
            ExampleId::BsplineNoninvariance => "bspline_noninvariance",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    /// Frame/Riesz classification of the translates along `lattice`; the Gramian lives on its dual.
    Classify {
        generators: Vec<String>,
        lattice: String,
        #[serde(default = "default_grid")]
        n_per_axis: usize,
        #[serde(default = "default_eps_tail")]
        eps_tail: f64,
        #[serde(default)]
        rank_tol: Option<f64>,
        #[serde(default)]
        t_max: Option<f64>,
    },
    /// Rank-additivity test for invariance under the finer lattice `gamma ⊃ lambda`.
    Invariance {
        generators: Vec<String>,
        lambda: String,
        gamma: String,
        #[serde(default = "default_grid")]
        n_per_axis: usize,
        #[serde(default = "default_eps_tail")]
        eps_tail: f64,
        #[serde(default)]
        rank_tol: Option<f64>,
    },
    /// Seminorm ladders of one generator's Fourier transform on ℝ.
    Sobolev {
        generator: String,
        s: Vec<f64>,
        mode: RdMode,
        #[serde(default)]
        ladder: Option<Vec<f64>>,
    },
    /// `∫_{|x|≤R}|x||f(x)|²` ladder.
    Moment {
        generator: String,
        #[serde(default)]
        ladder: Option<Vec<f64>>,
    },
    /// Kernel ratios at `k·b_1` for `k = 1..=max_multiple`, `b_1` the first dual basis vector.
    KernelRatio {
        lattice: String,
        s: Vec<f64>,
        kernel: Kernel,
        #[serde(default = "default_multiple")]
        max_multiple: usize,
    },
    PaperExample {
        id: ExampleId,
        #[serde(default)]
        overrides: BTreeMap<String, f64>,
    },
}

fn default_multiple() -> usize {
    100
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Classify { .. } => "classify",
            Task::Invariance { .. } => "invariance",
            Task::Sobolev { .. } => "sobolev",
            Task::Moment { .. } => "moment",
            Task::KernelRatio { .. } => "kernel_ratio",
            Task::PaperExample { .. } => "paper_example",
        }
    }
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::ConfigInvalid {
        path: path.into(),
        message: message.into(),
    }
}

/// Resolved lattices and generators.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub lattices: BTreeMap<String, Lattice>,
    pub generators: BTreeMap<String, GeneratorSpec>,
}

impl Resolved {
    pub fn set(&self, names: &[String]) -> Result<GeneratorSet> {
        GeneratorSet::new(names.iter().map(|n| self.generators[n].clone()).collect())
    }
}

impl AnalysisConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let path = e
                .span()
                .map(|r| format!("byte {}..{}", r.start, r.end))
                .unwrap_or_else(|| "<root>".into());
            invalid(path, e.message().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        AnalysisConfig::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks references and parameter ranges, building every lattice and generator.
    pub fn validate(&self) -> Result<Resolved> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        let mut lattices = BTreeMap::new();
        for (name, rows) in &self.lattices {
            let l = Lattice::from_rows(rows).map_err(|e| invalid(format!("lattices.{name}"), e.to_string()))?;
            lattices.insert(name.clone(), l);
        }
        let mut generators = BTreeMap::new();
        for (name, cfg) in &self.generators {
            let g = GeneratorSpec::from_config(cfg)
                .map_err(|e| invalid(format!("generators.{name}"), e.to_string()))?;
            generators.insert(name.clone(), g);
        }
        let resolved = Resolved {
            lattices,
            generators,
        };
        for (i, task) in self.tasks.iter().enumerate() {
            validate_task(&resolved, task, &format!("tasks[{i}]"))?;
        }
        Ok(resolved)
    }
}

fn check_lattice(r: &Resolved, name: &str, path: String) -> Result<()> {
    if r.lattices.contains_key(name) {
        Ok(())
    } else {
        Err(invalid(path, format!("undefined lattice `{name}`")))
    }
}

fn check_generators(r: &Resolved, names: &[String], path: &str) -> Result<()> {
    if names.is_empty() {
        return Err(invalid(format!("{path}.generators"), "at least one generator is required"));
    }
    for (j, n) in names.iter().enumerate() {
        if !r.generators.contains_key(n) {
            return Err(invalid(format!("{path}.generators[{j}]"), format!("undefined generator `{n}`")));
        }
    }
    r.set(names).map_err(|e| invalid(format!("{path}.generators"), e.to_string()))?;
    Ok(())
}

fn check_grid(n: usize, path: &str) -> Result<()> {
    if (MIN_GRID..=MAX_GRID).contains(&n) {
        Ok(())
    } else {
        Err(invalid(
            format!("{path}.n_per_axis"),
            format!("{n} is outside [{MIN_GRID}, {MAX_GRID}]"),
        ))
    }
}

fn check_eps(eps: f64, path: &str) -> Result<()> {
    if eps > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{path}.eps_tail"), "must be positive"))
    }
}

fn check_orders(s: &[f64], path: &str) -> Result<()> {
    if s.is_empty() {
        return Err(invalid(format!("{path}.s"), "at least one order is required"));
    }
    for (j, v) in s.iter().enumerate() {
        if !(*v > 0.0 && *v < 1.0) {
            return Err(invalid(format!("{path}.s[{j}]"), format!("{v} is outside (0, 1)")));
        }
    }
    Ok(())
}

fn check_ladder(ladder: &Option<Vec<f64>>, path: &str) -> Result<()> {
    if let Some(l) = ladder {
        if l.iter().any(|v| !(*v > 0.0 && v.is_finite())) || l.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid(format!("{path}.ladder"), "must be positive and strictly increasing"));
        }
    }
    Ok(())
}

fn check_generator(r: &Resolved, name: &str, path: &str) -> Result<()> {
    if r.generators.contains_key(name) {
        Ok(())
    } else {
        Err(invalid(format!("{path}.generator"), format!("undefined generator `{name}`")))
    }
}

fn validate_task(r: &Resolved, task: &Task, path: &str) -> Result<()> {
    match task {
        Task::Classify {
            generators,
            lattice,
            n_per_axis,
            eps_tail,
            ..
        } => {
            check_lattice(r, lattice, format!("{path}.lattice"))?;
            check_generators(r, generators, path)?;
            check_grid(*n_per_axis, path)?;
            check_eps(*eps_tail, path)
        }
        Task::Invariance {
            generators,
            lambda,
            gamma,
            n_per_axis,
            eps_tail,
            ..
        } => {
            check_lattice(r, lambda, format!("{path}.lambda"))?;
            check_lattice(r, gamma, format!("{path}.gamma"))?;
            check_generators(r, generators, path)?;
            check_grid(*n_per_axis, path)?;
            check_eps(*eps_tail, path)
        }
        Task::Sobolev {
            generator,
            s,
            ladder,
            ..
        } => {
            check_generator(r, generator, path)?;
            check_orders(s, path)?;
            check_ladder(ladder, path)
        }
        Task::Moment { generator, ladder } => {
            check_generator(r, generator, path)?;
            check_ladder(ladder, path)
        }
        Task::KernelRatio {
            lattice,
            s,
            max_multiple,
            ..
        } => {
            check_lattice(r, lattice, format!("{path}.lattice"))?;
            check_orders(s, path)?;
            if *max_multiple == 0 {
                return Err(invalid(format!("{path}.max_multiple"), "must be at least 1"));
            }
            Ok(())
        }
        Task::PaperExample { .. } => Ok(()),
    }
}
