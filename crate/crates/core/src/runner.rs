//! Executes the tasks of an [`AnalysisConfig`] into a [`Report`].

use std::collections::BTreeMap;
use std::time::Instant;

use crate::config::{AnalysisConfig, ExampleId, Resolved, Task};
use crate::error::Result;
use crate::periodization::gramian_field;
use crate::presets::run_example;
use crate::report::{
    rank_histogram, ClassifyResult, InvarianceSummary, KernelSummary, Report, TaskOutcome, TaskReport,
    TaskResult, Timing,
};
use crate::sobolev::{default_rd_ladder, kernel_ratio, moment_estimate, rd_estimate, relative_spread};
use crate::spectral::{classify_profile, invariance_test, SpectralProfile, T_MAX};

/// Validates the config, then runs every task in order. Task failures are
/// recorded in the report and do not stop the run.
pub fn run(config: &AnalysisConfig) -> Result<Report> {
    let resolved = config.validate()?;
    let mut report = Report::new(config.clone());
    let start = Instant::now();
    let mut task_seconds = Vec::with_capacity(config.tasks.len());
    for (index, task) in config.tasks.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = TaskOutcome::from_result(run_task(&resolved, task));
        task_seconds.push(t0.elapsed().as_secs_f64());
        report.tasks.push(TaskReport {
            index,
            kind: task.kind().into(),
            outcome,
        });
    }
    report.timing = Some(Timing {
        total_seconds: start.elapsed().as_secs_f64(),
        task_seconds,
    });
    Ok(report)
}

/// A config holding a single paper-example task.
pub fn example_config(id: ExampleId, overrides: BTreeMap<String, f64>) -> AnalysisConfig {
    AnalysisConfig {
        schema_version: crate::config::SCHEMA_VERSION,
        lattices: BTreeMap::new(),
        generators: BTreeMap::new(),
        tasks: vec![Task::PaperExample { id, overrides }],
        output: None,
    }
}

fn run_task(r: &Resolved, task: &Task) -> Result<TaskResult> {
    match task {
        Task::Classify {
            generators,
            lattice,
            n_per_axis,
            eps_tail,
            rank_tol,
            t_max,
        } => {
            let set = r.set(generators)?;
            let field = gramian_field(&set, &r.lattices[lattice].dual(), *n_per_axis, *eps_tail)?;
            let profile = SpectralProfile::compute(&field, *rank_tol)?;
            let classification = classify_profile(&field, &profile, t_max.unwrap_or(T_MAX));
            Ok(TaskResult::Classify(ClassifyResult {
                classification,
                rank_histogram: rank_histogram(&profile.ranks),
                radius: field.radius,
            }))
        }
        Task::Invariance {
            generators,
            lambda,
            gamma,
            n_per_axis,
            eps_tail,
            rank_tol,
        } => {
            let set = r.set(generators)?;
            let inv = invariance_test(
                &set,
                &r.lattices[lambda],
                &r.lattices[gamma],
                *n_per_axis,
                *eps_tail,
                *rank_tol,
            )?;
            Ok(TaskResult::Invariance(InvarianceSummary::from_result(&inv, true)))
        }
        Task::Sobolev {
            generator,
            s,
            mode,
            ladder,
        } => {
            let spec = &r.generators[generator];
            let rs = ladder.clone().unwrap_or_else(default_rd_ladder);
            let estimates = s
                .iter()
                .map(|s| rd_estimate(spec, *s, *mode, &rs))
                .collect::<Result<Vec<_>>>()?;
            Ok(TaskResult::Sobolev { estimates })
        }
        Task::Moment { generator, ladder } => {
            let rs = ladder.clone().unwrap_or_else(default_rd_ladder);
            Ok(TaskResult::Moment {
                estimate: moment_estimate(&r.generators[generator], &rs)?,
            })
        }
        Task::KernelRatio {
            lattice,
            s,
            kernel,
            max_multiple,
        } => {
            let gamma = &r.lattices[lattice];
            let b = gamma.dual().column(0);
            let mut ratios = Vec::new();
            let mut spread_far = Vec::new();
            for &order in s {
                let mut far = Vec::new();
                for k in 1..=*max_multiple {
                    let xi: Vec<f64> = b.iter().map(|v| v * k as f64).collect();
                    let kr = kernel_ratio(&xi, order, gamma, *kernel)?;
                    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if (50.0..=100.0).contains(&norm) {
                        far.push(kr.ratio);
                    }
                    ratios.push(kr);
                }
                if far.len() >= 2 {
                    spread_far.push((order, relative_spread(&far)));
                }
            }
            Ok(TaskResult::KernelRatio(KernelSummary { ratios, spread_far }))
        }
        Task::PaperExample { id, overrides } => Ok(TaskResult::PaperExample(run_example(*id, overrides)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn empty_task_list_echoes_config() {
        let cfg = AnalysisConfig::from_toml_str("schema_version = 1").unwrap();
        let rep = run(&cfg).unwrap();
        assert!(rep.tasks.is_empty());
        assert_eq!(rep.config, cfg);
    }

    #[test]
    fn task_errors_are_embedded() {
        let text = r#"
[lattices]
Z = [[1.0]]
[generators.tab]
family = { kind = "tabulated", start = -0.5, step = 0.5, values = [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]] }
[[tasks]]
kind = "moment"
generator = "tab"
[[tasks]]
kind = "classify"
generators = ["tab"]
lattice = "Z"
n_per_axis = 16
"#;
        let rep = run(&AnalysisConfig::from_toml_str(text).unwrap()).unwrap();
        assert!(matches!(&rep.tasks[0].outcome, TaskOutcome::Error { code, .. } if code == "ModeUnsupported"));
        assert!(matches!(&rep.tasks[1].outcome, TaskOutcome::Ok { .. }));
    }

    #[test]
    fn undefined_lattice_is_config_error() {
        let text = r#"
[generators.chi]
family = { kind = "indicator_box", lower = [-0.5], upper = [0.5] }
[[tasks]]
kind = "classify"
generators = ["chi"]
lattice = "Z"
"#;
        let err = run(&AnalysisConfig::from_toml_str(text).unwrap()).unwrap_err();
        assert!(matches!(err, Error::ConfigInvalid { path, .. } if path == "tasks[0].lattice"));
    }
}
