//! Experiment orchestration, verification suites and CSV emission.

mod analytic_compare;
mod config;
mod convergence;
mod forced_periodic;
mod lambda_sweep;
mod report;
mod sampler;
mod verify_closures;
mod verify_filter;

pub use analytic_compare::experiment_analytic_compare;
pub use config::{parse_config, parse_config_with_kind, ExperimentConfig, ExperimentKind};
pub use convergence::experiment_convergence;
pub use forced_periodic::experiment_forced_periodic;
pub use lambda_sweep::experiment_lambda_sweep;
pub use report::{write_csv, ReportRow, RowKind, RunReport};
pub use sampler::TrajectorySampler;
pub use verify_closures::verify_closures_suite;
pub use verify_filter::verify_filter_suite;

use crate::error::Result;

/// Run the configured experiment and write `report.txt` into the output dir.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let report = match cfg.kind {
        ExperimentKind::VerifyFilter => verify_filter_suite(cfg)?,
        ExperimentKind::VerifyClosures => verify_closures_suite(cfg)?,
        ExperimentKind::AnalyticCompare => experiment_analytic_compare(cfg)?,
        ExperimentKind::ForcedPeriodic => experiment_forced_periodic(cfg)?,
        ExperimentKind::Convergence => experiment_convergence(cfg)?,
        ExperimentKind::LambdaSweep => experiment_lambda_sweep(cfg)?,
    };
    report.write_to(&cfg.out_dir.join("report.txt"))?;
    Ok(report)
}
