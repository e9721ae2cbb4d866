//! Command-line interface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::experiments::{parse_config_with_kind, ExperimentConfig, ExperimentKind, run_experiment};

#[derive(Parser)]
#[command(
    name = "les",
    about = "Filtered-Burgers benchmarks: Gaussian space-time filtering, gradient closures, and solver comparisons",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Experiment configuration file (key = value sections).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSVs and report.txt.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fine-reference spatial step for forced-periodic runs.
    #[arg(long)]
    fine_dx: Option<f64>,
    /// Random seed for the verification suites.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the filter expansions against the quadrature oracle.
    VerifyFilter(Common),
    /// Verify the 1D/3D closure terms, limits, signs and symmetry.
    VerifyClosures(Common),
    /// Plain vs filtered model against exact solutions over grids.
    AnalyticCompare(Common),
    /// Forced periodic comparison against a fine reference.
    ForcedPeriodic(Common),
    /// Scheme order and analytic-benchmark validation.
    Convergence(Common),
    /// Filtered-model sensitivity to the nonlinearity scale.
    LambdaSweep(Common),
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::VerifyFilter(_) => ExperimentKind::VerifyFilter,
            Command::VerifyClosures(_) => ExperimentKind::VerifyClosures,
            Command::AnalyticCompare(_) => ExperimentKind::AnalyticCompare,
            Command::ForcedPeriodic(_) => ExperimentKind::ForcedPeriodic,
            Command::Convergence(_) => ExperimentKind::Convergence,
            Command::LambdaSweep(_) => ExperimentKind::LambdaSweep,
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::VerifyFilter(c)
            | Command::VerifyClosures(c)
            | Command::AnalyticCompare(c)
            | Command::ForcedPeriodic(c)
            | Command::Convergence(c)
            | Command::LambdaSweep(c) => c,
        }
    }
}

fn build_config(cmd: &Command) -> crate::Result<ExperimentConfig> {
    let common = cmd.common();
    let mut cfg = match &common.config {
        Some(path) => parse_config_with_kind(path, Some(cmd.kind()))?,
        None => ExperimentConfig::default_for(cmd.kind()),
    };
    if let Some(out) = &common.out {
        cfg.out_dir = out.clone();
    }
    if let Some(fine) = common.fine_dx {
        cfg.fine_dx = fine;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

/// Parse arguments, run, print the report; returns the process exit code
/// (0 iff every asserted inequality held).
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own help/usage text.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match build_config(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match run_experiment(&cfg) {
        Ok(report) => {
            print!("{}", report.render());
            println!("artifacts written to {}", cfg.out_dir.display());
            if report.all_passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
