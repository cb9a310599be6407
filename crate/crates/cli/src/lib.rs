//! Batch front-end for `chernoff-core`: JSON experiment configs in, CSV reports out.

pub mod battery;
pub mod commands;
pub mod config;
mod error;
pub mod problem;
pub mod report;
pub mod suite;

use std::path::Path;

pub use config::ExperimentConfig;
pub use error::CliError;
pub use problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Converge,
    Verify,
}

/// Runs one command end to end and writes its CSV. Returns whether verification passed
/// (always true for `solve` and `converge`).
pub fn run(
    command: Command,
    config: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
) -> Result<bool, CliError> {
    let cfg = ExperimentConfig::load(config)?;
    let out = match (out, &cfg.output) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => p.into(),
        (None, None) => {
            return Err(CliError::config(
                "output",
                "no --out given and no output in config",
            ))
        }
    };
    let problem = Problem::from_config(cfg, seed)?;
    let (report, passed) = match command {
        Command::Solve => (commands::solve(&problem)?, true),
        Command::Converge => (commands::converge(&problem)?, true),
        Command::Verify => commands::verify(&problem)?,
    };
    report.write(&out)?;
    Ok(passed)
}
