//! Experiment configuration, reproducible Monte Carlo runs, CSV reports and
//! the invariant suite.

pub mod check;
pub mod config;
pub mod experiment;
pub mod seed;

use thiserror::Error;

pub use check::{run_check, run_check_with, CheckItem, CheckOptions, CheckReport};
pub use config::{ExperimentConfig, ProblemKind};
pub use experiment::{run_cell, run_experiment, run_once, ExperimentSummary, ReportRow, RunRecord, CSV_SCHEMA};
pub use seed::{derive_seed, Stream};

/// Version string written into every report row.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
