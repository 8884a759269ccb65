//! Instrumented DPLL engines and brute-force oracles.
//!
//! Every engine records one [`TreeStats`] per run: leaf and split counts
//! indexed by node height (the number of assigned variables or colored
//! vertices along the branch). A branch that creates an empty clause, or a
//! vertex with no color left, ends in a contradiction leaf at the child's
//! height.

mod brute;
mod col;
mod sat;
mod stats;

use std::fmt;
use std::str::FromStr;

pub use brute::{brute_force_col_count, brute_force_count, MAX_BRUTE_COL, MAX_BRUTE_SAT};
pub use col::{dpll_col, ColAnswer};
pub use sat::{dpll_count_sat, dpll_decide_sat, dpll_sat};
pub use stats::{RunSummary, TreeStats};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("brute force limited to N <= {limit}, got N = {n}")]
    TooLarge { n: usize, limit: usize },
}

/// Branching rule used when no unit clause is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Heuristic {
    /// Unit Clause: split on a uniformly random unset variable with a
    /// uniformly random polarity, explored first.
    Uc,
    /// Generalized Unit Clause: pick a uniformly random shortest clause and a
    /// uniformly random literal in it; explore the literal set True first.
    Guc,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::Uc => "uc",
            Heuristic::Guc => "guc",
        })
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "uc" => Ok(Heuristic::Uc),
            "guc" => Ok(Heuristic::Guc),
            other => Err(format!("unknown heuristic `{other}` (expected uc or guc)")),
        }
    }
}

/// Counting (#DPLL, explores the whole tree) or decision (halts at the first
/// solution leaf).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Mode {
    Count,
    Decide,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Count => "count",
            Mode::Decide => "decide",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "count" => Ok(Mode::Count),
            "decide" => Ok(Mode::Decide),
            other => Err(format!("unknown mode `{other}` (expected count or decide)")),
        }
    }
}
