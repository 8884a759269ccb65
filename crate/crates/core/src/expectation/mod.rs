//! Exact finite-N expectations over search trees.
//!
//! `L(C, T)` is the expected number of tree nodes at height `T` whose residual
//! instance has clause vector `C`. It evolves by a linear kernel from height
//! `T` to `T + 1`. Two engines compute it:
//!
//! * [`dp_reference`] applies explicit kernel rows state by state and is
//!   generic over the arithmetic ([`f64`] or exact [`num_rational::BigRational`]);
//! * [`dp_expect`] is the production engine. It works on dense grids and
//!   applies the same kernel as a sequence of binomial thinnings, one clause
//!   type at a time.

mod dense;
mod kernel;
mod recursion;
mod reference;
mod table;
mod weight;

use std::fmt;
use std::str::FromStr;

pub use dense::{dp_expect, dp_expect_with, DpOptions, DEFAULT_PRUNE};
pub use kernel::{kernel_col, kernel_split_guc, kernel_split_uc, kernel_unit_prop, KernelError, KernelRow};
pub use recursion::{check_recursion, col_f, random_points, sat_f, Recursion, RecursionReport};
pub use reference::{dp_reference, kernel_for, ReferenceTable};
pub use table::ExpectationTable;
pub use weight::Weight;

use thiserror::Error;

/// Counts of 1-, 2- and 3-clauses (SAT) or of vertices with 1, 2, 3
/// available colors (COL).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClauseVector {
    pub c1: u32,
    pub c2: u32,
    pub c3: u32,
}

impl ClauseVector {
    pub const EMPTY: ClauseVector = ClauseVector { c1: 0, c2: 0, c3: 0 };

    pub const fn new(c1: u32, c2: u32, c3: u32) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn get(self, j: usize) -> u32 {
        match j {
            1 => self.c1,
            2 => self.c2,
            3 => self.c3,
            _ => panic!("clause length {j} outside 1..=3"),
        }
    }

    pub fn total(self) -> u32 {
        self.c1 + self.c2 + self.c3
    }

    pub fn is_empty(self) -> bool {
        self == Self::EMPTY
    }

    /// `x₁^C₁ x₂^C₂ x₃^C₃`.
    pub fn monomial(self, x: [f64; 3]) -> f64 {
        x[0].powi(self.c1 as i32) * x[1].powi(self.c2 as i32) * x[2].powi(self.c3 as i32)
    }
}

impl fmt::Display for ClauseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.c1, self.c2, self.c3)
    }
}

/// Which tree process a table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Problem {
    SatUc,
    SatGuc,
    Col,
}

impl Problem {
    pub fn is_sat(self) -> bool {
        !matches!(self, Problem::Col)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::SatUc => "sat-uc",
            Problem::SatGuc => "sat-guc",
            Problem::Col => "col",
        })
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sat-uc" | "uc-sat" | "uc" => Ok(Problem::SatUc),
            "sat-guc" | "guc-sat" | "guc" => Ok(Problem::SatGuc),
            "col" | "col-guc" | "3col" => Ok(Problem::Col),
            other => Err(format!("unknown problem `{other}` (expected sat-uc, sat-guc or col)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DpError {
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("state space of {cells} cells exceeds the limit of {limit}")]
    MemoryGuard { cells: usize, limit: usize },
    #[error("table was built without per-state values")]
    StatesNotStored,
    #[error("height {t} outside [0, {n}]")]
    HeightOutOfRange { t: usize, n: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Validates `(n, param)` for a problem and returns M for SAT (`None` for COL).
pub(crate) fn validate(n: usize, param: f64, problem: Problem) -> Result<Option<u32>, DpError> {
    if n == 0 {
        return Err(DpError::BadParameter("N must be at least 1".into()));
    }
    if !param.is_finite() || param < 0.0 {
        return Err(DpError::BadParameter(format!("parameter {param} must be finite and nonnegative")));
    }
    if problem.is_sat() {
        if param.fract() != 0.0 || param > u32::MAX as f64 {
            return Err(DpError::BadParameter(format!("clause count M={param} must be an integer")));
        }
        Ok(Some(param as u32))
    } else {
        if param > n as f64 {
            return Err(DpError::BadParameter(format!("average degree c={param} exceeds N={n}")));
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_vector_basics() {
        let c = ClauseVector::new(1, 2, 3);
        assert_eq!(c.total(), 6);
        assert_eq!(c.get(2), 2);
        assert_eq!(c.to_string(), "(1,2,3)");
        assert_eq!(c.monomial([2.0, 1.0, 0.5]), 2.0 * 0.125);
        assert_eq!(ClauseVector::EMPTY.monomial([0.0, 0.0, 0.0]), 1.0);
        assert!(ClauseVector::new(0, 0, 1) > ClauseVector::new(0, 0, 0));
    }

    #[test]
    fn problem_parsing() {
        assert_eq!("sat-uc".parse::<Problem>().unwrap(), Problem::SatUc);
        assert_eq!("GUC".parse::<Problem>().unwrap(), Problem::SatGuc);
        assert_eq!("col".parse::<Problem>().unwrap(), Problem::Col);
        assert!("x".parse::<Problem>().is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(validate(0, 1.0, Problem::SatUc).is_err());
        assert!(validate(5, 2.5, Problem::SatUc).is_err());
        assert_eq!(validate(5, 20.0, Problem::SatGuc).unwrap(), Some(20));
        assert!(validate(5, 6.0, Problem::Col).is_err());
        assert_eq!(validate(5, 2.5, Problem::Col).unwrap(), None);
    }
}
