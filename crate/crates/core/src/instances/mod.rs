//! Problem instances: random k-SAT formulas and Erdős–Rényi graphs.

mod cnf;
mod dimacs;
mod graph;
mod residual;

pub use cnf::{gen_ksat, gen_ksat_with, legal_clause_count, CnfInstance, Lit};
pub use dimacs::{emit_dimacs, emit_edges, parse_dimacs, parse_edges, ParseError, ParseErrorKind};
pub use graph::{gen_gnp, gen_gnp_with, Graph};
pub use residual::{
    reduce, reduce_col, reduce_sat, ColResidual, InstanceRef, PartialAssignment, ResidualClause, ResidualState,
    SatResidual, COLOR_COUNT,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("clause width k={k} must be at least 2")]
    WidthTooSmall { k: usize },
    #[error("cannot form a {k}-clause over {n} variables")]
    TooFewVariables { n: usize, k: usize },
    #[error("{m} distinct clauses requested but only {available} legal clauses exist")]
    TooManyDistinctClauses { m: usize, available: u128 },
    #[error("average degree c={c} is outside [0, N={n}]")]
    DegreeOutOfRange { c: f64, n: usize },
    #[error("clause {index}: {reason}")]
    BadClause { index: usize, reason: String },
    #[error("edge ({u}, {v}): {reason}")]
    BadEdge { u: usize, v: usize, reason: String },
    #[error("assignment: {0}")]
    BadAssignment(String),
}
