//! Instrumented DPLL search trees for random k-SAT and random-graph 3-coloring.
//!
//! The crate is organised in layers, each of which validates the next:
//!
//! - [`instances`]: random k-SAT formulas and G(N, c/N) graphs, DIMACS and
//!   edge-list I/O, and reduction of an instance under a partial assignment.
//! - [`solver`]: counting (#DPLL) and decision DPLL engines with the UC and
//!   GUC branching rules, the 3-COL engine, and brute-force oracles.
//! - [`expectation`]: exact finite-N expected search-tree statistics obtained
//!   by propagating clause-vector counts through Markov transition kernels,
//!   plus the generating-function evaluator and recursion residual checks.
//! - [`asymptotics`]: growth rates of the expected tree size and the
//!   associated threshold constants.
//! - [`harness`]: reproducible Monte Carlo experiments, CSV reports and the
//!   invariant suite behind the `check` subcommand.

pub mod asymptotics;
pub mod expectation;
pub mod harness;
pub mod instances;
pub mod solver;

pub use instances::{CnfInstance, Graph, Lit};
pub use solver::{Heuristic, Mode, TreeStats};
