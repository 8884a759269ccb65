//! Asymptotic growth rates of the expected search-tree sizes and the
//! thresholds derived from them.

pub mod col;
pub mod guc;
pub mod ode;
pub mod optimize;
pub mod quad;
pub mod uc;

use std::fmt;
use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

pub use col::{c_u_col, gamma_h, omega_col, omega_col_asym, omega_col_with};
pub use guc::{
    alpha_u_guc, alpha_u_guc_verbatim, m_guc, omega_guc, omega_guc_asym, omega_guc_with, x1_guc, y3_solve,
    GucObjective, OdeSolution,
};
pub use ode::OdeError;
pub use optimize::RootError;
pub use uc::{alpha_star, alpha_u, big_omega, gamma_uc, omega_c, omega_c_asym, omega_c_with, omega_s};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("root finding failed: {0}")]
    Root(#[from] RootError),
    #[error("ODE integration failed: {0}")]
    Ode(#[from] OdeError),
    #[error("{0}")]
    Domain(String),
}

/// Logarithm base of a growth rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Bits,
    Nats,
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub grid_points: usize,
    pub refinement_iterations: usize,
    /// Quadrature or integration error estimate, 0 for closed forms.
    pub error_estimate: f64,
    /// Every refined local maximum `(argmax, value)`.
    pub local_maxima: Vec<(f64, f64)>,
}

/// A maximized growth rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaResult {
    pub value: f64,
    pub argmax: f64,
    pub boundary: bool,
    pub units: Units,
    pub diagnostics: Diagnostics,
}

impl OmegaResult {
    pub fn in_bits(&self) -> f64 {
        match self.units {
            Units::Bits => self.value,
            Units::Nats => self.value / std::f64::consts::LN_2,
        }
    }
}

/// Scan density and refinement tolerance for the maximizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub grid_points: usize,
    pub xtol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { grid_points: 10_000, xtol: 1e-12 }
    }
}

/// Which third column [`write_growth_table`] fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthModel {
    /// `α, omega_s, omega_c, omega_g, argmax, boundary_flag` (bits).
    Sat,
    /// `c, omega_s, omega_c, omega_h, argmax, boundary_flag` (nats); `omega_s`
    /// is `ln 3 − c/6` and `omega_c` is left empty.
    Col,
}

/// Writes a growth-rate table over `params`. For SAT, `argmax` and
/// `boundary_flag` refer to ω_C; a rate that fails to evaluate is left empty.
pub fn write_growth_table<W: Write>(out: &mut W, model: GrowthModel, params: &[f64]) -> io::Result<()> {
    let fmt = |x: f64| format!("{x:.16e}");
    match model {
        GrowthModel::Sat => {
            writeln!(out, "alpha,omega_s,omega_c,omega_g,argmax,boundary_flag")?;
            for &a in params {
                let c = omega_c(a, 3);
                let g = omega_guc(a).map(|r| fmt(r.value)).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    fmt(a),
                    fmt(omega_s(a, 3)),
                    fmt(c.value),
                    g,
                    fmt(c.argmax),
                    c.boundary
                )?;
            }
        }
        GrowthModel::Col => {
            writeln!(out, "c,omega_s,omega_c,omega_h,argmax,boundary_flag")?;
            for &c in params {
                let s = 3f64.ln() - c / 6.0;
                match omega_col(c) {
                    Ok(h) => writeln!(out, "{},{},,{},{},{}", fmt(c), fmt(s), fmt(h.value), fmt(h.argmax), h.boundary)?,
                    Err(_) => writeln!(out, "{},{},,,,", fmt(c), fmt(s))?,
                }
            }
        }
    }
    Ok(())
}
