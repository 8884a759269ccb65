//! Growth rate of the GUC counting tree on random 3-SAT (base 2).
//!
//! Along the dominant branch family the reduced 2- and 3-clause densities
//! `y₂, y₃` evolve as functions of `U = −ln(1 − t)`:
//!
//! ```text
//! dY₂/dU = m(Y₂),   dY₃/dU = (3/2)(1 + Y₂ − 2Y₃),   Y₂(0) = Y₃(0) = 1,
//! ```
//!
//! so that `dy₃/dy₂ = 3(1 + y₂ − 2y₃) / (2m(y₂))`, with `m(x) = ½(1+√(1+4x)) − 2x`.
//! `Y₂` decreases from 1 towards the fixed point 3/4. The branching entropy
//! accumulates as `dK/dU = log₂(1/X₁(Y₂)) − K` with `X₁(z) = (√(1+4z) − 1)/2`,
//! and the rate is `ω^g(α) = max_U [K(U) + α log₂ Y₃(U)]`.
//!
//! In the `y₂` variable the same objective reads
//! `∫_{y₂}^1 (dz/m(z)) log₂ X₁(z) exp(∫_{y₂}^z dw/m(w)) + α log₂ y₃(y₂)`.
//! [`GucObjective::Verbatim`] evaluates the variant
//! `∫_{y₂}^1 (dz/m(z)) log₂(2z + m(z)) exp(−∫_z^1 dw/m(w)) + α log₂ y₃(y₂)`
//! by nested quadrature; its first term is never positive, so its maximum is
//! 0 at `y₂ = 1`.

use std::cell::{Cell, RefCell};
use std::sync::OnceLock;

use super::ode::{integrate, OdeError, OdeOptions, Trajectory};
use super::optimize::{find_root, maximize, mixed_grid};
use super::quad;
use super::{AsymptoticsError, OmegaResult, ScanOptions, Units};

const LN2: f64 = std::f64::consts::LN_2;

/// `m(x) = ½(1 + √(1+4x)) − 2x`.
pub fn m_guc(x: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * x).sqrt()) - 2.0 * x
}

/// `X₁(z) = (√(1+4z) − 1)/2`, the positive root of `X² + X = z`.
pub fn x1_guc(z: f64) -> f64 {
    0.5 * ((1.0 + 4.0 * z).sqrt() - 1.0)
}

fn rhs(_u: f64, y: &[f64; 3]) -> [f64; 3] {
    [m_guc(y[0]), 1.5 * (1.0 + y[0] - 2.0 * y[1]), -x1_guc(y[0]).log2() - y[2]]
}

/// Solution of the clause-density system on `y₂ ∈ [3/4 + δ, 1]`.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    traj: Trajectory<3>,
    opts: OdeOptions,
    pub delta: f64,
    /// `U` at which `y₂ = 3/4 + δ`.
    pub u_max: f64,
    /// Largest scaled local error of the accepted steps times `rtol`.
    pub accuracy: f64,
}

impl OdeSolution {
    /// `(Y₂, Y₃, K)` at `U`, integrated from the nearest stored step.
    pub fn state_at(&self, u: f64) -> [f64; 3] {
        let u = u.clamp(0.0, self.u_max);
        let i = self.traj.locate(u);
        let (t0, y0) = (self.traj.t[i], self.traj.y[i]);
        if u == t0 {
            return y0;
        }
        let opts = OdeOptions { h_init: (u - t0).abs(), ..self.opts };
        match integrate(rhs, t0, y0, u, &opts) {
            Ok(tr) => tr.last().1,
            Err(_) => self.traj.interpolate(u),
        }
    }

    /// `U` at which `Y₂(U) = y₂`.
    pub fn u_of_y2(&self, y2: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.u_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.state_at(mid)[0] > y2 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 * (1.0 + hi) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// `y₃(y₂)`.
    pub fn y3(&self, y2: f64) -> f64 {
        self.state_at(self.u_of_y2(y2))[1]
    }

    /// Stored `(y₂, y₃)` pairs from `y₂ = 1` downwards.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.traj.y.iter().map(|y| (y[0], y[1])).filter(|p| p.0 >= 0.75 + self.delta).collect()
    }

    /// `K(U) + α log₂ Y₃(U)`.
    pub fn objective(&self, u: f64, alpha: f64) -> f64 {
        let s = self.state_at(u);
        s[2] + alpha * s[1].log2()
    }
}

/// Integrates the system from `y₂ = 1` down to `y₂ = 3/4 + δ`.
pub fn y3_solve(delta: f64, rtol: f64) -> Result<OdeSolution, AsymptoticsError> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(AsymptoticsError::Domain(format!("δ = {delta} outside (0, 1/4)")));
    }
    let opts = OdeOptions { rtol, atol: rtol * 1e-2, h_init: 1e-3, ..OdeOptions::default() };
    // Y₂ − 3/4 decays like e^{−3U/2}; integrate a little past the cut.
    let u_end = (2.0 / 3.0) * (0.25 / delta).ln() + 4.0;
    let traj = integrate(rhs, 0.0, [1.0, 1.0, 0.0], u_end, &opts)?;
    let target = 0.75 + delta;
    let last = traj.y.last().expect("non-empty")[0];
    if last > target {
        return Err(OdeError::StepUnderflow { t: u_end }.into());
    }
    let accuracy = traj.max_error * rtol;
    let mut sol = OdeSolution { traj, opts, delta, u_max: u_end, accuracy };
    sol.u_max = sol.u_of_y2(target);
    Ok(sol)
}

fn default_solution() -> Result<&'static OdeSolution, AsymptoticsError> {
    static SOLUTION: OnceLock<Result<OdeSolution, AsymptoticsError>> = OnceLock::new();
    SOLUTION.get_or_init(|| y3_solve(1e-6, 1e-12)).as_ref().map_err(Clone::clone)
}

/// Which objective [`omega_guc_with`] maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GucObjective {
    /// The branch-entropy objective described in the module docs.
    Derived,
    /// The `log₂(2z + m)` variant, evaluated by nested quadrature.
    Verbatim,
}

/// `ω^g(α)` from the derived objective.
pub fn omega_guc(alpha: f64) -> Result<OmegaResult, AsymptoticsError> {
    omega_guc_with(alpha, GucObjective::Derived, &ScanOptions { grid_points: 4000, ..ScanOptions::default() })
}

/// `ω^g(α)`; `argmax` is reported as `y₂`.
pub fn omega_guc_with(
    alpha: f64,
    objective: GucObjective,
    opts: &ScanOptions,
) -> Result<OmegaResult, AsymptoticsError> {
    let sol = default_solution()?;
    match objective {
        GucObjective::Derived => {
            let m = maximize(|u| sol.objective(u, alpha), &mixed_grid(0.0, sol.u_max, opts.grid_points), opts.xtol);
            let mut r = OmegaResult::from_maximum(&m, Units::Bits);
            r.argmax = sol.state_at(m.x)[0];
            r.diagnostics.error_estimate = sol.accuracy;
            r.diagnostics.local_maxima = m.local_maxima.iter().map(|&(u, v)| (sol.state_at(u)[0], v)).collect();
            Ok(r)
        }
        GucObjective::Verbatim => {
            let lo = 0.75 + sol.delta;
            let f = |y2: f64| verbatim_entropy(y2).0 + alpha * sol.y3(y2).log2();
            let grid: Vec<f64> =
                mixed_grid(0.0, 1.0 - lo, opts.grid_points.min(200)).iter().map(|s| 1.0 - s).rev().collect();
            let m = maximize(f, &grid, opts.xtol.max(1e-10));
            let mut r = OmegaResult::from_maximum(&m, Units::Bits);
            r.diagnostics.error_estimate = verbatim_entropy(m.x).1;
            Ok(r)
        }
    }
}

/// `∫_{y₂}^1 (dz/m(z)) log₂(2z+m(z)) exp(−∫_z^1 dw/m(w))` and an error
/// estimate. Each factor is combined as sign × exp(log magnitude).
pub fn verbatim_entropy(y2: f64) -> (f64, f64) {
    let inner = |z: f64| quad::integrate(|w| 1.0 / m_guc(w), z, 1.0, 1e-13, 1e-12);
    let inner_err = Cell::new(0.0f64);
    let outer = quad::integrate(
        |z| {
            let mz = m_guc(z);
            let l = (2.0 * z + mz).log2();
            if mz == 0.0 || l == 0.0 {
                return 0.0;
            }
            let i = inner(z);
            inner_err.set(inner_err.get().max(i.error));
            let log_mag = -mz.abs().ln() + l.abs().ln() - i.value;
            mz.signum() * l.signum() * log_mag.exp()
        },
        y2,
        1.0,
        1e-12,
        1e-10,
    );
    (outer.value, outer.error + inner_err.get())
}

/// `∫_{y₂}^1 (dz/m(z)) log₂ X₁(z) exp(∫_{y₂}^z dw/m(w))`: the entropy term of
/// the derived objective by nested quadrature (independent of the ODE).
pub fn derived_entropy_quadrature(y2: f64) -> f64 {
    quad::integrate(
        |z| {
            let w = quad::integrate(|w| 1.0 / m_guc(w), y2, z, 1e-14, 1e-13).value;
            x1_guc(z).log2() / m_guc(z) * w.exp()
        },
        y2,
        1.0,
        1e-13,
        1e-12,
    )
    .value
}

/// Root of `ω^g(α) + α log₂(8/7) = 2`.
pub fn alpha_u_guc() -> Result<f64, AsymptoticsError> {
    let l = (8f64 / 7.0).log2();
    let err = RefCell::new(None);
    let h = |a: f64| match omega_guc(a) {
        Ok(r) => r.value + a * l - 2.0,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let root = find_root(h, 5.0, 20.0, 0.0, 1e-9);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(root?)
}

/// Root of `α log₂(8/7) = 2` reached when the verbatim objective is used
/// (its maximum is identically 0).
pub fn alpha_u_guc_verbatim() -> f64 {
    2.0 / (8f64 / 7.0).log2()
}

/// Large-α form `(3+√5)/(6 ln2) · [ln((1+√5)/2)]² / α`.
pub fn omega_guc_asym(alpha: f64) -> f64 {
    let s5 = 5f64.sqrt();
    (3.0 + s5) / (6.0 * LN2) * ((1.0 + s5) / 2.0).ln().powi(2) / alpha
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_values() {
        assert_eq!(m_guc(0.0), 1.0);
        assert!(m_guc(0.75).abs() < 1e-15);
        assert!((m_guc(1.0) + 0.381_966).abs() < 1e-6);
        assert!((m_guc(1.0) - ((1.0 + 5f64.sqrt()) / 2.0 - 2.0)).abs() < 1e-15);
        for i in 1..100 {
            assert!(m_guc(0.75 + 0.0025 * i as f64) < 0.0);
        }
        assert!((x1_guc(1.0) - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn ode_initial_data() {
        let sol = default_solution().unwrap();
        assert_eq!(sol.state_at(0.0), [1.0, 1.0, 0.0]);
        assert_eq!(sol.y3(1.0), 1.0);
        let d = rhs(0.0, &[1.0, 1.0, 0.0]);
        assert_eq!(d[1], 0.0);
        let y2 = sol.state_at(sol.u_max)[0];
        assert!((y2 - (0.75 + 1e-6)).abs() < 1e-12);
        let pts = sol.points();
        assert!(pts.windows(2).all(|w| w[1].0 < w[0].0));
    }

    #[test]
    fn ode_matches_y2_form() {
        // dy₃/dy₂ along the solution equals the closed-form slope.
        let sol = default_solution().unwrap();
        for y2 in [0.95, 0.85, 0.8] {
            let h = 1e-5;
            let slope = (sol.y3(y2 + h) - sol.y3(y2 - h)) / (2.0 * h);
            let y3 = sol.y3(y2);
            let exact = 3.0 * (1.0 + y2 - 2.0 * y3) / (2.0 * m_guc(y2));
            assert!((slope - exact).abs() < 1e-6, "{slope} vs {exact}");
        }
    }

    #[test]
    fn entropy_ode_matches_quadrature() {
        let sol = default_solution().unwrap();
        for y2 in [0.99, 0.9, 0.8] {
            let k = sol.state_at(sol.u_of_y2(y2))[2];
            let q = derived_entropy_quadrature(y2);
            assert!((k - q).abs() < 1e-8, "{y2}: {k} vs {q}");
        }
    }

    #[test]
    fn verbatim_first_term_is_not_positive() {
        for y2 in [0.99, 0.9, 0.8, 0.76] {
            assert!(verbatim_entropy(y2).0 < 0.0);
        }
        assert_eq!(verbatim_entropy(1.0).0, 0.0);
    }

    #[test]
    fn asymptotic_constant() {
        assert!((omega_guc_asym(1.0) - 0.291_54).abs() < 1e-5);
    }
}
