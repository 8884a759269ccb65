//! Growth rates of the UC counting tree on random k-SAT (base-2 logarithms
//! per variable).

use super::optimize::{find_root, maximize, mixed_grid};
use super::{AsymptoticsError, Diagnostics, OmegaResult, ScanOptions, Units};

/// `Ω(t, α, k) = t + α log₂(1 − (k/2^k) t^{k−1} + ((k−1)/2^k) t^k)`.
pub fn big_omega(t: f64, alpha: f64, k: u32) -> f64 {
    let two_k = 2f64.powi(k as i32);
    let u = -(k as f64 / two_k) * t.powi(k as i32 - 1) + ((k - 1) as f64 / two_k) * t.powi(k as i32);
    assert!(u > -1.0, "log argument must be positive (t = {t}, k = {k})");
    t + alpha * u.ln_1p() / std::f64::consts::LN_2
}

/// `γ(x₂, x₃, t) = (1−t)³x₃ + (3t/2)(1−t)²x₂ + (t/8)(12 − 3t − 2t²)`.
pub fn gamma_uc(x2: f64, x3: f64, t: f64) -> f64 {
    let s = 1.0 - t;
    s.powi(3) * x3 + 1.5 * t * s * s * x2 + t / 8.0 * (12.0 - 3.0 * t - 2.0 * t * t)
}

/// Solution-leaf rate `Ω(1, α, k) = 1 + α log₂(1 − 2^{−k})`.
pub fn omega_s(alpha: f64, k: u32) -> f64 {
    big_omega(1.0, alpha, k)
}

/// Contradiction-leaf rate `max_{t ∈ [0,1]} Ω(t, α, k)`.
pub fn omega_c(alpha: f64, k: u32) -> OmegaResult {
    omega_c_with(alpha, k, &ScanOptions::default())
}

pub fn omega_c_with(alpha: f64, k: u32, opts: &ScanOptions) -> OmegaResult {
    let m = maximize(|t| big_omega(t, alpha, k), &mixed_grid(0.0, 1.0, opts.grid_points), opts.xtol);
    let mut r = OmegaResult::from_maximum(&m, Units::Bits);
    // The end t = 1 is evaluated exactly on the grid.
    if r.value <= omega_s(alpha, k) {
        r.value = omega_s(alpha, k);
        r.argmax = 1.0;
        r.boundary = true;
    }
    r
}

/// Largest interior local maximum of Ω minus its value at `t = 1`, or −1 if
/// Ω has no interior local maximum.
fn interior_gap(alpha: f64, k: u32, opts: &ScanOptions) -> f64 {
    let m = maximize(|t| big_omega(t, alpha, k), &mixed_grid(0.0, 1.0, opts.grid_points), opts.xtol);
    m.local_maxima
        .iter()
        .filter(|(t, _)| *t > 1e-9 && *t < 1.0 - 1e-6)
        .map(|(_, v)| v - omega_s(alpha, k))
        .fold(-1.0, f64::max)
}

/// Ratio above which an interior maximum of Ω overtakes the `t = 1` end, so
/// that `ω_C > ω_S`.
pub fn alpha_star(k: u32) -> Result<f64, AsymptoticsError> {
    let opts = ScanOptions { grid_points: 4000, ..ScanOptions::default() };
    Ok(find_root(|a| interior_gap(a, k, &opts), 2.0, 8.0, 0.0, 1e-9)?)
}

/// Root of `ω_C(α, k) = 2 + α log₂(1 − 2^{−k})`.
pub fn alpha_u(k: u32) -> Result<f64, AsymptoticsError> {
    let opts = ScanOptions { grid_points: 4000, ..ScanOptions::default() };
    let h = |a: f64| {
        omega_c_with(a, k, &opts).value - 2.0 - a * (-(2f64.powi(-(k as i32)))).ln_1p() / std::f64::consts::LN_2
    };
    Ok(find_root(h, 5.0, 20.0, 0.0, 1e-9)?)
}

/// Large-α form `(k−2)/(k−1) · (2^k ln2 / (k(k−1)α))^{1/(k−2)}`.
pub fn omega_c_asym(alpha: f64, k: u32) -> f64 {
    let kf = k as f64;
    (kf - 2.0) / (kf - 1.0)
        * (2f64.powi(k as i32) * std::f64::consts::LN_2 / (kf * (kf - 1.0) * alpha)).powf(1.0 / (kf - 2.0))
}

impl OmegaResult {
    pub(crate) fn from_maximum(m: &super::optimize::Maximum, units: Units) -> Self {
        OmegaResult {
            value: m.value,
            argmax: m.x,
            boundary: m.boundary,
            units,
            diagnostics: Diagnostics {
                grid_points: m.grid_points,
                refinement_iterations: m.refinement_iterations,
                error_estimate: 0.0,
                local_maxima: m.local_maxima.clone(),
            },
        }
    }
}
