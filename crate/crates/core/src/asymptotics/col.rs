//! Growth rate of the GUC decision tree on random 3-COL (natural logarithms
//! per vertex).

use super::optimize::{find_root, maximize, mixed_grid};
use super::{AsymptoticsError, OmegaResult, ScanOptions, Units};

/// `γ^h(x₂,x₃,t) = (c/6)t² − (c/3)t + (1−t)ln(x₂/2) + ln[3 + e^{−2ct/3}(2x₂/x₃ − 3)]`.
pub fn gamma_h(x2: f64, x3: f64, t: f64, c: f64) -> Result<f64, AsymptoticsError> {
    if !(x2 > 0.0 && x3 > 0.0) {
        return Err(AsymptoticsError::Domain(format!("x₂ = {x2}, x₃ = {x3} must be positive")));
    }
    let arg = 3.0 + (-2.0 * c * t / 3.0).exp() * (2.0 * x2 / x3 - 3.0);
    if arg <= 0.0 {
        return Err(AsymptoticsError::Domain(format!("log argument {arg} ≤ 0 at t = {t}")));
    }
    Ok(c / 6.0 * t * t - c / 3.0 * t + (1.0 - t) * (x2 / 2.0).ln() + arg.ln())
}

fn objective(t: f64, c: f64) -> f64 {
    c / 6.0 * t * t - c / 3.0 * t - (1.0 - t) * std::f64::consts::LN_2
        + 3f64.ln()
        + (-(-2.0 * c * t / 3.0).exp() / 3.0).ln_1p()
}

/// `ω^h(c) = max_{0<t<1} [(c/6)t² − (c/3)t − (1−t)ln2 + ln(3 − e^{−2ct/3})]`.
pub fn omega_col(c: f64) -> Result<OmegaResult, AsymptoticsError> {
    omega_col_with(c, &ScanOptions::default())
}

pub fn omega_col_with(c: f64, opts: &ScanOptions) -> Result<OmegaResult, AsymptoticsError> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(AsymptoticsError::Domain(format!("c = {c} must be finite and non-negative")));
    }
    let m = maximize(|t| objective(t, c), &mixed_grid(0.0, 1.0, opts.grid_points), opts.xtol.min(1e-14));
    Ok(OmegaResult::from_maximum(&m, Units::Nats))
}

/// Root of `ω^h(c) + c/6 = 2 ln 3`.
pub fn c_u_col() -> Result<f64, AsymptoticsError> {
    let opts = ScanOptions { grid_points: 4000, ..ScanOptions::default() };
    let h = |c: f64| match omega_col_with(c, &opts) {
        Ok(r) => r.value + c / 6.0 - 2.0 * 3f64.ln(),
        Err(_) => f64::NAN,
    };
    Ok(find_root(h, 5.0, 30.0, 0.0, 1e-9)?)
}

/// Large-c form `k(k−2)/(k−1) · [2ln2/(k−1)]^{1/(k−2)} · c^{−(k−1)/(k−2)}`,
/// in bits per vertex.
pub fn omega_col_asym(c: f64, k: u32) -> f64 {
    let kf = k as f64;
    kf * (kf - 2.0) / (kf - 1.0)
        * (2.0 * std::f64::consts::LN_2 / (kf - 1.0)).powf(1.0 / (kf - 2.0))
        * c.powf(-(kf - 1.0) / (kf - 2.0))
}
