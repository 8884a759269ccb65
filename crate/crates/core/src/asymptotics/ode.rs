//! Adaptive Dormand–Prince 5(4) integration with stored steps.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step limit reached at t = {t}")]
    TooManySteps { t: f64 },
    #[error("non-finite state at t = {t}")]
    NotFinite { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14, h_init: 1e-4, max_steps: 1_000_000 }
    }
}

/// Accepted steps `(t, y, y')`, in integration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const D: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; D]>,
    pub dy: Vec<[f64; D]>,
    /// Largest accepted scaled local error estimate (≤ 1 by construction).
    pub max_error: f64,
}

impl<const D: usize> Trajectory<D> {
    pub fn last(&self) -> (f64, [f64; D]) {
        (*self.t.last().expect("non-empty"), *self.y.last().expect("non-empty"))
    }

    /// Index `i` of the stored step interval containing `t` (clamped).
    pub fn locate(&self, t: f64) -> usize {
        let forward = self.t.len() < 2 || self.t[1] >= self.t[0];
        let i = if forward { self.t.partition_point(|&s| s <= t) } else { self.t.partition_point(|&s| s >= t) };
        i.saturating_sub(1).min(self.t.len().saturating_sub(2))
    }

    /// Cubic Hermite interpolation between stored steps.
    pub fn interpolate(&self, t: f64) -> [f64; D] {
        if self.t.len() == 1 {
            return self.y[0];
        }
        let i = self.locate(t);
        let (t0, t1) = (self.t[i], self.t[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let mut out = [0.0; D];
        for k in 0..D {
            out[k] =
                h00 * self.y[i][k] + h10 * h * self.dy[i][k] + h01 * self.y[i + 1][k] + h11 * h * self.dy[i + 1][k];
        }
        out
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction).
pub fn integrate<const D: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; D],
    t1: f64,
    opts: &OdeOptions,
) -> Result<Trajectory<D>, OdeError>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut traj = Trajectory { t: vec![t], y: vec![y], dy: vec![k1], max_error: 0.0 };
    let span = (t1 - t0).abs();
    if span == 0.0 {
        return Ok(traj);
    }
    let mut h = opts.h_init.min(span);
    let h_min = 1e-15 * span.max(t0.abs()).max(1e-300);
    let mut steps = 0;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(OdeError::TooManySteps { t });
        }
        let last = h >= (t1 - t).abs();
        let hs = if last { t1 - t } else { dir * h };
        let mut k = [[0.0; D]; 7];
        k[0] = k1;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for d in 0..D {
                    ys[d] += hs * A[s][j] * kj[d];
                }
            }
            // The last stage is evaluated at the 5th-order solution (FSAL).
            k[s] = f(t + C[s] * hs, &ys);
        }
        let mut y_new = y;
        y_new_from(&mut y_new, &y, hs, &k);
        let mut err = 0.0;
        for d in 0..D {
            let e: f64 = (0..7).map(|s| E[s] * k[s][d]).sum::<f64>() * hs;
            let sc = opts.atol + opts.rtol * y[d].abs().max(y_new[d].abs());
            err += (e / sc).powi(2);
        }
        let err = (err / D as f64).sqrt();
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            if h < h_min {
                return Err(OdeError::NotFinite { t });
            }
            continue;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + hs };
            y = y_new;
            k1 = k[6];
            traj.t.push(t);
            traj.y.push(y);
            traj.dy.push(k1);
            traj.max_error = traj.max_error.max(err);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (hs.abs() * factor).max(h_min);
        if err > 1.0 && hs.abs() <= h_min {
            return Err(OdeError::StepUnderflow { t });
        }
    }
    Ok(traj)
}

fn y_new_from<const D: usize>(out: &mut [f64; D], y: &[f64; D], hs: f64, k: &[[f64; D]; 7]) {
    for d in 0..D {
        out[d] = y[d] + hs * (0..6).map(|j| A[6][j] * k[j][d]).sum::<f64>();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let tr = integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, &OdeOptions::default()).unwrap();
        let (t, y) = tr.last();
        assert_eq!(t, 5.0);
        assert!((y[0] - (-5f64).exp()).abs() < 1e-12);
        assert!((tr.interpolate(2.5)[0] - (-2.5f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn backward_harmonic_oscillator() {
        let f = |_: f64, y: &[f64; 2]| [y[1], -y[0]];
        let tr = integrate(f, 1.0, [1f64.sin(), 1f64.cos()], -2.0, &OdeOptions::default()).unwrap();
        let (_, y) = tr.last();
        assert!((y[0] - (-2f64).sin()).abs() < 1e-11);
        assert!((tr.interpolate(0.0)[0]).abs() < 1e-7);
    }

    #[test]
    fn zero_span() {
        let tr = integrate(|_, y: &[f64; 1]| [y[0]], 1.0, [2.0], 1.0, &OdeOptions::default()).unwrap();
        assert_eq!(tr.t.len(), 1);
    }
}
