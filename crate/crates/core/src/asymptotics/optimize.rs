//! Global maximization on a scan grid with golden-section refinement, and
//! bracketed bisection.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("no sign change found on [{lo}, {hi}] after expanding the bracket")]
    NoBracket { lo: f64, hi: f64 },
    #[error("function is not finite at {x}")]
    NotFinite { x: f64 },
}

/// Result of a global maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    /// The maximum sits at an end of the domain.
    pub boundary: bool,
    /// All refined local maxima found on the grid, `(x, value)`.
    pub local_maxima: Vec<(f64, f64)>,
    pub grid_points: usize,
    pub refinement_iterations: usize,
}

/// `n` points on `[lo, hi]`: half uniform, half geometrically clustered at
/// `lo` down to a relative offset of `1e-12`.
pub fn mixed_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(4);
    let width = hi - lo;
    let half = n / 2;
    let mut g: Vec<f64> = (0..=half).map(|i| lo + width * i as f64 / half as f64).collect();
    let (a, b) = ((1e-12f64).ln(), 0.0f64);
    g.extend((0..half).map(|i| lo + width * (a + (b - a) * i as f64 / half as f64).exp()));
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
/// Returns `(x, f(x), iterations)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64, usize) {
    const R: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - R * (b - a);
    let mut x2 = a + R * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut iters = 0;
    while (b - a) > xtol && iters < 300 {
        iters += 1;
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - R * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + R * (b - a);
            f2 = f(x2);
        }
    }
    let candidates = [(x1, f1), (x2, f2), (a, f(a)), (b, f(b))];
    let (x, v) = candidates.into_iter().fold((x1, f1), |best, c| if c.1 > best.1 { c } else { best });
    (x, v, iters)
}

/// Scans `grid` (sorted, covering the domain), refines every grid-local
/// maximum by golden section and returns the best one.
pub fn maximize<F: Fn(f64) -> f64>(f: F, grid: &[f64], xtol: f64) -> Maximum {
    assert!(grid.len() >= 2, "grid needs at least two points");
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let last = grid.len() - 1;
    let mut local_maxima: Vec<(f64, f64)> = Vec::new();
    let mut refinement_iterations = 0;
    for i in 0..=last {
        let left_ok = i == 0 || vals[i] >= vals[i - 1];
        let right_ok = i == last || vals[i] > vals[i + 1];
        if !(left_ok && right_ok) || !vals[i].is_finite() {
            continue;
        }
        let (a, b) = (grid[i.saturating_sub(1)], grid[(i + 1).min(last)]);
        let (mut x, mut v, it) = golden_max(&f, a, b, xtol);
        refinement_iterations += it;
        if vals[i] > v {
            x = grid[i];
            v = vals[i];
        }
        local_maxima.push((x, v));
    }
    let (x, value) =
        local_maxima.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
    let span = grid[last] - grid[0];
    let boundary =
        (x - grid[0]).abs() <= 4.0 * xtol.max(1e-15 * span) || (grid[last] - x).abs() <= 4.0 * xtol.max(1e-15 * span);
    Maximum { x, value, boundary, local_maxima, grid_points: grid.len(), refinement_iterations }
}

/// Bisection on a bracket with a sign change, to absolute tolerance `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64, RootError> {
    let mut flo = f(lo);
    let fhi = f(hi);
    for (x, v) in [(lo, flo), (hi, fhi)] {
        if !v.is_finite() {
            return Err(RootError::NotFinite { x });
        }
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(RootError::NoBracket { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(RootError::NotFinite { x: mid });
        }
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection that first widens `[lo, hi]` (never below `floor`) until the
/// sign changes.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, floor: f64, tol: f64) -> Result<f64, RootError> {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..30 {
        let (fa, fb) = (f(a), f(b));
        if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() || fa == 0.0 || fb == 0.0 {
            return bisect(&f, a, b, tol);
        }
        let w = b - a;
        a = (a - w).max(floor);
        b += w;
    }
    Err(RootError::NoBracket { lo: a, hi: b })
}
