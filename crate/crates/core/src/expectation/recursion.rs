//! Height recursions for the generating function
//! `G(x₁,x₂,x₃;T) = Σ_C x₁^C₁ x₂^C₂ x₃^C₃ L(C,T)`.
//!
//! With `f = (f₁,f₂,f₃)` the image of `x` under one spectator step, every
//! process satisfies
//!
//! ```text
//! G(x;T+1) = (1/f₁) G(f;T) + (A − 1/f₁) G(0,f₂,f₃;T) + (B − A) G(0,0,f₃;T) − B G(0,0,0;T)
//! ```
//!
//! * UC: `A = B = 2`;
//! * GUC: `A = (1+x₁)/f₂`, `B = (1+x₂)/f₃` (the clause shortened on the False
//!   branch is created after the step and is not transformed);
//! * GUC, leading order: `A = (1+f₁)/f₂`, `B = (1+f₂)/f₃`, which agrees with
//!   the exact form up to O(μ);
//! * COL: `A = 2/f₂`, `B = 3/f₃` and `G(0,0,0;T) = 0` below `T = N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::table::ExpectationTable;
use super::{DpError, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Recursion {
    Uc,
    Guc,
    GucLeadingOrder,
    Col,
}

impl Recursion {
    pub fn problem(self) -> Problem {
        match self {
            Recursion::Uc => Problem::SatUc,
            Recursion::Guc | Recursion::GucLeadingOrder => Problem::SatGuc,
            Recursion::Col => Problem::Col,
        }
    }
}

/// SAT spectator image with `μ = 1/(N−T)`.
pub fn sat_f(x: [f64; 3], mu: f64) -> [f64; 3] {
    [
        x[0] + 0.5 * mu * (1.0 - 2.0 * x[0]),
        x[1] + mu * (x[0] + 1.0 - 2.0 * x[1]),
        x[2] + 1.5 * mu * (x[1] + 1.0 - 2.0 * x[2]),
    ]
}

/// COL spectator image with `μ = c/(3N)`.
pub fn col_f(x: [f64; 3], mu: f64) -> [f64; 3] {
    [(1.0 - mu) * x[0], (1.0 - 2.0 * mu) * x[1] + 2.0 * mu * x[0], (1.0 - 3.0 * mu) * x[2] + 3.0 * mu * x[1]]
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionReport {
    pub variant: Recursion,
    /// Largest `|LHS − RHS| / (1 + |LHS|)`.
    pub max_residual: f64,
    pub per_height: Vec<f64>,
    pub evaluations: usize,
    /// Evaluations where a zero `f_j` forced the limiting form.
    pub limit_substitutions: usize,
}

/// `count` points uniform in `(0.1, 1]³`.
pub fn random_points(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| [0; 3].map(|_| 1.0 - 0.9 * rng.gen::<f64>())).collect()
}

/// Evaluates the recursion for every height transition `T → T+1` and point.
pub fn check_recursion(
    table: &ExpectationTable,
    variant: Recursion,
    points: &[[f64; 3]],
) -> Result<RecursionReport, DpError> {
    if table.problem != variant.problem() {
        return Err(DpError::BadParameter(format!("{variant:?} does not describe a {} table", table.problem)));
    }
    let n = table.n;
    let mut per_height = vec![0.0f64; n];
    let mut limit_substitutions = 0;
    for t in 0..n {
        let mu = match variant {
            Recursion::Col => table.param / (3.0 * n as f64),
            _ => 1.0 / (n - t) as f64,
        };
        for &x in points {
            let f = if variant == Recursion::Col { col_f(x, mu) } else { sat_f(x, mu) };
            let lhs = table.eval_g(x, t + 1)?;
            let g = |y: [f64; 3]| table.eval_g(y, t);
            let g_f = g(f)?;
            let g_0ff = g([0.0, f[1], f[2]])?;
            let g_00f = g([0.0, 0.0, f[2]])?;
            let g_000 = g([0.0; 3])?;
            // A = a/f₂ or constant; B = b/f₃ or constant.
            let (a_num, a_div, b_num, b_div) = match variant {
                Recursion::Uc => (2.0, false, 2.0, false),
                Recursion::Guc => (1.0 + x[0], true, 1.0 + x[1], true),
                Recursion::GucLeadingOrder => (1.0 + f[0], true, 1.0 + f[1], true),
                Recursion::Col => (2.0, true, 3.0, true),
            };
            let degenerate = f[0] == 0.0 || (a_div && f[1] == 0.0) || (b_div && f[2] == 0.0);
            let rhs = if degenerate {
                limit_substitutions += 1;
                let d1 = table.divided_difference(1, f, t)?;
                let d2 = table.divided_difference(2, f, t)?;
                let d3 = table.divided_difference(3, f, t)?;
                let second = if a_div { a_num * d2 } else { a_num * (g_0ff - g_00f) };
                let third = if b_div { b_num * d3 } else { b_num * (g_00f - g_000) };
                d1 + second + third
            } else {
                let a = if a_div { a_num / f[1] } else { a_num };
                let b = if b_div { b_num / f[2] } else { b_num };
                let last = if variant == Recursion::Col { 0.0 } else { b * g_000 };
                g_f / f[0] + (a - 1.0 / f[0]) * g_0ff + (b - a) * g_00f - last
            };
            let r = (lhs - rhs).abs() / (1.0 + lhs.abs());
            per_height[t] = per_height[t].max(r);
        }
    }
    Ok(RecursionReport {
        variant,
        max_residual: per_height.iter().copied().fold(0.0, f64::max),
        per_height,
        evaluations: n * points.len(),
        limit_substitutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expectation::{dp_expect, dp_reference};

    #[test]
    fn exact_recursions_hold() {
        let pts = random_points(20, 7);
        for (variant, n, p) in [(Recursion::Uc, 8, 16.0), (Recursion::Guc, 8, 16.0), (Recursion::Col, 7, 4.0)] {
            let table = dp_reference::<f64>(n, p, variant.problem()).unwrap().to_table();
            let rep = check_recursion(&table, variant, &pts).unwrap();
            assert!(rep.max_residual < 1e-12, "{variant:?}: {}", rep.max_residual);
            assert_eq!(rep.evaluations, 20 * n);
            assert_eq!(rep.limit_substitutions, 0);
        }
    }

    #[test]
    fn leading_order_guc_misses_by_the_predicted_term() {
        let table = dp_expect(10, 20.0, Problem::SatGuc, 0.0).unwrap();
        let pts = random_points(10, 3);
        let rep = check_recursion(&table, Recursion::GucLeadingOrder, &pts).unwrap();
        assert!(rep.max_residual > 1e-6);
        for t in 0..10 {
            let mu = 1.0 / (10 - t) as f64;
            for &x in &pts {
                let f = sat_f(x, mu);
                let g = |y| table.eval_g(y, t).unwrap();
                let predicted = (f[0] - x[0]) / f[1] * (g([0.0, f[1], f[2]]) - g([0.0, 0.0, f[2]]))
                    + (f[1] - x[1]) / f[2] * (g([0.0, 0.0, f[2]]) - g([0.0; 3]));
                let exact = check_recursion_single(&table, Recursion::Guc, x, t);
                let approx = check_recursion_single(&table, Recursion::GucLeadingOrder, x, t);
                assert!((approx - exact - predicted).abs() < 1e-9 * (1.0 + exact.abs()));
            }
        }
    }

    fn check_recursion_single(table: &ExpectationTable, v: Recursion, x: [f64; 3], t: usize) -> f64 {
        let mu = 1.0 / (table.n - t) as f64;
        let f = sat_f(x, mu);
        let g = |y| table.eval_g(y, t).unwrap();
        let (a, b) = match v {
            Recursion::Guc => ((1.0 + x[0]) / f[1], (1.0 + x[1]) / f[2]),
            _ => ((1.0 + f[0]) / f[1], (1.0 + f[1]) / f[2]),
        };
        g(f) / f[0] + (a - 1.0 / f[0]) * g([0.0, f[1], f[2]]) + (b - a) * g([0.0, 0.0, f[2]]) - b * g([0.0; 3])
    }

    #[test]
    fn zero_coordinate_uses_the_limit() {
        let table = dp_reference::<f64>(6, 3.0, Problem::Col).unwrap().to_table();
        let rep = check_recursion(&table, Recursion::Col, &[[0.0, 0.5, 0.7], [0.3, 0.0, 0.0]]).unwrap();
        assert!(rep.limit_substitutions > 0);
        assert!(rep.max_residual < 1e-12);
    }

    #[test]
    fn wrong_table_is_rejected() {
        let table = dp_reference::<f64>(4, 4.0, Problem::SatUc).unwrap().to_table();
        assert!(check_recursion(&table, Recursion::Col, &[[0.5; 3]]).is_err());
    }

    #[test]
    fn points_in_range() {
        for p in random_points(100, 1) {
            assert!(p.iter().all(|&v| v > 0.1 && v <= 1.0));
        }
    }
}
