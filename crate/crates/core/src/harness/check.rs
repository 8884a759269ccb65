//! The invariant suite run by the `check` subcommand.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, ProblemKind};
use super::experiment::run_once;
use crate::asymptotics::{
    alpha_star, alpha_u, alpha_u_guc, big_omega, c_u_col, gamma_uc, omega_c, omega_col, omega_guc, omega_s, y3_solve,
};
use crate::expectation::{
    check_recursion, dp_expect, dp_reference, kernel_col, kernel_split_guc, kernel_split_uc, kernel_unit_prop,
    random_points, ClauseVector, ExpectationTable, Problem, Recursion, Weight,
};
use crate::instances::{
    emit_dimacs, emit_edges, gen_gnp, gen_ksat, parse_dimacs, parse_edges, reduce_col, reduce_sat, CnfInstance,
};
use crate::solver::{brute_force_col_count, brute_force_count, dpll_col, dpll_count_sat, ColAnswer, Heuristic, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckOptions {
    /// Fewer instances and Monte Carlo runs.
    pub quick: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    /// One `PASS`/`FAIL` line per item.
    pub fn lines(&self) -> Vec<String> {
        self.items
            .iter()
            .map(|i| format!("{} {} ({:.1}s): {}", if i.passed { "PASS" } else { "FAIL" }, i.name, i.seconds, i.detail))
            .collect()
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every check, in a fixed order.
pub fn run_check(opts: CheckOptions) -> CheckReport {
    run_check_with(opts, |_| {})
}

/// As [`run_check`], calling `progress` after each item.
pub fn run_check_with(opts: CheckOptions, mut progress: impl FnMut(&CheckItem)) -> CheckReport {
    let checks: Vec<(&'static str, Box<dyn Fn(CheckOptions) -> Outcome>)> = vec![
        ("counting-oracle-sat", Box::new(oracle_sat)),
        ("counting-oracle-col", Box::new(oracle_col)),
        ("kernel-mass-identities", Box::new(|_| kernel_identities())),
        ("recursion-residuals", Box::new(|_| recursion_residuals())),
        ("expected-solution-identity", Box::new(|_| s0_identity())),
        ("dense-matches-reference", Box::new(|_| dense_matches_reference())),
        ("dp-state-bounds", Box::new(|_| dp_state_bounds())),
        ("dp-matches-monte-carlo", Box::new(dp_matches_mc)),
        ("generator-invariants", Box::new(generator_invariants)),
        ("generator-uniformity", Box::new(|_| generator_uniformity())),
        ("reduction-monotone", Box::new(|_| reduction_monotone())),
        ("io-round-trip", Box::new(|_| io_round_trip())),
        ("growth-rate-invariants", Box::new(|_| growth_rate_invariants())),
        ("integrator-self-convergence", Box::new(|_| integrator_self_convergence())),
        ("threshold-roots", Box::new(|_| threshold_roots())),
    ];
    let mut report = CheckReport::default();
    for (name, f) in checks {
        let start = Instant::now();
        let outcome = f(opts);
        let item = CheckItem {
            name,
            passed: outcome.is_ok(),
            detail: outcome.unwrap_or_else(|e| e),
            seconds: start.elapsed().as_secs_f64(),
        };
        progress(&item);
        report.items.push(item);
    }
    report
}

/// #DPLL counts against brute force, for both heuristics and two seeds;
/// also the leaf identity and the solution-leaf weighting.
pub fn oracle_sat(opts: CheckOptions) -> Outcome {
    let count = if opts.quick { 48 } else { 200 };
    let alphas = [1.0, 2.0, 4.0, 8.0];
    (0..count as u64).into_par_iter().try_for_each(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
        let n = rng.gen_range(3..=12);
        let alpha = alphas[i as usize % 4];
        let m = (alpha * n as f64).round() as usize;
        let inst = gen_ksat(n, m, 3, rng.gen(), false).map_err(|e| e.to_string())?;
        let exact = brute_force_count(&inst).map_err(|e| e.to_string())?;
        for (h, seed) in [(Heuristic::Uc, rng.gen()), (Heuristic::Guc, rng.gen()), (Heuristic::Uc, rng.gen())] {
            let (c, stats) = dpll_count_sat(&inst, h, seed);
            ensure(c == exact, || format!("instance {i} (N={n}, M={m}, {h}): count {c} vs brute force {exact}"))?;
            ensure(stats.weighted_solution_count() == exact, || format!("instance {i}: leaf weighting"))?;
            stats.check_leaf_identity().map_err(|e| format!("instance {i}: {e}"))?;
        }
        Ok::<(), String>(())
    })?;
    Ok(format!("{count} instances, N <= 12, alpha in {{1,2,4,8}}, UC and GUC"))
}

/// 3-COL counts against brute force.
pub fn oracle_col(opts: CheckOptions) -> Outcome {
    let count = if opts.quick { 48 } else { 200 };
    let cs = [2.0, 5.0, 8.0];
    (0..count as u64).into_par_iter().try_for_each(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + i);
        let n = rng.gen_range(8..=10);
        let c = cs[i as usize % 3];
        let g = gen_gnp(n, c, rng.gen()).map_err(|e| e.to_string())?;
        let exact = brute_force_col_count(&g).map_err(|e| e.to_string())?;
        let (answer, stats) = dpll_col(&g, Mode::Count, &mut rng);
        ensure(answer == ColAnswer::Count(exact.clone()), || {
            format!("graph {i} (N={n}, c={c}): {answer:?} vs {exact}")
        })?;
        stats.check_leaf_identity().map_err(|e| format!("graph {i}: {e}"))?;
        Ok::<(), String>(())
    })?;
    Ok(format!("{count} graphs, N <= 10, c in {{2,5,8}}"))
}

fn row_mass<W: Weight>(targets: &[(ClauseVector, W)]) -> W {
    targets.iter().fold(W::zero(), |acc, (_, w)| acc + w.clone())
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Reachable `(T, C)` pairs of a process, from the floating-point engine.
fn reachable(n: usize, param: f64, problem: Problem) -> Result<Vec<(usize, ClauseVector)>, String> {
    let table = dp_reference::<f64>(n, param, problem).map_err(|e| e.to_string())?;
    Ok(table
        .levels
        .iter()
        .enumerate()
        .take(n)
        .flat_map(|(t, level)| level.iter().filter(|(_, w)| **w > 0.0).map(move |(c, _)| (t, *c)))
        .collect())
}

/// Exact kernel masses over every reachable state: SAT at N=10, M=20 (both
/// heuristics' state spaces) and COL at N=8, c=4.
pub fn kernel_identities() -> Outcome {
    let n = 10;
    let mut states = reachable(n, 20.0, Problem::SatUc)?;
    states.extend(reachable(n, 20.0, Problem::SatGuc)?);
    states.sort();
    states.dedup();
    states.retain(|(_, c)| !c.is_empty());
    let two = BigRational::ratio(2, 1);
    states.par_iter().try_for_each(|&(t, c)| {
        if c.c1 >= 1 {
            let mu = BigRational::ratio(1, (n - t) as u64);
            let half = BigRational::one() - mu / BigRational::ratio(2, 1);
            let row = kernel_unit_prop::<BigRational>(c, t, n).map_err(|e| e.to_string())?;
            ensure(row_mass(&row.targets) == pow(&half, c.c1 - 1), || format!("unit propagation at {c}, T={t}"))?;
            ensure(row_mass(&row.targets) + row.contradiction == BigRational::one(), || {
                format!("unit row total at {c}")
            })?;
            ensure(row.targets.iter().all(|(d, _)| d.c3 <= c.c3), || format!("C3 grows at {c}"))?;
        } else {
            let uc = kernel_split_uc::<BigRational>(c, t, n).map_err(|e| e.to_string())?;
            let guc = kernel_split_guc::<BigRational>(c, t, n).map_err(|e| e.to_string())?;
            ensure(row_mass(&uc.targets) == two, || format!("UC split at {c}, T={t}"))?;
            ensure(row_mass(&guc.targets) == two, || format!("GUC split at {c}, T={t}"))?;
            ensure(uc.targets.iter().chain(&guc.targets).all(|(d, _)| d.c3 <= c.c3), || format!("C3 grows at {c}"))?;
        }
        Ok::<(), String>(())
    })?;
    let (nc, deg) = (8, 4.0);
    let col = reachable(nc, deg, Problem::Col)?;
    let keep = BigRational::one() - BigRational::ratio(4, 3 * nc as u64);
    col.par_iter().try_for_each(|&(t, c)| {
        let row = kernel_col::<BigRational>(c, t, nc, deg).map_err(|e| e.to_string())?;
        let (j, ones) = if c.c1 >= 1 {
            (1, c.c1 - 1)
        } else if c.c2 >= 1 {
            (2, 0)
        } else {
            (3, 0)
        };
        let expect = BigRational::ratio(j, 1) * pow(&keep, ones);
        ensure(row_mass(&row.targets) == expect, || format!("COL row at {c}, T={t}"))
    })?;
    Ok(format!("{} SAT and {} COL reachable states, exact rational arithmetic", states.len(), col.len()))
}

/// Generating-function recursions on unpruned tables.
pub fn recursion_residuals() -> Outcome {
    let points = random_points(24, 2024);
    let mut worst = Vec::new();
    for (variant, n, param) in [(Recursion::Uc, 10, 20.0), (Recursion::Guc, 10, 20.0), (Recursion::Col, 8, 4.0)] {
        let table = dp_expect(n, param, variant.problem(), 0.0).map_err(|e| e.to_string())?;
        let r = check_recursion(&table, variant, &points).map_err(|e| e.to_string())?;
        ensure(r.max_residual < 1e-9, || format!("{variant:?}: residual {:.3e}", r.max_residual))?;
        worst.push(format!("{variant:?} {:.1e}", r.max_residual));
    }
    Ok(format!("max residuals: {}", worst.join(", ")))
}

/// `S₀(N) = 2^N (7/8)^M` for both heuristics.
pub fn s0_identity() -> Outcome {
    let mut worst = 0.0f64;
    for n in [8usize, 10, 15] {
        for m in [n / 2, n, 2 * n, 4 * n] {
            let exact = 2f64.powi(n as i32) * (7.0f64 / 8.0).powi(m as i32);
            for problem in [Problem::SatUc, Problem::SatGuc] {
                let t = dp_expect(n, m as f64, problem, 0.0).map_err(|e| e.to_string())?;
                let rel = (t.s0(n) - exact).abs() / exact;
                ensure(rel < 1e-9, || format!("{problem} N={n} M={m}: {} vs {exact}", t.s0(n)))?;
                worst = worst.max(rel);
            }
        }
    }
    Ok(format!("N in {{8,10,15}}, M in {{N/2,N,2N,4N}}, worst relative error {worst:.1e}"))
}

fn compare_tables(a: &ExpectationTable, b: &ExpectationTable, tol: f64) -> Result<(), String> {
    for t in 0..=a.n {
        for (x, y, what) in [(a.solution[t], b.solution[t], "L_S"), (a.contradiction[t], b.contradiction[t], "L_C")] {
            let scale = a.total_leaves().max(1.0);
            ensure((x - y).abs() <= tol * (x.abs().max(y.abs()) + scale), || format!("{what}({t}): {x} vs {y}"))?;
        }
    }
    Ok(())
}

/// Dense engine against the state-by-state engine.
pub fn dense_matches_reference() -> Outcome {
    for (problem, n, param) in [(Problem::SatUc, 10, 20.0), (Problem::SatGuc, 10, 20.0), (Problem::Col, 8, 4.0)] {
        let dense = dp_expect(n, param, problem, 0.0).map_err(|e| e.to_string())?;
        let reference = dp_reference::<f64>(n, param, problem).map_err(|e| e.to_string())?.to_table();
        compare_tables(&dense, &reference, 1e-12).map_err(|e| format!("{problem}: {e}"))?;
    }
    Ok("SAT-UC, SAT-GUC (N=10, M=20) and COL (N=8, c=4) agree to 1e-12".into())
}

/// Nonnegative values, `C₃ ≤ M`, and per-height COL conservation.
pub fn dp_state_bounds() -> Outcome {
    for problem in [Problem::SatUc, Problem::SatGuc] {
        let t = dp_expect(12, 30.0, problem, 0.0).map_err(|e| e.to_string())?;
        for h in 0..=12 {
            for &(c, v) in t.states(h).map_err(|e| e.to_string())? {
                ensure(v >= 0.0 && c.c3 <= 30 && c.c2 <= 30, || format!("{problem}: state {c} at T={h} has {v}"))?;
            }
        }
    }
    let t = dp_expect(10, 5.0, Problem::Col, 0.0).map_err(|e| e.to_string())?;
    for h in 0..=10 {
        for &(c, v) in t.states(h).map_err(|e| e.to_string())? {
            ensure(v >= 0.0 && c.total() as usize == 10 - h, || format!("COL: state {c} at T={h}"))?;
        }
    }
    Ok("SAT N=12, M=30; COL N=10, c=5".into())
}

/// Monte Carlo means of total leaves, L_S and L_C within 3 standard errors
/// of the exact expectation; per-height profiles within 4.
pub fn dp_matches_mc(opts: CheckOptions) -> Outcome {
    let samples = if opts.quick { 20_000 } else { 100_000 };
    let mut notes = Vec::new();
    for (h, alpha, seed) in [(Heuristic::Uc, 2.0, 31), (Heuristic::Guc, 4.0, 32)] {
        let n = 12;
        let mut cfg = ExperimentConfig::new(ProblemKind::Sat, vec![n], vec![alpha], seed);
        cfg.heuristic = h;
        cfg.samples = samples;
        let runs: Vec<_> =
            (0..samples as u64).into_par_iter().map(|r| run_once(&cfg, 0, n, alpha, r)).collect::<Result<_, _>>()?;
        let table = dp_expect(n, (alpha * n as f64).round(), cfg.dp_problem(), 0.0).map_err(|e| e.to_string())?;
        let stat = |f: &dyn Fn(&crate::solver::TreeStats) -> f64| {
            let xs: Vec<f64> = runs.iter().map(|r| f(&r.stats)).collect();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
            (mean, (var / xs.len() as f64).sqrt())
        };
        let totals: [(&str, f64, Box<dyn Fn(&crate::solver::TreeStats) -> f64>); 3] = [
            ("total", table.total_leaves(), Box::new(|s| s.total_leaves() as f64)),
            ("L_S", table.total_solution_leaves(), Box::new(|s| s.total_solution_leaves() as f64)),
            ("L_C", table.total_contradiction_leaves(), Box::new(|s| s.total_contradiction_leaves() as f64)),
        ];
        for (name, exact, f) in &totals {
            let (mean, se) = stat(f.as_ref());
            let z = (mean - exact) / se;
            ensure(z.abs() < 3.0, || format!("{h} {name}: MC {mean} ± {se} vs exact {exact} (z = {z:.2})"))?;
            notes.push(format!("{h} {name} z={z:.2}"));
        }
        for height in 0..=n {
            for (exact, pick) in [(table.solution[height], 0), (table.contradiction[height], 1)] {
                let (mean, se) = stat(&|s: &crate::solver::TreeStats| {
                    let v = if pick == 0 { &s.solution_leaves } else { &s.contradiction_leaves };
                    v.get(height).copied().unwrap_or(0) as f64
                });
                let scale = se.max((exact / samples as f64).sqrt());
                ensure((mean - exact).abs() <= 4.0 * scale + 1e-12, || {
                    format!("{h} height {height}: MC {mean} ± {se} vs exact {exact}")
                })?;
            }
        }
    }
    Ok(format!("N=12, {samples} runs: {}", notes.join(", ")))
}

fn clause_ok(inst: &CnfInstance) -> bool {
    inst.clauses().iter().all(|c| {
        let mut vars: Vec<usize> = c.iter().map(|l| l.var()).collect();
        let sorted = vars.windows(2).all(|w| w[0] < w[1]);
        vars.dedup();
        sorted && vars.len() == c.len() && vars.iter().all(|&v| v >= 1 && v <= inst.num_vars())
    })
}

/// Distinct variables per clause, canonical order, determinism.
pub fn generator_invariants(opts: CheckOptions) -> Outcome {
    let count = if opts.quick { 50 } else { 500 };
    for seed in 0..count {
        let a = gen_ksat(20, 60, 3, seed, seed % 2 == 0).map_err(|e| e.to_string())?;
        ensure(clause_ok(&a), || format!("seed {seed}: malformed clause"))?;
        ensure(a == gen_ksat(20, 60, 3, seed, seed % 2 == 0).map_err(|e| e.to_string())?, || {
            format!("seed {seed}: not deterministic")
        })?;
        let g = gen_gnp(20, 4.0, seed).map_err(|e| e.to_string())?;
        ensure(g == gen_gnp(20, 4.0, seed).map_err(|e| e.to_string())?, || {
            format!("seed {seed}: graph not deterministic")
        })?;
    }
    ensure(gen_gnp(10, 0.0, 1).map_err(|e| e.to_string())?.num_edges() == 0, || "c = 0 graph has edges".into())?;
    ensure(gen_gnp(10, 10.0, 1).map_err(|e| e.to_string())?.num_edges() == 45, || {
        "c = N graph is not complete".into()
    })?;
    Ok(format!("{count} formulas and graphs"))
}

/// Upper 0.1% point of the chi-square law with 31 degrees of freedom.
const CHI2_31_999: f64 = 61.098_306;

/// Chi-square uniformity of 10⁵ clauses over the 32 legal clauses at N=4.
pub fn generator_uniformity() -> Outcome {
    let inst = gen_ksat(4, 100_000, 3, 77, false).map_err(|e| e.to_string())?;
    let mut counts = std::collections::BTreeMap::new();
    for c in inst.clauses() {
        *counts.entry(c.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>()).or_insert(0u64) += 1;
    }
    ensure(counts.len() == 32, || format!("{} distinct clauses, expected 32", counts.len()))?;
    let e = 100_000.0 / 32.0;
    let chi2: f64 = counts.values().map(|&o| (o as f64 - e).powi(2) / e).sum();
    ensure(chi2 < CHI2_31_999, || format!("chi-square {chi2:.2} exceeds {CHI2_31_999}"))?;
    Ok(format!("chi-square {chi2:.2} < {CHI2_31_999} (31 dof, p = 0.001)"))
}

/// Extending an assignment never increases C₃ or C₁+C₂+C₃; each coloured
/// vertex removes exactly one uncoloured vertex.
pub fn reduction_monotone() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..100 {
        let inst = gen_ksat(15, 45, 3, rng.gen(), false).map_err(|e| e.to_string())?;
        let mut order: Vec<usize> = (1..=15).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let mut assignment = Vec::new();
        let mut prev = reduce_sat(&inst, &assignment).map_err(|e| e.to_string())?.clause_vector();
        ensure(prev == ClauseVector::new(0, 0, 45), || "initial residual is not (0,0,M)".into())?;
        for &v in &order {
            assignment.push((v, rng.gen()));
            let cur = reduce_sat(&inst, &assignment).map_err(|e| e.to_string())?.clause_vector();
            ensure(cur.c3 <= prev.c3 && cur.total() <= prev.total(), || format!("trial {trial}: {prev} -> {cur}"))?;
            prev = cur;
        }
        let g = gen_gnp(12, 4.0, rng.gen()).map_err(|e| e.to_string())?;
        let mut coloring = Vec::new();
        let mut before = 12;
        for v in 0..12 {
            coloring.push((v, rng.gen_range(0..3u8)));
            let r = reduce_col(&g, &coloring).map_err(|e| e.to_string())?;
            let after: usize = r.counts.iter().sum();
            ensure(after + 1 == before, || format!("trial {trial}: {before} -> {after} uncoloured vertices"))?;
            before = after;
        }
    }
    Ok("100 random assignment sequences".into())
}

/// DIMACS and edge-list emit∘parse identity.
pub fn io_round_trip() -> Outcome {
    for seed in 0..20 {
        let inst = gen_ksat(30, 100, 3, seed, false).map_err(|e| e.to_string())?;
        let text = emit_dimacs(&inst);
        let back = parse_dimacs(&text).map_err(|e| e.to_string())?;
        ensure(back == inst && emit_dimacs(&back) == text, || format!("seed {seed}: DIMACS round trip"))?;
        let g = gen_gnp(30, 3.0, seed).map_err(|e| e.to_string())?;
        let text = emit_edges(&g);
        let back = parse_edges(&text).map_err(|e| e.to_string())?;
        ensure(back == g && emit_edges(&back) == text, || format!("seed {seed}: edge-list round trip"))?;
    }
    Ok("20 formulas, 20 graphs".into())
}

/// `ω_C ≥ ω_S`, midpoint convexity of ω_C in α, the Ω/γ identity, and the
/// boundary maximum below α*.
pub fn growth_rate_invariants() -> Outcome {
    for k in 3..=5u32 {
        let alphas: Vec<f64> = (0..=60).map(|i| i as f64 * 0.5).collect();
        let vals: Vec<f64> = alphas.iter().map(|&a| omega_c(a, k).value).collect();
        for (i, &a) in alphas.iter().enumerate() {
            ensure(vals[i] >= omega_s(a, k) - 1e-12, || format!("ω_C < ω_S at α={a}, k={k}"))?;
            if i > 0 && i + 1 < alphas.len() {
                let mid = 0.5 * (vals[i - 1] + vals[i + 1]);
                ensure(vals[i] <= mid + 1e-10, || format!("ω_C not convex at α={a}, k={k}"))?;
            }
        }
    }
    for i in 0..=100 {
        let t = i as f64 / 100.0;
        for alpha in [0.5, 4.0, 10.0, 40.0] {
            let d = big_omega(t, alpha, 3) - (t + alpha * gamma_uc(1.0, 1.0, t).log2());
            ensure(d.abs() < 1e-12, || format!("Ω/γ identity fails at t={t}, α={alpha}"))?;
        }
    }
    for alpha in [0.5, 1.0, 2.0, 3.0, 4.0, 4.5] {
        let r = omega_c(alpha, 3);
        ensure(r.boundary && r.argmax == 1.0 && (r.value - omega_s(alpha, 3)).abs() < 1e-10, || {
            format!("α={alpha}: maximum at t={} (boundary {})", r.argmax, r.boundary)
        })?;
    }
    Ok("k in 3..=5 on α in [0, 30]".into())
}

/// ODE state at fixed y₂ under halved tolerance.
pub fn integrator_self_convergence() -> Outcome {
    let a = y3_solve(1e-6, 1e-12).map_err(|e| e.to_string())?;
    let b = y3_solve(1e-6, 5e-13).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for y2 in [0.95, 0.9, 0.8, 0.76] {
        let (sa, sb) = (a.state_at(a.u_of_y2(y2)), b.state_at(b.u_of_y2(y2)));
        for i in 1..3 {
            worst = worst.max((sa[i] - sb[i]).abs());
        }
    }
    ensure(worst < 1e-9, || format!("change {worst:.2e} under tolerance halving"))?;
    Ok(format!("largest change {worst:.1e}"))
}

/// Thresholds satisfy their defining equations.
pub fn threshold_roots() -> Outcome {
    let l = (8f64 / 7.0).log2();
    let au = alpha_u(3).map_err(|e| e.to_string())?;
    let r1 = omega_c(au, 3).value - (2.0 - au * l);
    let ag = alpha_u_guc().map_err(|e| e.to_string())?;
    let r2 = omega_guc(ag).map_err(|e| e.to_string())?.value + ag * l - 2.0;
    let cu = c_u_col().map_err(|e| e.to_string())?;
    let r3 = omega_col(cu).map_err(|e| e.to_string())?.value + cu / 6.0 - 2.0 * 3f64.ln();
    for (name, r) in [("α_u", r1), ("α_u^g", r2), ("c_u^h", r3)] {
        ensure(r.abs() < 1e-6, || format!("{name}: residual {r:.2e}"))?;
    }
    let star = alpha_star(3).map_err(|e| e.to_string())?;
    let below = omega_c(star - 1e-3, 3);
    let above = omega_c(star + 1e-3, 3);
    ensure(below.value - omega_s(star - 1e-3, 3) < 1e-10, || "ω_C > ω_S just below α*".into())?;
    ensure(above.value > omega_s(star + 1e-3, 3), || "ω_C = ω_S just above α*".into())?;
    Ok(format!("α*={star:.6}, α_u={au:.6}, α_u^g={ag:.6}, c_u^h={cu:.6}"))
}
