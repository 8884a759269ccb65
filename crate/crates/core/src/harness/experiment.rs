//! Monte Carlo experiment runner and the tidy CSV report.
//!
//! Every cell `(n, param)` runs `samples` independent instances. Runs execute
//! in parallel but are reduced in run order, so the report does not depend on
//! the thread count.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, ProblemKind};
use super::seed::{derive_seed, Stream};
use super::{HarnessError, VERSION};
use crate::asymptotics::{omega_c, omega_col, omega_guc, omega_s};
use crate::expectation::{dp_expect_with, DpOptions};
use crate::instances::{gen_gnp, gen_ksat};
use crate::solver::{dpll_col, dpll_sat, Heuristic, Mode, TreeStats};

/// Header comment identifying the CSV layout.
pub const CSV_SCHEMA: &str = "# dpllgf report schema 1";
pub const CSV_COLUMNS: &str =
    "cell,problem,heuristic,mode,n,param,quantity,height,source,value,stderr,seed,version,config_hash,note";

/// One solver run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub cell: usize,
    pub run: u64,
    /// Solver seed; the instance seed is derived from the same triple on the
    /// instance stream.
    pub seed: u64,
    pub stats: TreeStats,
    pub wall_time: Duration,
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub cell: usize,
    pub n: usize,
    pub param: f64,
    pub quantity: String,
    pub height: Option<usize>,
    /// `mc`, `dp` or `asymptotic`.
    pub source: &'static str,
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentSummary {
    pub cells: usize,
    pub rows: usize,
    pub failed_cells: Vec<usize>,
}

fn clause_count(alpha: f64, n: usize) -> usize {
    (alpha * n as f64).round() as usize
}

/// Generates and solves run `run` of cell `cell`.
pub fn run_once(config: &ExperimentConfig, cell: usize, n: usize, param: f64, run: u64) -> Result<RunRecord, String> {
    let inst_seed = derive_seed(config.seed, cell as u64, run, Stream::Instance);
    let seed = derive_seed(config.seed, cell as u64, run, Stream::Solver);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let stats = match config.problem {
        ProblemKind::Sat => {
            let inst =
                gen_ksat(n, clause_count(param, n), config.k, inst_seed, config.distinct).map_err(|e| e.to_string())?;
            dpll_sat(&inst, config.heuristic, config.mode, &mut rng)
        }
        ProblemKind::Col => {
            let g = gen_gnp(n, param, inst_seed).map_err(|e| e.to_string())?;
            dpll_col(&g, config.mode, &mut rng).1
        }
    };
    Ok(RunRecord { cell, run, seed, stats, wall_time: start.elapsed() })
}

fn mean_stderr(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, Some((var / n).sqrt()))
}

/// All rows of one cell: Monte Carlo, exact expectation (when in range) and
/// growth rates.
pub fn run_cell(config: &ExperimentConfig, cell: usize, n: usize, param: f64) -> Vec<ReportRow> {
    let row = |quantity: &str,
               height: Option<usize>,
               source: &'static str,
               value: Option<f64>,
               stderr: Option<f64>,
               note: String| {
        ReportRow { cell, n, param, quantity: quantity.to_string(), height, source, value, stderr, note }
    };
    let m_note = match config.problem {
        ProblemKind::Sat => format!("m={}", clause_count(param, n)),
        ProblemKind::Col => String::new(),
    };
    let mut rows = Vec::new();

    let runs: Result<Vec<RunRecord>, String> =
        (0..config.samples as u64).into_par_iter().map(|r| run_once(config, cell, n, param, r)).collect();
    match runs {
        Ok(runs) => {
            let column = |f: &dyn Fn(&TreeStats) -> f64| runs.iter().map(|r| f(&r.stats)).collect::<Vec<f64>>();
            let totals: [(&str, Box<dyn Fn(&TreeStats) -> f64>); 4] = [
                ("total_leaves", Box::new(|s| s.total_leaves() as f64)),
                ("solution_leaves", Box::new(|s| s.total_solution_leaves() as f64)),
                ("contradiction_leaves", Box::new(|s| s.total_contradiction_leaves() as f64)),
                ("nodes", Box::new(|s| s.nodes() as f64)),
            ];
            for (name, f) in &totals {
                let (m, se) = mean_stderr(&column(f.as_ref()));
                rows.push(row(name, None, "mc", Some(m), se, m_note.clone()));
            }
            for (name, pick) in [("solution_leaves", 0usize), ("contradiction_leaves", 1)] {
                for h in 0..=n {
                    let xs = column(&|s: &TreeStats| {
                        let v = if pick == 0 { &s.solution_leaves } else { &s.contradiction_leaves };
                        v.get(h).copied().unwrap_or(0) as f64
                    });
                    let (m, se) = mean_stderr(&xs);
                    rows.push(row(name, Some(h), "mc", Some(m), se, m_note.clone()));
                }
            }
        }
        Err(e) => rows.push(row("FAILED", None, "mc", None, None, e)),
    }

    if n <= config.dp_max_n && (config.problem == ProblemKind::Col || config.k == 3) {
        let dp_param = match config.problem {
            ProblemKind::Sat => clause_count(param, n) as f64,
            ProblemKind::Col => param,
        };
        let opts = DpOptions { prune: config.prune, keep_states: false, ..DpOptions::default() };
        let mut note = m_note.clone();
        if config.mode == Mode::Decide {
            note = [note.as_str(), "counting-tree expectation"]
                .iter()
                .filter(|s| !s.is_empty())
                .copied()
                .collect::<Vec<_>>()
                .join(";");
        }
        match dp_expect_with(n, dp_param, config.dp_problem(), &opts) {
            Ok(t) => {
                rows.push(row("total_leaves", None, "dp", Some(t.total_leaves()), None, note.clone()));
                rows.push(row("solution_leaves", None, "dp", Some(t.total_solution_leaves()), None, note.clone()));
                rows.push(row(
                    "contradiction_leaves",
                    None,
                    "dp",
                    Some(t.total_contradiction_leaves()),
                    None,
                    note.clone(),
                ));
                let (rate, units) = match config.problem {
                    ProblemKind::Sat => (t.total_leaves().log2() / n as f64, "bits"),
                    ProblemKind::Col => (t.total_leaves().ln() / n as f64, "nats"),
                };
                rows.push(row("log_total_leaves_per_n", None, "dp", Some(rate), None, units.to_string()));
                if config.problem == ProblemKind::Sat {
                    rows.push(row("expected_solutions", None, "dp", Some(t.s0(n)), None, note.clone()));
                }
                rows.push(row(
                    "discarded_mass",
                    None,
                    "dp",
                    Some(t.total_discarded() + t.total_pruned()),
                    None,
                    note.clone(),
                ));
                for h in 0..=n {
                    rows.push(row("solution_leaves", Some(h), "dp", Some(t.solution[h]), None, note.clone()));
                }
                for h in 0..=n {
                    rows.push(row("contradiction_leaves", Some(h), "dp", Some(t.contradiction[h]), None, note.clone()));
                }
            }
            Err(e) => rows.push(row("FAILED", None, "dp", None, None, e.to_string())),
        }
    }

    let k = config.k as u32;
    match config.problem {
        ProblemKind::Sat if k >= 3 => {
            rows.push(row("omega_s", None, "asymptotic", Some(omega_s(param, k)), None, "bits".into()));
            match config.heuristic {
                Heuristic::Uc => {
                    rows.push(row("omega_c", None, "asymptotic", Some(omega_c(param, k).value), None, "bits".into()));
                }
                Heuristic::Guc if k == 3 && param > 0.0 => match omega_guc(param) {
                    Ok(r) => rows.push(row("omega_g", None, "asymptotic", Some(r.value), None, "bits".into())),
                    Err(e) => rows.push(row("FAILED", None, "asymptotic", None, None, e.to_string())),
                },
                Heuristic::Guc => {}
            }
        }
        ProblemKind::Sat => {}
        ProblemKind::Col => match omega_col(param) {
            Ok(r) => rows.push(row("omega_h", None, "asymptotic", Some(r.value), None, "nats".into())),
            Err(e) => rows.push(row("FAILED", None, "asymptotic", None, None, e.to_string())),
        },
    }
    rows
}

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs every cell in `(n, param)` order and writes the report, flushing
/// after each cell. Failed cells are marked with `FAILED` rows.
pub fn run_experiment<W: Write>(config: &ExperimentConfig, out: &mut W) -> Result<ExperimentSummary, HarnessError> {
    config.validate()?;
    let hash = config.hash();
    let heuristic = match config.problem {
        ProblemKind::Sat => config.heuristic.to_string(),
        ProblemKind::Col => "guc".to_string(),
    };
    writeln!(out, "{CSV_SCHEMA}")?;
    writeln!(out, "{CSV_COLUMNS}")?;
    let mut summary = ExperimentSummary { cells: 0, rows: 0, failed_cells: Vec::new() };
    let cells = config.ns.iter().flat_map(|&n| config.params.iter().map(move |&p| (n, p)));
    for (cell, (n, param)) in cells.enumerate() {
        let rows = run_cell(config, cell, n, param);
        if rows.iter().any(|r| r.quantity == "FAILED") {
            summary.failed_cells.push(cell);
        }
        for r in &rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.cell,
                config.problem,
                heuristic,
                config.mode,
                r.n,
                num(Some(r.param)),
                r.quantity,
                r.height.map(|h| h.to_string()).unwrap_or_default(),
                r.source,
                num(r.value),
                num(r.stderr),
                config.seed,
                VERSION,
                hash,
                escape(&r.note)
            )?;
        }
        out.flush()?;
        summary.cells += 1;
        summary.rows += rows.len();
    }
    Ok(summary)
}
