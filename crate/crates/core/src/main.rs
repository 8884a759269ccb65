use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dpllgf::asymptotics::{
    self, alpha_star, alpha_u, alpha_u_guc, c_u_col, omega_c, omega_col, omega_guc, omega_s, GrowthModel,
};
use dpllgf::expectation::{dp_expect_with, DpOptions, Problem, DEFAULT_PRUNE};
use dpllgf::harness::{run_check_with, run_experiment, CheckOptions, ExperimentConfig};
use dpllgf::instances::{emit_dimacs, emit_edges, gen_gnp, gen_ksat, parse_dimacs, parse_edges};
use dpllgf::solver::{dpll_col, dpll_sat, ColAnswer, RunSummary};
use dpllgf::{Heuristic, Mode};

#[derive(Parser)]
#[command(name = "dpllgf", version, about = "DPLL search-tree statistics for random 3-SAT and 3-COL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random k-SAT formula in DIMACS format.
    GenSat(GenSat),
    /// Write a G(N, c/N) random graph as an edge list.
    GenGraph(GenGraph),
    /// Run one instrumented solve and print a JSON summary.
    Solve(Solve),
    /// Exact expected tree statistics for finite N.
    Dp(Dp),
    /// Growth rates and thresholds.
    Omega(Omega),
    /// Run a Monte Carlo experiment described by a config file.
    Experiment(Experiment),
    /// Run the invariant suite; exits nonzero on any failure.
    Check(Check),
}

#[derive(Args)]
struct SatSize {
    #[arg(long)]
    n: usize,
    /// Number of clauses.
    #[arg(long, conflicts_with = "alpha")]
    m: Option<usize>,
    /// Clause-to-variable ratio; M = round(αN).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 3)]
    k: usize,
}

impl SatSize {
    fn clauses(&self) -> Result<usize, String> {
        match (self.m, self.alpha) {
            (Some(m), _) => Ok(m),
            (None, Some(a)) if a.is_finite() && a >= 0.0 => Ok((a * self.n as f64).round() as usize),
            (None, Some(a)) => Err(format!("invalid --alpha {a}")),
            (None, None) => Err("one of --m or --alpha is required".into()),
        }
    }
}

#[derive(Args)]
struct GenSat {
    #[command(flatten)]
    size: SatSize,
    #[arg(long)]
    seed: u64,
    /// Reject repeated clauses.
    #[arg(long)]
    distinct: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenGraph {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sat,
    Col,
}

#[derive(Args)]
struct Solve {
    #[arg(long, value_enum)]
    problem: Kind,
    /// DIMACS or edge-list file; generated from --n/--m/--alpha/--c otherwise.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value = "uc")]
    heuristic: Heuristic,
    #[arg(long, default_value = "count")]
    mode: Mode,
    /// Seed of the solver's choices (and of the generated instance).
    #[arg(long)]
    seed: u64,
    /// Per-height statistics CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Dp {
    #[arg(long, value_enum)]
    problem: Kind,
    #[arg(long, default_value = "uc")]
    heuristic: Heuristic,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Relative pruning threshold in [0, 1e-12]; 0 keeps every state.
    #[arg(long, default_value_t = DEFAULT_PRUNE)]
    prune: f64,
    /// Per-height profile CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    UcSat,
    GucSat,
    Col,
}

#[derive(Args)]
struct Omega {
    #[arg(long, value_enum, default_value = "uc-sat")]
    model: Model,
    #[arg(long, default_value_t = 3)]
    k: u32,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Print the threshold constants instead.
    #[arg(long)]
    thresholds: bool,
    /// Write a growth table over `from:to:points` of α (SAT) or c (COL).
    #[arg(long, value_name = "FROM:TO:POINTS")]
    table: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Experiment {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `out` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `samples` from the config.
    #[arg(long)]
    samples: Option<usize>,
    /// Overrides `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct Check {
    /// Fewer instances and Monte Carlo runs.
    #[arg(long)]
    quick: bool,
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn gen_sat_cmd(a: GenSat) -> Result<(), String> {
    let m = a.size.clauses()?;
    if a.size.alpha.is_some() {
        eprintln!("M = {m}");
    }
    let inst = gen_ksat(a.size.n, m, a.size.k, a.seed, a.distinct).map_err(|e| e.to_string())?;
    write_output(a.out.as_deref(), &emit_dimacs(&inst))
}

fn gen_graph_cmd(a: GenGraph) -> Result<(), String> {
    let g = gen_gnp(a.n, a.c, a.seed).map_err(|e| e.to_string())?;
    write_output(a.out.as_deref(), &emit_edges(&g))
}

fn solve_cmd(a: Solve) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (summary, stats) = match a.problem {
        Kind::Sat => {
            let inst = match &a.input {
                Some(p) => parse_dimacs(&read(p)?).map_err(|e| e.to_string())?,
                None => {
                    let n = a.n.ok_or("--n is required without --input")?;
                    let size = SatSize { n, m: a.m, alpha: a.alpha, k: a.k };
                    gen_ksat(n, size.clauses()?, a.k, a.seed, false).map_err(|e| e.to_string())?
                }
            };
            let stats = dpll_sat(&inst, a.heuristic, a.mode, &mut rng);
            let result = match a.mode {
                Mode::Count => stats.weighted_solution_count().to_string(),
                Mode::Decide => (stats.total_solution_leaves() > 0).to_string(),
            };
            let s = RunSummary {
                problem: "sat".into(),
                n: inst.num_vars(),
                m: Some(inst.num_clauses()),
                c: None,
                heuristic: a.heuristic.to_string(),
                mode: a.mode.to_string(),
                seed: a.seed,
                result,
                total_leaves: stats.total_leaves(),
                nodes: stats.nodes(),
            };
            (s, stats)
        }
        Kind::Col => {
            let g = match &a.input {
                Some(p) => parse_edges(&read(p)?).map_err(|e| e.to_string())?,
                None => {
                    let n = a.n.ok_or("--n is required without --input")?;
                    gen_gnp(n, a.c.ok_or("--c is required without --input")?, a.seed).map_err(|e| e.to_string())?
                }
            };
            let (answer, stats) = dpll_col(&g, a.mode, &mut rng);
            let result = match answer {
                ColAnswer::Count(c) => c.to_string(),
                ColAnswer::Colorable(b) => b.to_string(),
            };
            let s = RunSummary {
                problem: "col".into(),
                n: g.num_vertices(),
                m: None,
                c: Some(g.average_degree()),
                heuristic: "guc".into(),
                mode: a.mode.to_string(),
                seed: a.seed,
                result,
                total_leaves: stats.total_leaves(),
                nodes: stats.nodes(),
            };
            (s, stats)
        }
    };
    println!("{}", summary.to_json());
    if let Some(p) = &a.out {
        write_output(Some(p), &stats.to_csv())?;
    }
    Ok(())
}

fn dp_cmd(a: Dp) -> Result<(), String> {
    let (problem, param) = match a.problem {
        Kind::Sat => {
            let size = SatSize { n: a.n, m: a.m, alpha: a.alpha, k: 3 };
            let p = if a.heuristic == Heuristic::Uc { Problem::SatUc } else { Problem::SatGuc };
            (p, size.clauses()? as f64)
        }
        Kind::Col => (Problem::Col, a.c.ok_or("--c is required for col")?),
    };
    let opts = DpOptions { prune: a.prune, keep_states: false, ..DpOptions::default() };
    let t = dp_expect_with(a.n, param, problem, &opts).map_err(|e| e.to_string())?;
    let total = t.total_leaves();
    println!("problem = {problem}");
    println!("n = {}", a.n);
    println!("{} = {param}", if problem.is_sat() { "m" } else { "c" });
    println!("expected_leaves = {total:.16e}");
    println!("expected_solution_leaves = {:.16e}", t.total_solution_leaves());
    println!("expected_contradiction_leaves = {:.16e}", t.total_contradiction_leaves());
    if problem.is_sat() {
        println!("expected_solutions = {:.16e}", t.s0(a.n));
        println!("log2_leaves_per_n = {:.16e}", total.log2() / a.n as f64);
    } else {
        println!("ln_leaves_per_n = {:.16e}", total.ln() / a.n as f64);
    }
    println!("discarded_mass = {:.3e}", t.total_discarded() + t.total_pruned());
    if let Some(p) = &a.out {
        write_output(Some(p), &t.profile_csv())?;
    }
    Ok(())
}

fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || format!("--table expects FROM:TO:POINTS, got '{s}'");
    if parts.len() != 3 {
        return Err(bad());
    }
    let from: f64 = parts[0].parse().map_err(|_| bad())?;
    let to: f64 = parts[1].parse().map_err(|_| bad())?;
    let points: usize = parts[2].parse().map_err(|_| bad())?;
    if points < 2 || !(to > from) {
        return Err(bad());
    }
    Ok((0..points).map(|i| from + (to - from) * i as f64 / (points - 1) as f64).collect())
}

fn omega_cmd(a: Omega) -> Result<(), String> {
    let e = |x: asymptotics::AsymptoticsError| x.to_string();
    if a.thresholds {
        match a.model {
            Model::UcSat => {
                println!("alpha_star = {:.9}", alpha_star(a.k).map_err(e)?);
                println!("alpha_u = {:.9}", alpha_u(a.k).map_err(e)?);
            }
            Model::GucSat => println!("alpha_u_g = {:.9}", alpha_u_guc().map_err(e)?),
            Model::Col => println!("c_u_h = {:.9}", c_u_col().map_err(e)?),
        }
        return Ok(());
    }
    if let Some(spec) = &a.table {
        let params = parse_range(spec)?;
        let model = if matches!(a.model, Model::Col) { GrowthModel::Col } else { GrowthModel::Sat };
        let mut buf = Vec::new();
        asymptotics::write_growth_table(&mut buf, model, &params).map_err(|x| x.to_string())?;
        return write_output(a.out.as_deref(), &String::from_utf8(buf).expect("ascii"));
    }
    match a.model {
        Model::UcSat | Model::GucSat => {
            let alpha = a.alpha.ok_or("--alpha is required")?;
            println!("units = bits per variable");
            println!("omega_s = {:.12}", omega_s(alpha, a.k));
            if matches!(a.model, Model::UcSat) {
                let r = omega_c(alpha, a.k);
                println!("omega_c = {:.12}", r.value);
                println!("argmax_t = {:.12}", r.argmax);
                println!("boundary = {}", r.boundary);
            } else {
                if a.k != 3 {
                    return Err("the GUC rate is available for k = 3 only".into());
                }
                let r = omega_guc(alpha).map_err(e)?;
                println!("omega_g = {:.12}", r.value);
                println!("argmax_y2 = {:.12}", r.argmax);
                println!("boundary = {}", r.boundary);
            }
        }
        Model::Col => {
            let c = a.c.ok_or("--c is required")?;
            let r = omega_col(c).map_err(e)?;
            println!("units = nats per vertex");
            println!("omega_h = {:.12}", r.value);
            println!("argmax_t = {:.12}", r.argmax);
            println!("boundary = {}", r.boundary);
        }
    }
    Ok(())
}

fn experiment_cmd(a: Experiment) -> Result<(), String> {
    let mut cfg = ExperimentConfig::parse(&read(&a.config)?).map_err(|e| e.to_string())?;
    if let Some(s) = a.samples {
        cfg.samples = s;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(o) = a.out {
        cfg.out = Some(o);
    }
    let summary = match &cfg.out {
        Some(p) => {
            let mut f = io::BufWriter::new(fs::File::create(p).map_err(|e| format!("{}: {e}", p.display()))?);
            run_experiment(&cfg, &mut f)
        }
        None => run_experiment(&cfg, &mut io::stdout().lock()),
    }
    .map_err(|e| e.to_string())?;
    eprintln!("{} cells, {} rows", summary.cells, summary.rows);
    if !summary.failed_cells.is_empty() {
        return Err(format!("failed cells: {:?}", summary.failed_cells));
    }
    Ok(())
}

fn check_cmd(a: Check) -> Result<(), String> {
    let report = run_check_with(CheckOptions { quick: a.quick }, |item| {
        println!("{} {} ({:.1}s): {}", if item.passed { "PASS" } else { "FAIL" }, item.name, item.seconds, item.detail);
    });
    let failed = report.items.iter().filter(|i| !i.passed).count();
    if failed > 0 {
        return Err(format!("{failed} of {} checks failed", report.items.len()));
    }
    println!("all {} checks passed", report.items.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenSat(a) => gen_sat_cmd(a),
        Command::GenGraph(a) => gen_graph_cmd(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Dp(a) => dp_cmd(a),
        Command::Omega(a) => omega_cmd(a),
        Command::Experiment(a) => experiment_cmd(a),
        Command::Check(a) => check_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
