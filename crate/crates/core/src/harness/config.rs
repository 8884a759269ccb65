//! Flat `key = value` experiment configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::HarnessError;
use crate::expectation::{Problem, DEFAULT_PRUNE};
use crate::solver::{Heuristic, Mode};

/// Problem family of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Sat,
    Col,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Sat => "sat",
            ProblemKind::Col => "col",
        })
    }
}

impl FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sat" => Ok(ProblemKind::Sat),
            "col" => Ok(ProblemKind::Col),
            other => Err(format!("unknown problem '{other}' (expected sat or col)")),
        }
    }
}

/// Largest N accepted by the Monte Carlo runner.
pub const MAX_EXPERIMENT_N: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub heuristic: Heuristic,
    pub mode: Mode,
    pub k: usize,
    pub ns: Vec<usize>,
    /// α values (SAT) or average degrees c (COL).
    pub params: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub prune: f64,
    /// DP rows are produced for `N ≤ dp_max_n`.
    pub dp_max_n: usize,
    pub distinct: bool,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Defaults for everything except `n`, the parameter list and `seed`.
    pub fn new(problem: ProblemKind, ns: Vec<usize>, params: Vec<f64>, seed: u64) -> Self {
        Self {
            problem,
            heuristic: Heuristic::Uc,
            mode: Mode::Count,
            k: 3,
            ns,
            params,
            samples: 1000,
            seed,
            prune: DEFAULT_PRUNE,
            dp_max_n: 60,
            distinct: false,
            out: None,
        }
    }

    /// Parses the text of a config file. Blank lines and `#` comments are
    /// skipped; lists are comma separated.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut problem = None;
        let mut heuristic = Heuristic::Uc;
        let mut mode = Mode::Count;
        let mut k = 3;
        let mut ns = None;
        let mut alphas = None;
        let mut cs = None;
        let mut samples = 1000;
        let mut seed = None;
        let mut prune = DEFAULT_PRUNE;
        let mut dp_max_n = 60;
        let mut distinct = false;
        let mut out = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| HarnessError::Config { line: i + 1, message: msg };
            let (key, value) =
                line.split_once('=').ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "problem" => problem = Some(value.parse().map_err(err)?),
                "heuristic" => heuristic = value.parse().map_err(err)?,
                "mode" => mode = value.parse().map_err(err)?,
                "k" => k = parse_one(value).map_err(err)?,
                "n" => ns = Some(parse_list(value).map_err(err)?),
                "alpha" => alphas = Some(parse_list(value).map_err(err)?),
                "c" => cs = Some(parse_list(value).map_err(err)?),
                "samples" => samples = parse_one(value).map_err(err)?,
                "seed" => seed = Some(parse_one(value).map_err(err)?),
                "prune" => prune = parse_one(value).map_err(err)?,
                "dp_max_n" => dp_max_n = parse_one(value).map_err(err)?,
                "distinct" => distinct = parse_one(value).map_err(err)?,
                "out" => out = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        let missing = |key: &str| HarnessError::Config { line: 0, message: format!("missing required key '{key}'") };
        let problem: ProblemKind = problem.ok_or_else(|| missing("problem"))?;
        let params = match problem {
            ProblemKind::Sat => alphas.ok_or_else(|| missing("alpha"))?,
            ProblemKind::Col => cs.ok_or_else(|| missing("c"))?,
        };
        let config = Self {
            problem,
            heuristic,
            mode,
            k,
            ns: ns.ok_or_else(|| missing("n"))?,
            params,
            samples,
            seed: seed.ok_or_else(|| missing("seed"))?,
            prune,
            dp_max_n,
            distinct,
            out,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config { line: 0, message: m });
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.ns.is_empty() || self.params.is_empty() {
            return bad("n and the parameter list must be non-empty".into());
        }
        if self.problem == ProblemKind::Sat && self.k < 2 {
            return bad(format!("k = {} must be at least 2", self.k));
        }
        for &n in &self.ns {
            if n == 0 || n > MAX_EXPERIMENT_N {
                return bad(format!("n = {n} outside 1..={MAX_EXPERIMENT_N}"));
            }
            if self.problem == ProblemKind::Sat && n < self.k {
                return bad(format!("n = {n} smaller than k = {}", self.k));
            }
        }
        for &p in &self.params {
            if !(p.is_finite() && p >= 0.0) {
                return bad(format!("parameter {p} must be finite and non-negative"));
            }
            if self.problem == ProblemKind::Col && self.ns.iter().any(|&n| p > n as f64) {
                return bad(format!("c = {p} exceeds some n"));
            }
        }
        if !(0.0..=1e-12).contains(&self.prune) {
            return bad(format!("prune = {} outside [0, 1e-12]", self.prune));
        }
        Ok(())
    }

    /// DP problem selected by the problem family and heuristic.
    pub fn dp_problem(&self) -> Problem {
        match (self.problem, self.heuristic) {
            (ProblemKind::Col, _) => Problem::Col,
            (ProblemKind::Sat, Heuristic::Uc) => Problem::SatUc,
            (ProblemKind::Sat, Heuristic::Guc) => Problem::SatGuc,
        }
    }

    /// Canonical `key = value` rendering; parsing it gives back `self`.
    pub fn canonical(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        s += &format!("problem = {}\n", self.problem);
        s += &format!("heuristic = {}\n", self.heuristic);
        s += &format!("mode = {}\n", self.mode);
        s += &format!("k = {}\n", self.k);
        s += &format!("n = {}\n", self.ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
        let key = if self.problem == ProblemKind::Sat { "alpha" } else { "c" };
        s += &format!("{key} = {}\n", list(&self.params));
        s += &format!("samples = {}\n", self.samples);
        s += &format!("seed = {}\n", self.seed);
        s += &format!("prune = {:?}\n", self.prune);
        s += &format!("dp_max_n = {}\n", self.dp_max_n);
        s += &format!("distinct = {}\n", self.distinct);
        if let Some(out) = &self.out {
            s += &format!("out = {}\n", out.display());
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of the canonical rendering without
    /// the output path.
    pub fn hash(&self) -> String {
        let body = Self { out: None, ..self.clone() }.canonical();
        Sha256::digest(body.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn parse_one<T: FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("cannot parse '{}'", s.trim()))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',').map(parse_one).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# SAT-UC sweep
problem = sat
heuristic = guc
n = 10, 12
alpha = 2, 4.5
samples = 50
seed = 7
";

    #[test]
    fn parse_and_round_trip() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.problem, ProblemKind::Sat);
        assert_eq!(c.heuristic, Heuristic::Guc);
        assert_eq!(c.ns, vec![10, 12]);
        assert_eq!(c.params, vec![2.0, 4.5]);
        assert_eq!(c.dp_problem(), Problem::SatGuc);
        let again = ExperimentConfig::parse(&c.canonical()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.hash(), c.hash());
        assert_eq!(c.hash().len(), 16);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match ExperimentConfig::parse("problem = sat\nbogus\n") {
            Err(HarnessError::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(ExperimentConfig::parse("problem = sat\nn = 5\nalpha = 1\n").is_err());
        assert!(ExperimentConfig::parse("problem = col\nn = 5\nc = 9\nseed = 1\n").is_err());
        assert!(ExperimentConfig::parse("problem = sat\nn = 5\nalpha = 1\nseed = 1\nsamples = 0\n").is_err());
        assert!(ExperimentConfig::parse("problem = sat\nn = 5\nalpha = 1\nseed = 1\nwidth = 3\n").is_err());
    }

    #[test]
    fn hash_ignores_output_path() {
        let mut c = ExperimentConfig::parse(SAMPLE).unwrap();
        let h = c.hash();
        c.out = Some("elsewhere.csv".into());
        assert_eq!(c.hash(), h);
        c.seed += 1;
        assert_ne!(c.hash(), h);
    }
}
