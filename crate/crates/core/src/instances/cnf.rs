use std::collections::HashSet;
use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::InstanceError;

/// A literal in DIMACS convention: `+v` is variable `v`, `-v` its negation.
/// Variables are numbered from 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: usize, positive: bool) -> Self {
        let v = var as i32;
        Lit(if positive { v } else { -v })
    }

    pub fn from_dimacs(x: i32) -> Option<Self> {
        (x != 0).then_some(Lit(x))
    }

    pub fn var(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negate(self) -> Self {
        Lit(-self.0)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    /// Truth value of the literal when its variable is set to `value`.
    pub fn eval(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var())
        } else {
            write!(f, "¬x{}", self.var())
        }
    }
}

/// A k-CNF formula. Every clause holds exactly `k` literals over distinct
/// variables, sorted by variable index (the canonical form).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    num_vars: usize,
    k: usize,
    clauses: Vec<Vec<Lit>>,
}

impl CnfInstance {
    /// Builds an instance, canonicalising each clause and checking the
    /// distinct-variable and range invariants.
    pub fn new(num_vars: usize, k: usize, clauses: Vec<Vec<Lit>>) -> Result<Self, InstanceError> {
        if num_vars == 0 {
            return Err(InstanceError::TooFewVariables { n: 0, k });
        }
        let mut canon = Vec::with_capacity(clauses.len());
        for (index, mut clause) in clauses.into_iter().enumerate() {
            if clause.len() != k {
                return Err(InstanceError::BadClause {
                    index,
                    reason: format!("expected {k} literals, found {}", clause.len()),
                });
            }
            clause.sort_by_key(|l| l.var());
            for w in clause.windows(2) {
                if w[0].var() == w[1].var() {
                    let reason = if w[0] == w[1] {
                        format!("duplicate variable {}", w[0].var())
                    } else {
                        format!("complementary literals on variable {}", w[0].var())
                    };
                    return Err(InstanceError::BadClause { index, reason });
                }
            }
            if let Some(l) = clause.iter().find(|l| l.var() == 0 || l.var() > num_vars) {
                return Err(InstanceError::BadClause {
                    index,
                    reason: format!("variable {} outside [1, {num_vars}]", l.var()),
                });
            }
            canon.push(clause);
        }
        Ok(Self { num_vars, k, clauses: canon })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Clause-to-variable ratio α = M/N.
    pub fn alpha(&self) -> f64 {
        self.clauses.len() as f64 / self.num_vars as f64
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }
}

/// Number of legal k-clauses over N variables: C(N, k) · 2^k.
pub fn legal_clause_count(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c << k
}

/// Draws `m` random k-clauses over `n` variables.
///
/// Each clause is uniform over the C(n,k)·2^k legal clauses. By default the
/// clauses are independent (drawn with replacement); with `distinct` set,
/// repeated clauses are rejected and redrawn.
pub fn gen_ksat(n: usize, m: usize, k: usize, seed: u64, distinct: bool) -> Result<CnfInstance, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_ksat_with(n, m, k, &mut rng, distinct)
}

/// Same as [`gen_ksat`] but drawing from a caller-owned RNG stream.
pub fn gen_ksat_with<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    k: usize,
    rng: &mut R,
    distinct: bool,
) -> Result<CnfInstance, InstanceError> {
    if k < 2 {
        return Err(InstanceError::WidthTooSmall { k });
    }
    if n < k {
        return Err(InstanceError::TooFewVariables { n, k });
    }
    if distinct {
        let available = legal_clause_count(n, k);
        if m as u128 > available {
            return Err(InstanceError::TooManyDistinctClauses { m, available });
        }
    }
    let mut clauses = Vec::with_capacity(m);
    let mut seen = HashSet::new();
    while clauses.len() < m {
        let mut vars: Vec<usize> = sample(rng, n, k).into_iter().map(|v| v + 1).collect();
        vars.sort_unstable();
        let clause: Vec<Lit> = vars.into_iter().map(|v| Lit::new(v, rng.gen_bool(0.5))).collect();
        if distinct && !seen.insert(clause.clone()) {
            continue;
        }
        clauses.push(clause);
    }
    Ok(CnfInstance { num_vars: n, k, clauses })
}
