use std::fmt::Write as _;

use super::{ClauseVector, DpError, Problem};

/// Expected node counts `L(C, T)` and leaf profiles of one tree process.
///
/// `solution[T]` is L_S(T) (`L((0,0,0), T)` for SAT, the surviving mass at
/// `T = N` for COL). `contradiction[T]` is L_C(T): contradiction leaves are
/// attributed to the height of the child that holds the empty clause.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationTable {
    pub n: usize,
    pub problem: Problem,
    /// M for SAT, the average degree c for COL.
    pub param: f64,
    pub prune: f64,
    pub c1_cap: Option<u32>,
    pub solution: Vec<f64>,
    pub contradiction: Vec<f64>,
    /// Mass removed at each height by the C₁ cap.
    pub discarded: Vec<f64>,
    /// Mass removed at each height by relative pruning.
    pub pruned: Vec<f64>,
    /// Per height, nonzero states sorted by clause vector.
    pub(crate) states: Option<Vec<Vec<(ClauseVector, f64)>>>,
}

impl ExpectationTable {
    pub fn has_states(&self) -> bool {
        self.states.is_some()
    }

    pub fn states(&self, t: usize) -> Result<&[(ClauseVector, f64)], DpError> {
        let states = self.states.as_ref().ok_or(DpError::StatesNotStored)?;
        states.get(t).map(Vec::as_slice).ok_or(DpError::HeightOutOfRange { t, n: self.n })
    }

    /// `L(C, T)`.
    pub fn get(&self, c: ClauseVector, t: usize) -> Result<f64, DpError> {
        let s = self.states(t)?;
        Ok(s.binary_search_by_key(&c, |(k, _)| *k).map(|i| s[i].1).unwrap_or(0.0))
    }

    /// `G(x₁, x₂, x₃; T) = Σ_C x^C L(C, T)`.
    pub fn eval_g(&self, x: [f64; 3], t: usize) -> Result<f64, DpError> {
        Ok(self.states(t)?.iter().map(|(c, l)| c.monomial(x) * l).sum())
    }

    /// `Σ_{C: C_i = 0 (i < j), C_j ≥ 1} f_j^{C_j − 1} Π_{i > j} f_i^{C_i} L(C, T)`,
    /// the polynomial equal to `[G(0..0, f_j, ..) − G(0..0, 0, ..)] / f_j`
    /// (and to its limit at `f_j = 0`).
    pub fn divided_difference(&self, j: usize, f: [f64; 3], t: usize) -> Result<f64, DpError> {
        let mut sum = 0.0;
        for (c, l) in self.states(t)? {
            let k = [c.c1, c.c2, c.c3];
            if k[..j - 1].iter().any(|&v| v > 0) || k[j - 1] == 0 {
                continue;
            }
            let mut term = *l * f[j - 1].powi(k[j - 1] as i32 - 1);
            for i in j..3 {
                term *= f[i].powi(k[i] as i32);
            }
            sum += term;
        }
        Ok(sum)
    }

    /// `S₀(T) = Σ_{H ≤ T} 2^{T−H} L_S(H)`; `S₀(N)` is the expected number of
    /// satisfying assignments.
    pub fn s0(&self, t: usize) -> f64 {
        self.solution[..=t.min(self.n)].iter().fold(0.0, |acc, s| 2.0 * acc + s)
    }

    pub fn total_solution_leaves(&self) -> f64 {
        self.solution.iter().sum()
    }

    pub fn total_contradiction_leaves(&self) -> f64 {
        self.contradiction.iter().sum()
    }

    pub fn total_leaves(&self) -> f64 {
        self.total_solution_leaves() + self.total_contradiction_leaves()
    }

    /// Expected number of nodes at height T (undetermined plus leaves).
    pub fn nodes_at(&self, t: usize) -> Result<f64, DpError> {
        Ok(self.eval_g([1.0; 3], t)? + self.contradiction[t])
    }

    pub fn total_discarded(&self) -> f64 {
        self.discarded.iter().sum()
    }

    pub fn total_pruned(&self) -> f64 {
        self.pruned.iter().sum()
    }

    /// Rows `T,C1,C2,C3,L`.
    pub fn states_csv(&self) -> Result<String, DpError> {
        let states = self.states.as_ref().ok_or(DpError::StatesNotStored)?;
        let mut out = String::from("T,C1,C2,C3,L\n");
        for (t, level) in states.iter().enumerate() {
            for (c, l) in level {
                writeln!(out, "{t},{},{},{},{}", c.c1, c.c2, c.c3, fmt17(*l)).unwrap();
            }
        }
        Ok(out)
    }

    /// Rows `T,L_S,L_C`.
    pub fn profile_csv(&self) -> String {
        let mut out = String::from("T,L_S,L_C\n");
        for t in 0..=self.n {
            writeln!(out, "{t},{},{}", fmt17(self.solution[t]), fmt17(self.contradiction[t])).unwrap();
        }
        out
    }
}

/// 17 significant digits.
pub(crate) fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
