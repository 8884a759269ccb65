use std::collections::BTreeMap;

use super::kernel::{kernel_col, kernel_split_guc, kernel_split_uc, kernel_unit_prop, KernelRow};
use super::table::ExpectationTable;
use super::weight::Weight;
use super::{validate, ClauseVector, DpError, Problem};

/// Per-height state maps computed row by row.
#[derive(Debug, Clone)]
pub struct ReferenceTable<W> {
    pub n: usize,
    pub problem: Problem,
    pub param: f64,
    pub levels: Vec<BTreeMap<ClauseVector, W>>,
    pub solution: Vec<W>,
    pub contradiction: Vec<W>,
}

impl<W: Weight> ReferenceTable<W> {
    /// `Σ_{H ≤ T} 2^{T−H} L_S(H)`.
    pub fn s0(&self, t: usize) -> W {
        self.solution[..=t].iter().fold(W::zero(), |acc, s| acc * W::ratio(2, 1) + s.clone())
    }

    pub fn total_leaves(&self) -> W {
        self.solution.iter().chain(&self.contradiction).fold(W::zero(), |acc, x| acc + x.clone())
    }

    /// Converts to an [`ExpectationTable`] with every state kept.
    pub fn to_table(&self) -> ExpectationTable {
        let states = self
            .levels
            .iter()
            .map(|lvl| lvl.iter().map(|(c, w)| (*c, w.to_f64())).filter(|(_, v)| *v != 0.0).collect())
            .collect();
        ExpectationTable {
            n: self.n,
            problem: self.problem,
            param: self.param,
            prune: 0.0,
            c1_cap: None,
            solution: self.solution.iter().map(W::to_f64).collect(),
            contradiction: self.contradiction.iter().map(W::to_f64).collect(),
            discarded: vec![0.0; self.n + 1],
            pruned: vec![0.0; self.n + 1],
            states: Some(states),
        }
    }
}

/// The kernel row the tree process applies at state `c`, or `None` for the
/// absorbing SAT solution state.
pub fn kernel_for<W: Weight>(
    problem: Problem,
    c: ClauseVector,
    t: usize,
    n: usize,
    param: f64,
) -> Result<Option<KernelRow<W>>, DpError> {
    let row = match problem {
        Problem::SatUc | Problem::SatGuc if c.is_empty() => return Ok(None),
        _ if problem.is_sat() && c.c1 >= 1 => kernel_unit_prop(c, t, n)?,
        Problem::SatUc => kernel_split_uc(c, t, n)?,
        Problem::SatGuc => kernel_split_guc(c, t, n)?,
        Problem::Col => kernel_col(c, t, n, param)?,
    };
    Ok(Some(row))
}

/// Forward sweep `L(·, T+1) = Σ_C M[·, C; T] L(C, T)` using explicit rows.
pub fn dp_reference<W: Weight>(n: usize, param: f64, problem: Problem) -> Result<ReferenceTable<W>, DpError> {
    let m = validate(n, param, problem)?;
    let start = match m {
        Some(m) => ClauseVector::new(0, 0, m),
        None => ClauseVector::new(0, 0, n as u32),
    };
    let mut levels = vec![BTreeMap::from([(start, W::one())])];
    let mut solution = vec![W::zero(); n + 1];
    let mut contradiction = vec![W::zero(); n + 1];
    for t in 0..n {
        let mut next: BTreeMap<ClauseVector, W> = BTreeMap::new();
        for (&c, l) in &levels[t] {
            let Some(row) = kernel_for::<W>(problem, c, t, n, param)? else {
                solution[t] = l.clone();
                continue;
            };
            for (target, w) in row.targets {
                let e = next.entry(target).or_insert_with(W::zero);
                *e = e.clone() + l.clone() * w;
            }
            contradiction[t + 1] = contradiction[t + 1].clone() + l.clone() * row.contradiction;
        }
        next.retain(|_, w| !w.is_zero());
        levels.push(next);
    }
    solution[n] = levels[n].get(&ClauseVector::EMPTY).cloned().unwrap_or_else(W::zero);
    Ok(ReferenceTable { n, problem, param, levels, solution, contradiction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn empty_formula() {
        let r = dp_reference::<f64>(5, 0.0, Problem::SatUc).unwrap();
        assert_eq!(r.solution[0], 1.0);
        assert_eq!(r.total_leaves(), 1.0);
        assert!(r.levels[1].is_empty());
        assert_eq!(r.s0(5), 32.0);
    }

    #[test]
    fn expected_solutions_exact() {
        for problem in [Problem::SatUc, Problem::SatGuc] {
            let r = dp_reference::<BigRational>(6, 8.0, problem).unwrap();
            let expected = BigRational::ratio(64, 1) * num_traits::pow(BigRational::ratio(7, 8), 8);
            assert_eq!(r.s0(6), expected);
        }
    }

    #[test]
    fn col_states_conserve_vertices() {
        let r = dp_reference::<f64>(6, 3.0, Problem::Col).unwrap();
        for (t, lvl) in r.levels.iter().enumerate() {
            for c in lvl.keys() {
                assert_eq!(c.total() as usize, 6 - t);
            }
        }
        assert!(r.solution[6] > 0.0);
        assert!(r.solution[..6].iter().all(|&s| s == 0.0));
    }

    #[test]
    fn col_without_edges_counts_all_colorings() {
        let r = dp_reference::<BigRational>(4, 0.0, Problem::Col).unwrap();
        assert_eq!(r.solution[4], BigRational::ratio(81, 1));
    }
}
