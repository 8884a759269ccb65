//! Residual instances under a partial assignment.

use std::collections::HashSet;

use super::{CnfInstance, Graph, InstanceError, Lit};
use crate::expectation::ClauseVector;

pub const COLOR_COUNT: usize = 3;

/// A partial assignment of length T: truth values for SAT variables, or
/// colors (0, 1, 2) for graph vertices. Order is the assignment order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartialAssignment {
    Sat(Vec<(usize, bool)>),
    Col(Vec<(usize, u8)>),
}

impl PartialAssignment {
    pub fn len(&self) -> usize {
        match self {
            PartialAssignment::Sat(a) => a.len(),
            PartialAssignment::Col(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A surviving clause: its index in the original formula and its
/// remaining (unassigned) literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualClause {
    pub index: usize,
    pub lits: Vec<Lit>,
}

/// Residual SAT instance F_A.
#[derive(Debug, Clone, PartialEq)]
pub struct SatResidual {
    /// `counts[l]` is the number of unsatisfied clauses with `l` unassigned
    /// literals; `counts[0] >= 1` iff the assignment violates the formula.
    pub counts: Vec<usize>,
    pub clauses: Vec<ResidualClause>,
    pub unassigned: usize,
}

impl SatResidual {
    pub fn is_violated(&self) -> bool {
        self.counts[0] > 0
    }

    pub fn is_satisfied(&self) -> bool {
        self.clauses.is_empty()
    }

    /// (C₁, C₂, C₃). Only meaningful for 3-CNF.
    pub fn clause_vector(&self) -> ClauseVector {
        let c = |l: usize| self.counts.get(l).copied().unwrap_or(0) as u32;
        ClauseVector::new(c(1), c(2), c(3))
    }
}

/// Residual 3-COL instance: available-color bitmask for every uncolored
/// vertex (`None` once colored).
#[derive(Debug, Clone, PartialEq)]
pub struct ColResidual {
    pub lists: Vec<Option<u8>>,
    /// `counts[j]`: uncolored vertices with `j` colors left.
    pub counts: [usize; COLOR_COUNT + 1],
    /// Vertices colored with a color that was no longer available.
    pub conflicts: usize,
    pub unassigned: usize,
}

impl ColResidual {
    pub fn is_violated(&self) -> bool {
        self.counts[0] > 0 || self.conflicts > 0
    }

    pub fn clause_vector(&self) -> ClauseVector {
        ClauseVector::new(self.counts[1] as u32, self.counts[2] as u32, self.counts[3] as u32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResidualState {
    Sat(SatResidual),
    Col(ColResidual),
}

pub fn reduce_sat(instance: &CnfInstance, assignment: &[(usize, bool)]) -> Result<SatResidual, InstanceError> {
    let n = instance.num_vars();
    if assignment.len() > n {
        return Err(InstanceError::BadAssignment(format!("length {} exceeds N={n}", assignment.len())));
    }
    let mut value: Vec<Option<bool>> = vec![None; n + 1];
    for &(v, b) in assignment {
        if v == 0 || v > n {
            return Err(InstanceError::BadAssignment(format!("variable {v} outside [1, {n}]")));
        }
        if value[v].replace(b).is_some() {
            return Err(InstanceError::BadAssignment(format!("variable {v} assigned twice")));
        }
    }
    let mut counts = vec![0; instance.k() + 1];
    let mut clauses = Vec::new();
    for (index, clause) in instance.clauses().iter().enumerate() {
        if clause.iter().any(|l| value[l.var()].is_some_and(|b| l.eval(b))) {
            continue;
        }
        let lits: Vec<Lit> = clause.iter().copied().filter(|l| value[l.var()].is_none()).collect();
        counts[lits.len()] += 1;
        clauses.push(ResidualClause { index, lits });
    }
    Ok(SatResidual { counts, clauses, unassigned: n - assignment.len() })
}

pub fn reduce_col(graph: &Graph, coloring: &[(usize, u8)]) -> Result<ColResidual, InstanceError> {
    let n = graph.num_vertices();
    if coloring.len() > n {
        return Err(InstanceError::BadAssignment(format!("length {} exceeds N={n}", coloring.len())));
    }
    let full = (1u8 << COLOR_COUNT) - 1;
    let mut lists: Vec<Option<u8>> = vec![Some(full); n];
    let adj = graph.adjacency();
    let mut seen = HashSet::new();
    let mut conflicts = 0;
    for &(v, color) in coloring {
        if v >= n || color as usize >= COLOR_COUNT {
            return Err(InstanceError::BadAssignment(format!("vertex {v} / color {color} out of range")));
        }
        if !seen.insert(v) {
            return Err(InstanceError::BadAssignment(format!("vertex {v} colored twice")));
        }
        let bit = 1u8 << color;
        if lists[v].expect("uncolored") & bit == 0 {
            conflicts += 1;
        }
        lists[v] = None;
        for &u in &adj[v] {
            if let Some(l) = lists[u].as_mut() {
                *l &= !bit;
            }
        }
    }
    let mut counts = [0; COLOR_COUNT + 1];
    for l in lists.iter().flatten() {
        counts[l.count_ones() as usize] += 1;
    }
    Ok(ColResidual { lists, counts, conflicts, unassigned: n - coloring.len() })
}

/// Reduces an instance under a partial assignment of the matching kind.
pub fn reduce(instance: InstanceRef<'_>, assignment: &PartialAssignment) -> Result<ResidualState, InstanceError> {
    match (instance, assignment) {
        (InstanceRef::Sat(f), PartialAssignment::Sat(a)) => reduce_sat(f, a).map(ResidualState::Sat),
        (InstanceRef::Col(g), PartialAssignment::Col(a)) => reduce_col(g, a).map(ResidualState::Col),
        _ => Err(InstanceError::BadAssignment("assignment kind does not match instance".into())),
    }
}

#[derive(Debug, Clone, Copy)]
pub enum InstanceRef<'a> {
    Sat(&'a CnfInstance),
    Col(&'a Graph),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_gnp, gen_ksat};
    use proptest::prelude::*;

    fn cnf(n: usize, clauses: &[&[i32]]) -> CnfInstance {
        let cl = clauses.iter().map(|c| c.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect()).collect();
        CnfInstance::new(n, 3, cl).unwrap()
    }

    #[test]
    fn empty_assignment_gives_all_three_clauses() {
        let f = gen_ksat(10, 17, 3, 0, false).unwrap();
        let r = reduce_sat(&f, &[]).unwrap();
        assert_eq!(r.clause_vector(), ClauseVector::new(0, 0, 17));
    }

    #[test]
    fn one_false_literal_makes_a_two_clause() {
        let f = cnf(3, &[&[1, 2, 3]]);
        let r = reduce_sat(&f, &[(1, false)]).unwrap();
        assert_eq!(r.clause_vector(), ClauseVector::new(0, 1, 0));
    }

    #[test]
    fn hand_reduction() {
        let f = cnf(4, &[&[1, 2, 3], &[-1, 2, 4]]);
        let r = reduce_sat(&f, &[(1, true), (2, false)]).unwrap();
        assert_eq!(r.clause_vector(), ClauseVector::new(1, 0, 0));
        assert_eq!(r.clauses, vec![ResidualClause { index: 1, lits: vec![Lit::from_dimacs(4).unwrap()] }]);
        let r = reduce_sat(&f, &[(1, true), (2, false), (4, false)]).unwrap();
        assert!(r.is_violated());
    }

    #[test]
    fn invalid_assignments() {
        let f = cnf(3, &[&[1, 2, 3]]);
        assert!(reduce_sat(&f, &[(1, true), (1, false)]).is_err());
        assert!(reduce_sat(&f, &[(4, true)]).is_err());
        let g = gen_gnp(4, 2.0, 0).unwrap();
        assert!(reduce_col(&g, &[(0, 3)]).is_err());
        assert!(reduce(InstanceRef::Sat(&f), &PartialAssignment::Col(vec![])).is_err());
    }

    #[test]
    fn coloring_strips_neighbor_lists() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let r = reduce_col(&g, &[(1, 0)]).unwrap();
        assert_eq!(r.lists, vec![Some(0b110), None, Some(0b110)]);
        assert_eq!(r.clause_vector(), ClauseVector::new(0, 2, 0));
    }

    proptest! {
        #[test]
        fn sat_reduction_is_monotone(seed: u64, m in 0usize..40) {
            let n = 8;
            let f = gen_ksat(n, m, 3, seed, false).unwrap();
            let order: Vec<(usize, bool)> = (1..=n).map(|v| (v, (seed >> v) & 1 == 1)).collect();
            let mut prev = reduce_sat(&f, &[]).unwrap();
            for t in 1..=n {
                let r = reduce_sat(&f, &order[..t]).unwrap();
                prop_assert!(r.counts[3] <= prev.counts[3]);
                prop_assert!(r.counts[1..].iter().sum::<usize>() <= prev.counts[1..].iter().sum::<usize>());
                let assigned: HashSet<usize> = order[..t].iter().map(|&(v, _)| v).collect();
                for c in &r.clauses {
                    prop_assert!(c.lits.iter().all(|l| !assigned.contains(&l.var())));
                    let original = &f.clauses()[c.index];
                    let non_false = original
                        .iter()
                        .filter(|l| !assigned.contains(&l.var()) || l.eval(order[l.var() - 1].1))
                        .count();
                    prop_assert_eq!(c.lits.len(), non_false);
                }
                prop_assert_eq!(r.is_violated(), r.counts[0] >= 1);
                prev = r;
            }
        }

        #[test]
        fn col_reduction_consumes_one_vertex_per_step(seed: u64) {
            let n = 9;
            let g = gen_gnp(n, 3.0, seed).unwrap();
            let order: Vec<(usize, u8)> = (0..n).map(|v| (v, ((seed >> (2 * v)) % 3) as u8)).collect();
            for t in 0..=n {
                let r = reduce_col(&g, &order[..t]).unwrap();
                prop_assert_eq!(r.counts.iter().sum::<usize>(), n - t);
                if !r.is_violated() {
                    prop_assert_eq!(r.counts[1] + r.counts[2] + r.counts[3], n - t);
                }
            }
        }
    }
}
