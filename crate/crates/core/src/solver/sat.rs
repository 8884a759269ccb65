use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Heuristic, Mode, TreeStats};
use crate::instances::CnfInstance;

/// Runs DPLL with unit propagation and the given split heuristic.
///
/// In [`Mode::Decide`] the search stops at the first solution leaf; with the
/// same RNG state the decide tree is a prefix of the count tree.
pub fn dpll_sat<R: Rng + ?Sized>(instance: &CnfInstance, heuristic: Heuristic, mode: Mode, rng: &mut R) -> TreeStats {
    let mut search = Search::new(instance, heuristic, rng);
    search.run(mode);
    search.stats
}

/// #DPLL: the exact number of satisfying assignments and the full tree.
pub fn dpll_count_sat(instance: &CnfInstance, heuristic: Heuristic, seed: u64) -> (BigUint, TreeStats) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stats = dpll_sat(instance, heuristic, Mode::Count, &mut rng);
    (stats.weighted_solution_count(), stats)
}

/// Decision DPLL: satisfiability and the explored prefix of the tree.
pub fn dpll_decide_sat(instance: &CnfInstance, heuristic: Heuristic, seed: u64) -> (bool, TreeStats) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stats = dpll_sat(instance, heuristic, Mode::Decide, &mut rng);
    (stats.total_solution_leaves() > 0, stats)
}

enum Frame {
    Visit,
    Second { var: u32, value: bool },
    Undo { var: u32 },
}

const NONE: u32 = u32::MAX;

struct Search<'a, R: ?Sized> {
    clauses: &'a [Vec<crate::instances::Lit>],
    heuristic: Heuristic,
    /// Per variable (1-based): (clause index, literal is positive).
    occ: Vec<Vec<(u32, bool)>>,
    value: Vec<Option<bool>>,
    /// Non-false literals per clause.
    free: Vec<u32>,
    /// True literals per clause.
    sat: Vec<u32>,
    /// Unsatisfied clauses bucketed by `free`.
    buckets: Vec<Vec<u32>>,
    pos: Vec<u32>,
    alive: usize,
    unset: Vec<u32>,
    unset_pos: Vec<u32>,
    stats: TreeStats,
    rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> Search<'a, R> {
    fn new(instance: &'a CnfInstance, heuristic: Heuristic, rng: &'a mut R) -> Self {
        let n = instance.num_vars();
        let clauses = instance.clauses();
        let width = clauses.iter().map(Vec::len).max().unwrap_or(0).max(instance.k());
        let mut occ = vec![Vec::new(); n + 1];
        let mut buckets = vec![Vec::new(); width + 1];
        let mut pos = vec![0; clauses.len()];
        for (i, c) in clauses.iter().enumerate() {
            for l in c {
                occ[l.var()].push((i as u32, l.is_positive()));
            }
            pos[i] = buckets[c.len()].len() as u32;
            buckets[c.len()].push(i as u32);
        }
        Self {
            clauses,
            heuristic,
            occ,
            value: vec![None; n + 1],
            free: clauses.iter().map(|c| c.len() as u32).collect(),
            sat: vec![0; clauses.len()],
            buckets,
            pos,
            alive: clauses.len(),
            unset: (1..=n as u32).collect(),
            unset_pos: (0..=n as u32).map(|v| v.wrapping_sub(1)).collect(),
            stats: TreeStats::new(n),
            rng,
        }
    }

    fn height(&self) -> usize {
        self.value.len() - 1 - self.unset.len()
    }

    fn bucket_remove(&mut self, c: u32, len: u32) {
        let b = &mut self.buckets[len as usize];
        let p = self.pos[c as usize] as usize;
        b.swap_remove(p);
        if let Some(&moved) = b.get(p) {
            self.pos[moved as usize] = p as u32;
        }
        self.pos[c as usize] = NONE;
    }

    fn bucket_insert(&mut self, c: u32, len: u32) {
        let b = &mut self.buckets[len as usize];
        self.pos[c as usize] = b.len() as u32;
        b.push(c);
    }

    fn assign(&mut self, var: u32, value: bool) {
        let v = var as usize;
        self.value[v] = Some(value);
        let p = self.unset_pos[v] as usize;
        self.unset.swap_remove(p);
        if let Some(&moved) = self.unset.get(p) {
            self.unset_pos[moved as usize] = p as u32;
        }
        for i in 0..self.occ[v].len() {
            let (c, positive) = self.occ[v][i];
            let ci = c as usize;
            if positive == value {
                self.sat[ci] += 1;
                if self.sat[ci] == 1 {
                    self.bucket_remove(c, self.free[ci]);
                    self.alive -= 1;
                }
            } else {
                if self.sat[ci] == 0 {
                    self.bucket_remove(c, self.free[ci]);
                    self.bucket_insert(c, self.free[ci] - 1);
                }
                self.free[ci] -= 1;
            }
        }
    }

    fn unassign(&mut self, var: u32) {
        let v = var as usize;
        let value = self.value[v].take().expect("variable is assigned");
        self.unset_pos[v] = self.unset.len() as u32;
        self.unset.push(var);
        for i in (0..self.occ[v].len()).rev() {
            let (c, positive) = self.occ[v][i];
            let ci = c as usize;
            if positive == value {
                self.sat[ci] -= 1;
                if self.sat[ci] == 0 {
                    self.bucket_insert(c, self.free[ci]);
                    self.alive += 1;
                }
            } else {
                self.free[ci] += 1;
                if self.sat[ci] == 0 {
                    self.bucket_remove(c, self.free[ci] - 1);
                    self.bucket_insert(c, self.free[ci]);
                }
            }
        }
    }

    /// A uniformly random unassigned literal of clause `c`.
    fn random_free_lit(&mut self, c: u32) -> (u32, bool) {
        let j = self.free[c as usize] as usize;
        let mut pick = self.rng.gen_range(0..j);
        for l in &self.clauses[c as usize] {
            if self.value[l.var()].is_none() {
                if pick == 0 {
                    return (l.var() as u32, l.is_positive());
                }
                pick -= 1;
            }
        }
        unreachable!("clause has {j} free literals")
    }

    fn run(&mut self, mode: Mode) {
        let mut stack = vec![Frame::Visit];
        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Visit => {
                    let t = self.height();
                    if !self.buckets[0].is_empty() {
                        self.stats.contradiction_leaves[t] += 1;
                    } else if self.alive == 0 {
                        self.stats.solution_leaves[t] += 1;
                        if mode == Mode::Decide {
                            return;
                        }
                    } else if !self.buckets[1].is_empty() {
                        self.stats.unit_nodes[t] += 1;
                        let b = &self.buckets[1];
                        let c = b[self.rng.gen_range(0..b.len())];
                        let (var, value) = self.random_free_lit(c);
                        self.assign(var, value);
                        stack.push(Frame::Undo { var });
                        stack.push(Frame::Visit);
                    } else {
                        self.stats.splits2[t] += 1;
                        let (var, value) = match self.heuristic {
                            Heuristic::Uc => {
                                let var = self.unset[self.rng.gen_range(0..self.unset.len())];
                                (var, self.rng.gen_bool(0.5))
                            }
                            Heuristic::Guc => {
                                let len = (2..self.buckets.len())
                                    .find(|&j| !self.buckets[j].is_empty())
                                    .expect("an unsatisfied clause exists");
                                let b = &self.buckets[len];
                                let c = b[self.rng.gen_range(0..b.len())];
                                self.random_free_lit(c)
                            }
                        };
                        self.assign(var, value);
                        stack.push(Frame::Second { var, value: !value });
                        stack.push(Frame::Visit);
                    }
                }
                Frame::Second { var, value } => {
                    self.unassign(var);
                    self.assign(var, value);
                    stack.push(Frame::Undo { var });
                    stack.push(Frame::Visit);
                }
                Frame::Undo { var } => self.unassign(var),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_ksat, Lit};
    use crate::solver::brute_force_count;

    fn cnf(n: usize, clauses: &[&[i32]]) -> CnfInstance {
        let cl = clauses.iter().map(|c| c.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect()).collect();
        CnfInstance::new(n, 3, cl).unwrap()
    }

    #[test]
    fn empty_formula_is_one_leaf() {
        let f = CnfInstance::new(5, 3, vec![]).unwrap();
        let (count, stats) = dpll_count_sat(&f, Heuristic::Uc, 0);
        assert_eq!(count, BigUint::from(32u32));
        assert_eq!(stats.solution_leaves[0], 1);
        assert_eq!(stats.nodes(), 1);
    }

    #[test]
    fn unsat_formula_counts_zero() {
        // All eight sign patterns on three variables.
        let mut cl: Vec<Vec<i32>> = Vec::new();
        for s in 0..8 {
            cl.push((0..3).map(|i| if s >> i & 1 == 1 { i + 1 } else { -(i + 1) }).collect());
        }
        let refs: Vec<&[i32]> = cl.iter().map(Vec::as_slice).collect();
        let f = cnf(3, &refs);
        for h in [Heuristic::Uc, Heuristic::Guc] {
            let (count, stats) = dpll_count_sat(&f, h, 1);
            assert_eq!(count, BigUint::from(0u32));
            assert!(stats.check_leaf_identity().is_ok());
            let (sat, _) = dpll_decide_sat(&f, h, 1);
            assert!(!sat);
        }
    }

    #[test]
    fn single_clause() {
        let f = cnf(3, &[&[1, -2, 3]]);
        for seed in 0..20 {
            for h in [Heuristic::Uc, Heuristic::Guc] {
                let (count, stats) = dpll_count_sat(&f, h, seed);
                assert_eq!(count, BigUint::from(7u32));
                assert!(stats.check_leaf_identity().is_ok());
            }
        }
    }

    #[test]
    fn matches_brute_force_and_decide_is_prefix() {
        for seed in 0..40 {
            let f = gen_ksat(12, 40 + (seed as usize % 30), 3, seed, false).unwrap();
            let truth = brute_force_count(&f).unwrap();
            for h in [Heuristic::Uc, Heuristic::Guc] {
                let (count, full) = dpll_count_sat(&f, h, seed);
                assert_eq!(count, truth);
                assert!(full.check_leaf_identity().is_ok());
                let (sat, part) = dpll_decide_sat(&f, h, seed);
                assert_eq!(sat, truth > BigUint::from(0u32));
                assert!(part.nodes() <= full.nodes());
                for t in 0..=12 {
                    assert!(part.contradiction_leaves[t] <= full.contradiction_leaves[t]);
                    assert!(part.splits2[t] <= full.splits2[t]);
                }
            }
        }
    }

    #[test]
    fn deep_instance_does_not_overflow_the_stack() {
        let f = gen_ksat(3000, 3000, 3, 9, false).unwrap();
        let (sat, stats) = dpll_decide_sat(&f, Heuristic::Guc, 9);
        assert!(sat);
        assert_eq!(stats.total_solution_leaves(), 1);
    }
}
