use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{Mode, TreeStats};
use crate::instances::{Graph, COLOR_COUNT};

/// Outcome of a 3-COL search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColAnswer {
    /// Number of proper 3-colorings (count mode).
    Count(BigUint),
    /// Whether a proper 3-coloring exists (decide mode).
    Colorable(bool),
}

/// DPLL for 3-coloring: color a uniformly random vertex among those with the
/// fewest available colors, trying its colors in uniformly random order.
/// A 1-color vertex is forced (unit node), otherwise the node is a 2- or 3-way
/// split.
pub fn dpll_col<R: Rng + ?Sized>(graph: &Graph, mode: Mode, rng: &mut R) -> (ColAnswer, TreeStats) {
    let mut search = Search::new(graph, rng);
    search.run(mode);
    let stats = search.stats;
    let answer = match mode {
        Mode::Count => ColAnswer::Count(BigUint::from(stats.total_solution_leaves())),
        Mode::Decide => ColAnswer::Colorable(stats.total_solution_leaves() > 0),
    };
    (answer, stats)
}

enum Frame {
    Visit,
    Branch { v: u32, colors: [u8; COLOR_COUNT], len: u8, next: u8, mark: usize },
}

struct Search<'a, R: ?Sized> {
    adj: Vec<Vec<u32>>,
    lists: Vec<u8>,
    colored: Vec<bool>,
    /// Uncolored vertices bucketed by list size.
    buckets: [Vec<u32>; COLOR_COUNT + 1],
    pos: Vec<u32>,
    remaining: usize,
    /// (vertex, removed color bit) for undo.
    trail: Vec<(u32, u8)>,
    stats: TreeStats,
    rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> Search<'a, R> {
    fn new(graph: &Graph, rng: &'a mut R) -> Self {
        let n = graph.num_vertices();
        let adj = graph.adjacency().into_iter().map(|a| a.into_iter().map(|u| u as u32).collect()).collect();
        let mut buckets: [Vec<u32>; COLOR_COUNT + 1] = Default::default();
        buckets[COLOR_COUNT] = (0..n as u32).collect();
        Self {
            adj,
            lists: vec![(1u8 << COLOR_COUNT) - 1; n],
            colored: vec![false; n],
            buckets,
            pos: (0..n as u32).collect(),
            remaining: n,
            trail: Vec::new(),
            stats: TreeStats::new(n),
            rng,
        }
    }

    fn bucket_remove(&mut self, v: u32, size: usize) {
        let b = &mut self.buckets[size];
        let p = self.pos[v as usize] as usize;
        b.swap_remove(p);
        if let Some(&moved) = b.get(p) {
            self.pos[moved as usize] = p as u32;
        }
    }

    fn bucket_insert(&mut self, v: u32, size: usize) {
        let b = &mut self.buckets[size];
        self.pos[v as usize] = b.len() as u32;
        b.push(v);
    }

    fn apply(&mut self, v: u32, color: u8) {
        let bit = 1u8 << color;
        for i in 0..self.adj[v as usize].len() {
            let u = self.adj[v as usize][i];
            let ui = u as usize;
            if !self.colored[ui] && self.lists[ui] & bit != 0 {
                let size = self.lists[ui].count_ones() as usize;
                self.bucket_remove(u, size);
                self.bucket_insert(u, size - 1);
                self.lists[ui] &= !bit;
                self.trail.push((u, bit));
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (u, bit) = self.trail.pop().expect("non-empty trail");
            let ui = u as usize;
            let size = self.lists[ui].count_ones() as usize;
            self.bucket_remove(u, size);
            self.bucket_insert(u, size + 1);
            self.lists[ui] |= bit;
        }
    }

    fn run(&mut self, mode: Mode) {
        let mut stack = vec![Frame::Visit];
        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Visit => {
                    let t = self.colored.len() - self.remaining;
                    if !self.buckets[0].is_empty() {
                        self.stats.contradiction_leaves[t] += 1;
                        continue;
                    }
                    if self.remaining == 0 {
                        self.stats.solution_leaves[t] += 1;
                        if mode == Mode::Decide {
                            return;
                        }
                        continue;
                    }
                    let j = (1..=COLOR_COUNT).find(|&j| !self.buckets[j].is_empty()).expect("uncolored vertex");
                    match j {
                        1 => self.stats.unit_nodes[t] += 1,
                        2 => self.stats.splits2[t] += 1,
                        _ => self.stats.splits3[t] += 1,
                    }
                    let b = &self.buckets[j];
                    let v = b[self.rng.gen_range(0..b.len())];
                    self.bucket_remove(v, j);
                    self.colored[v as usize] = true;
                    self.remaining -= 1;
                    let mut colors = [0u8; COLOR_COUNT];
                    let mut len = 0;
                    for c in 0..COLOR_COUNT as u8 {
                        if self.lists[v as usize] >> c & 1 == 1 {
                            colors[len] = c;
                            len += 1;
                        }
                    }
                    colors[..len].shuffle(self.rng);
                    stack.push(Frame::Branch { v, colors, len: len as u8, next: 0, mark: self.trail.len() });
                }
                Frame::Branch { v, colors, len, next, mark } => {
                    self.undo_to(mark);
                    if next == len {
                        self.colored[v as usize] = false;
                        self.remaining += 1;
                        self.bucket_insert(v, len as usize);
                        continue;
                    }
                    self.apply(v, colors[next as usize]);
                    stack.push(Frame::Branch { v, colors, len, next: next + 1, mark });
                    stack.push(Frame::Visit);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_gnp;
    use crate::solver::brute_force_col_count;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn count(g: &Graph, seed: u64) -> (BigUint, TreeStats) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match dpll_col(g, Mode::Count, &mut rng) {
            (ColAnswer::Count(c), s) => (c, s),
            _ => unreachable!(),
        }
    }

    #[test]
    fn triangle_and_k4() {
        let tri = Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        let (c, s) = count(&tri, 0);
        assert_eq!(c, BigUint::from(6u32));
        assert!(s.check_leaf_identity().is_ok());
        let k4 = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let (c, s) = count(&k4, 0);
        assert_eq!(c, BigUint::from(0u32));
        assert!(s.check_leaf_identity().is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(dpll_col(&k4, Mode::Decide, &mut rng).0, ColAnswer::Colorable(false));
    }

    #[test]
    fn empty_graph_has_3_pow_n() {
        let g = Graph::new(5, vec![]).unwrap();
        let (c, s) = count(&g, 3);
        assert_eq!(c, BigUint::from(243u32));
        assert_eq!(s.solution_leaves[5], 243);
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..30 {
            let g = gen_gnp(10, 3.0 + (seed % 4) as f64, seed).unwrap();
            let truth = brute_force_col_count(&g).unwrap();
            let (c, s) = count(&g, seed);
            assert_eq!(c, truth);
            assert!(s.check_leaf_identity().is_ok());
        }
    }

    #[test]
    fn large_sparse_graph_decides() {
        let g = gen_gnp(5000, 1.0, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (ans, s) = dpll_col(&g, Mode::Decide, &mut rng);
        assert_eq!(ans, ColAnswer::Colorable(true));
        assert_eq!(s.solution_leaves[5000], 1);
    }
}
