use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::InstanceError;

/// Simple undirected graph on vertices `0..n`. Edges are stored as `(u, v)`
/// with `u < v`, sorted, without duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, InstanceError> {
        let mut canon = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(InstanceError::BadEdge { u, v, reason: "self-loop".into() });
            }
            if u >= num_vertices || v >= num_vertices {
                return Err(InstanceError::BadEdge { u, v, reason: format!("vertex outside [0, {num_vertices})") });
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            let (u, v) = w[0];
            return Err(InstanceError::BadEdge { u, v, reason: "duplicate edge".into() });
        }
        Ok(Self { num_vertices, edges: canon })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Average degree 2E/N.
    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.num_vertices as f64
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }
}

/// Samples G(N, p = c/N): each of the N(N−1)/2 pairs is an edge independently
/// with probability c/N.
pub fn gen_gnp(n: usize, c: f64, seed: u64) -> Result<Graph, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_gnp_with(n, c, &mut rng)
}

pub fn gen_gnp_with<R: Rng + ?Sized>(n: usize, c: f64, rng: &mut R) -> Result<Graph, InstanceError> {
    if n == 0 || !(0.0..=n as f64).contains(&c) {
        return Err(InstanceError::DegreeOutOfRange { c, n });
    }
    let p = c / n as f64;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph { num_vertices: n, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_degrees() {
        assert_eq!(gen_gnp(10, 0.0, 3).unwrap().num_edges(), 0);
        assert_eq!(gen_gnp(10, 10.0, 3).unwrap().num_edges(), 45);
        assert!(gen_gnp(10, 10.5, 3).is_err());
        assert!(gen_gnp(10, -1.0, 3).is_err());
    }

    #[test]
    fn mean_edge_count() {
        // Binomial(4950, 0.05): mean 247.5, sd of the sample mean over 10^4 draws ~0.153.
        let samples = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let total: usize = (0..samples).map(|_| gen_gnp_with(100, 5.0, &mut rng).unwrap().num_edges()).sum();
        let mean = total as f64 / samples as f64;
        let sd = (4950.0 * 0.05 * 0.95 / samples as f64).sqrt();
        assert!((mean - 247.5).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn graph_invariants() {
        assert!(Graph::new(3, vec![(0, 0)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, vec![(0, 3)]).is_err());
        let g = Graph::new(3, vec![(2, 0), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
    }
}
