use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

/// Per-height statistics of one search tree.
///
/// Every node is exactly one of: solution leaf, contradiction leaf, unit node
/// (one child: unit propagation or a 1-color vertex), 2-way split, 3-way split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStats {
    pub solution_leaves: Vec<u64>,
    pub contradiction_leaves: Vec<u64>,
    pub unit_nodes: Vec<u64>,
    pub splits2: Vec<u64>,
    pub splits3: Vec<u64>,
}

impl TreeStats {
    /// Empty statistics for heights `0..=n`.
    pub fn new(n: usize) -> Self {
        let z = vec![0; n + 1];
        Self {
            solution_leaves: z.clone(),
            contradiction_leaves: z.clone(),
            unit_nodes: z.clone(),
            splits2: z.clone(),
            splits3: z,
        }
    }

    /// Largest height N.
    pub fn max_height(&self) -> usize {
        self.solution_leaves.len() - 1
    }

    pub fn total_solution_leaves(&self) -> u64 {
        self.solution_leaves.iter().sum()
    }

    pub fn total_contradiction_leaves(&self) -> u64 {
        self.contradiction_leaves.iter().sum()
    }

    pub fn total_leaves(&self) -> u64 {
        self.total_solution_leaves() + self.total_contradiction_leaves()
    }

    pub fn total_splits2(&self) -> u64 {
        self.splits2.iter().sum()
    }

    pub fn total_splits3(&self) -> u64 {
        self.splits3.iter().sum()
    }

    pub fn nodes(&self) -> u64 {
        self.total_leaves() + self.unit_nodes.iter().sum::<u64>() + self.total_splits2() + self.total_splits3()
    }

    /// Σ over solution leaves of 2^(N − height): the number of satisfying
    /// assignments credited by #DPLL.
    pub fn weighted_solution_count(&self) -> BigUint {
        let n = self.max_height();
        self.solution_leaves
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold(BigUint::zero(), |acc, (t, &c)| acc + (BigUint::from(c) << (n - t)))
    }

    /// Leaf/split accounting of a completely explored tree:
    /// leaves = splits2 + 2·splits3 + 1.
    pub fn check_leaf_identity(&self) -> Result<(), String> {
        let leaves = self.total_leaves();
        let expected = self.total_splits2() + 2 * self.total_splits3() + 1;
        if leaves == expected {
            Ok(())
        } else {
            Err(format!("{leaves} leaves but splits imply {expected}"))
        }
    }

    /// CSV rows `height,solution_leaves,contradiction_leaves,splits2,splits3`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("height,solution_leaves,contradiction_leaves,splits2,splits3\n");
        for t in 0..=self.max_height() {
            writeln!(
                out,
                "{t},{},{},{},{}",
                self.solution_leaves[t], self.contradiction_leaves[t], self.splits2[t], self.splits3[t]
            )
            .unwrap();
        }
        out
    }
}

/// One-line summary of a single solver run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub problem: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub heuristic: String,
    pub mode: String,
    pub seed: u64,
    /// Solution count (count mode) or satisfiability (decide mode).
    pub result: String,
    pub total_leaves: u64,
    pub nodes: u64,
}

impl RunSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}
