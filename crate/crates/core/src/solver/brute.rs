use num_bigint::BigUint;

use super::SolverError;
use crate::instances::{CnfInstance, Graph};

pub const MAX_BRUTE_SAT: usize = 25;
pub const MAX_BRUTE_COL: usize = 15;

/// Number of satisfying assignments by enumeration of all 2^N assignments.
pub fn brute_force_count(instance: &CnfInstance) -> Result<BigUint, SolverError> {
    let n = instance.num_vars();
    if n > MAX_BRUTE_SAT {
        return Err(SolverError::TooLarge { n, limit: MAX_BRUTE_SAT });
    }
    let masks: Vec<(u32, u32)> = instance
        .clauses()
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(p, q), l| {
                let bit = 1u32 << (l.var() - 1);
                if l.is_positive() {
                    (p | bit, q)
                } else {
                    (p, q | bit)
                }
            })
        })
        .collect();
    let count = (0u32..1 << n).filter(|&a| masks.iter().all(|&(p, q)| a & p != 0 || !a & q != 0)).count();
    Ok(BigUint::from(count))
}

/// Number of proper 3-colorings by enumeration of all 3^N colorings.
pub fn brute_force_col_count(graph: &Graph) -> Result<BigUint, SolverError> {
    let n = graph.num_vertices();
    if n > MAX_BRUTE_COL {
        return Err(SolverError::TooLarge { n, limit: MAX_BRUTE_COL });
    }
    let mut colors = vec![0u8; n];
    let mut count = 0u64;
    loop {
        if graph.edges().iter().all(|&(u, v)| colors[u] != colors[v]) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(BigUint::from(count));
            }
            colors[i] += 1;
            if colors[i] < 3 {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}
