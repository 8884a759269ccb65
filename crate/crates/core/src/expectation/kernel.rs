//! Explicit transition rows between clause vectors.
//!
//! Within a residual instance every j-clause is a uniformly random set of j
//! unset variables with uniform signs, independently of the others. Setting
//! one variable (`μ = 1/(N−T)` for SAT) hits each spectator j-clause with
//! probability jμ; a hit clause is satisfied or shortened with probability ½
//! each, and a shortened 1-clause is a contradiction. In the sums below
//! `z_j ~ Bin(C_j, jμ)` counts hit j-clauses and `w_{j−1} ~ Bin(z_j, ½)` the
//! shortened ones; surviving unit propagation carries the weight `2^{−z₁}`.
//!
//! For 3-COL (`μ = c/(3N)`) each uncolored j-list vertex loses the chosen color
//! with probability jμ; a 1-list vertex losing its color is a contradiction.

use std::collections::BTreeMap;

use thiserror::Error;

use super::weight::{binomial_row, Weight};
use super::ClauseVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("unit propagation needs a 1-clause, state {0}")]
    NoUnitClause(ClauseVector),
    #[error("splitting is not allowed while 1-clauses exist, state {0}")]
    UnitClausePresent(ClauseVector),
    #[error("state (0,0,0) is a leaf and has no children")]
    EmptyState,
    #[error("height {t} leaves no free variable or vertex (N = {n})")]
    HeightOutOfRange { t: usize, n: usize },
    #[error("state {c} cannot occur at height {t} (N = {n})")]
    Unreachable { c: ClauseVector, t: usize, n: usize },
}

/// Children of one source state with their expected multiplicities, plus the
/// expected number of contradiction leaves created one level down.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow<W> {
    pub source: ClauseVector,
    pub height: usize,
    pub targets: Vec<(ClauseVector, W)>,
    pub contradiction: W,
}

impl<W: Weight> KernelRow<W> {
    /// Σ over targets.
    pub fn mass(&self) -> W {
        self.targets.iter().fold(W::zero(), |acc, (_, w)| acc + w.clone())
    }

    pub fn get(&self, c: ClauseVector) -> W {
        self.targets.iter().find(|(t, _)| *t == c).map(|(_, w)| w.clone()).unwrap_or_else(W::zero)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Model {
    Sat,
    Col,
}

/// Outcomes for `a` spectators of length `j`: (unchanged, shortened, weight).
fn spectator_outcomes<W: Weight>(model: Model, j: u32, a: u32, mu: &W) -> Vec<(u32, u32, W)> {
    let hit = W::ratio(j as u64, 1) * mu.clone();
    let z_row = binomial_row(a, &hit);
    let mut out = Vec::new();
    for (z, pz) in z_row.into_iter().enumerate() {
        let z = z as u32;
        if pz.is_zero() {
            continue;
        }
        match (model, j) {
            (Model::Sat, 1) => {
                out.push((a - z, 0, pz * num_traits::pow(W::ratio(1, 2), z as usize)));
            }
            (Model::Sat, _) => {
                for (w, pw) in binomial_row(z, &W::ratio(1, 2)).into_iter().enumerate() {
                    out.push((a - z, w as u32, pz.clone() * pw));
                }
            }
            (Model::Col, 1) => {
                if z == 0 {
                    out.push((a, 0, pz));
                }
            }
            (Model::Col, _) => out.push((a - z, z, pz)),
        }
    }
    out
}

/// Builds a row from the spectator counts and the list of children, each an
/// offset added to the spectators' image with a multiplicity.
fn build_row<W: Weight>(
    model: Model,
    source: ClauseVector,
    height: usize,
    spectators: ClauseVector,
    children: &[(ClauseVector, u32)],
    mu: &W,
) -> KernelRow<W> {
    let o1 = spectator_outcomes(model, 1, spectators.c1, mu);
    let o2 = spectator_outcomes(model, 2, spectators.c2, mu);
    let o3 = spectator_outcomes(model, 3, spectators.c3, mu);

    // (C₁', C₂ kept) after the 1- and 2-clauses.
    let mut partial: BTreeMap<(u32, u32), W> = BTreeMap::new();
    for (r1, _, p1) in &o1 {
        for (r2, w1, p2) in &o2 {
            let e = partial.entry((r1 + w1, *r2)).or_insert_with(W::zero);
            *e = e.clone() + p1.clone() * p2.clone();
        }
    }
    let mut image: BTreeMap<ClauseVector, W> = BTreeMap::new();
    for (&(c1, r2), p12) in &partial {
        for (r3, w2, p3) in &o3 {
            let e = image.entry(ClauseVector::new(c1, r2 + w2, *r3)).or_insert_with(W::zero);
            *e = e.clone() + p12.clone() * p3.clone();
        }
    }
    let survival = image.values().fold(W::zero(), |acc, w| acc + w.clone());

    let mut targets: BTreeMap<ClauseVector, W> = BTreeMap::new();
    let mut children_total = W::zero();
    for &(offset, mult) in children {
        let m = W::ratio(mult as u64, 1);
        children_total = children_total + m.clone();
        for (&c, w) in &image {
            let t = ClauseVector::new(c.c1 + offset.c1, c.c2 + offset.c2, c.c3 + offset.c3);
            let e = targets.entry(t).or_insert_with(W::zero);
            *e = e.clone() + m.clone() * w.clone();
        }
    }
    KernelRow {
        source,
        height,
        targets: targets.into_iter().filter(|(_, w)| !w.is_zero()).collect(),
        contradiction: children_total * (W::one() - survival),
    }
}

fn sat_mu<W: Weight>(c: ClauseVector, t: usize, n: usize) -> Result<W, KernelError> {
    if t >= n {
        return Err(KernelError::HeightOutOfRange { t, n });
    }
    let free = (n - t) as u32;
    if (c.c2 > 0 && free < 2) || (c.c3 > 0 && free < 3) {
        return Err(KernelError::Unreachable { c, t, n });
    }
    Ok(W::ratio(1, free as u64))
}

/// Unit propagation at a state with `C₁ ≥ 1`: the spectators are the other
/// `C₁ − 1` 1-clauses and all 2- and 3-clauses.
pub fn kernel_unit_prop<W: Weight>(c: ClauseVector, t: usize, n: usize) -> Result<KernelRow<W>, KernelError> {
    if c.c1 == 0 {
        return Err(KernelError::NoUnitClause(c));
    }
    let mu = sat_mu::<W>(c, t, n)?;
    let spect = ClauseVector::new(c.c1 - 1, c.c2, c.c3);
    Ok(build_row(Model::Sat, c, t, spect, &[(ClauseVector::EMPTY, 1)], &mu))
}

/// UC split: two children, each seeing every clause as a spectator.
pub fn kernel_split_uc<W: Weight>(c: ClauseVector, t: usize, n: usize) -> Result<KernelRow<W>, KernelError> {
    check_split(c)?;
    let mu = sat_mu::<W>(c, t, n)?;
    Ok(build_row(Model::Sat, c, t, c, &[(ClauseVector::EMPTY, 2)], &mu))
}

/// GUC split on a shortest clause. The True child drops the picked clause;
/// the False child keeps it one literal shorter. All other clauses are
/// spectators.
pub fn kernel_split_guc<W: Weight>(c: ClauseVector, t: usize, n: usize) -> Result<KernelRow<W>, KernelError> {
    check_split(c)?;
    let mu = sat_mu::<W>(c, t, n)?;
    let (spect, shorter) = if c.c2 >= 1 {
        (ClauseVector::new(0, c.c2 - 1, c.c3), ClauseVector::new(1, 0, 0))
    } else {
        (ClauseVector::new(0, 0, c.c3 - 1), ClauseVector::new(0, 1, 0))
    };
    Ok(build_row(Model::Sat, c, t, spect, &[(ClauseVector::EMPTY, 1), (shorter, 1)], &mu))
}

fn check_split(c: ClauseVector) -> Result<(), KernelError> {
    if c.c1 > 0 {
        return Err(KernelError::UnitClausePresent(c));
    }
    if c.is_empty() {
        return Err(KernelError::EmptyState);
    }
    Ok(())
}

/// 3-COL step: color a vertex with the fewest available colors, one child per
/// available color; `μ = c/(3N)` with `c` the average degree.
pub fn kernel_col<W: Weight>(c: ClauseVector, t: usize, n: usize, degree: f64) -> Result<KernelRow<W>, KernelError> {
    if t >= n {
        return Err(KernelError::HeightOutOfRange { t, n });
    }
    if c.total() as usize != n - t || !(0.0..=n as f64).contains(&degree) {
        return Err(KernelError::Unreachable { c, t, n });
    }
    let mu = W::from_f64(degree) / W::ratio(3 * n as u64, 1);
    let (j, spect) = if c.c1 >= 1 {
        (1, ClauseVector::new(c.c1 - 1, c.c2, c.c3))
    } else if c.c2 >= 1 {
        (2, ClauseVector::new(0, c.c2 - 1, c.c3))
    } else {
        (3, ClauseVector::new(0, 0, c.c3 - 1))
    };
    Ok(build_row(Model::Col, c, t, spect, &[(ClauseVector::EMPTY, j)], &mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    type Q = BigRational;

    fn q(a: u64, b: u64) -> Q {
        Q::ratio(a, b)
    }

    fn cv(a: u32, b: u32, c: u32) -> ClauseVector {
        ClauseVector::new(a, b, c)
    }

    #[test]
    fn unit_prop_hand_rows() {
        // N − T = 5, μ = 1/5.
        let r = kernel_unit_prop::<Q>(cv(1, 0, 0), 0, 5).unwrap();
        assert_eq!(r.targets, vec![(cv(0, 0, 0), Q::one())]);
        assert!(r.contradiction.is_zero());

        let r = kernel_unit_prop::<Q>(cv(2, 0, 0), 0, 5).unwrap();
        assert_eq!(r.get(cv(1, 0, 0)), q(4, 5));
        assert_eq!(r.get(cv(0, 0, 0)), q(1, 10));
        assert_eq!(r.contradiction, q(1, 10));

        let r = kernel_unit_prop::<Q>(cv(1, 1, 0), 0, 5).unwrap();
        assert_eq!(r.get(cv(0, 1, 0)), q(3, 5));
        assert_eq!(r.get(cv(1, 0, 0)), q(1, 5));
        assert_eq!(r.get(cv(0, 0, 0)), q(1, 5));
        assert!(r.contradiction.is_zero());
    }

    #[test]
    fn uc_split_hand_rows() {
        let r = kernel_split_uc::<Q>(cv(0, 0, 1), 0, 5).unwrap();
        assert_eq!(r.get(cv(0, 0, 1)), q(4, 5));
        assert_eq!(r.get(cv(0, 1, 0)), q(3, 5));
        assert_eq!(r.get(cv(0, 0, 0)), q(3, 5));
        let r = kernel_split_uc::<Q>(cv(0, 1, 0), 0, 5).unwrap();
        assert_eq!(r.get(cv(0, 1, 0)), q(6, 5));
        assert_eq!(r.get(cv(0, 0, 0)), q(2, 5));
        assert_eq!(r.get(cv(1, 0, 0)), q(2, 5));
        assert_eq!(r.mass(), q(2, 1));
    }

    #[test]
    fn guc_split_hand_rows() {
        let r = kernel_split_guc::<Q>(cv(0, 1, 0), 0, 5).unwrap();
        assert_eq!(r.targets, vec![(cv(0, 0, 0), Q::one()), (cv(1, 0, 0), Q::one())]);
        let r = kernel_split_guc::<Q>(cv(0, 0, 1), 0, 5).unwrap();
        assert_eq!(r.targets, vec![(cv(0, 0, 0), Q::one()), (cv(0, 1, 0), Q::one())]);
        let r = kernel_split_guc::<Q>(cv(0, 2, 3), 1, 9).unwrap();
        assert_eq!(r.mass(), q(2, 1));
        assert!(r.contradiction.is_zero());
    }

    #[test]
    fn col_hand_rows() {
        // N = 4, c = 3 → μ = 1/4.
        let r = kernel_col::<Q>(cv(0, 0, 2), 2, 4, 3.0).unwrap();
        assert_eq!(r.get(cv(0, 0, 1)), q(3, 1) * q(1, 4));
        assert_eq!(r.get(cv(0, 1, 0)), q(3, 1) * q(3, 4));
        let r = kernel_col::<Q>(cv(1, 0, 0), 3, 4, 3.0).unwrap();
        assert_eq!(r.targets, vec![(cv(0, 0, 0), Q::one())]);
        assert!(r.contradiction.is_zero());
        let r = kernel_col::<Q>(cv(3, 0, 1), 0, 4, 3.0).unwrap();
        assert_eq!(r.mass(), num_traits::pow(q(3, 4), 2));
        assert_eq!(r.contradiction, Q::one() - num_traits::pow(q(3, 4), 2));
    }

    #[test]
    fn precondition_errors() {
        assert_eq!(kernel_unit_prop::<f64>(cv(0, 1, 0), 0, 5), Err(KernelError::NoUnitClause(cv(0, 1, 0))));
        assert!(matches!(kernel_split_uc::<f64>(cv(1, 0, 0), 0, 5), Err(KernelError::UnitClausePresent(_))));
        assert_eq!(kernel_split_guc::<f64>(cv(0, 0, 0), 0, 5), Err(KernelError::EmptyState));
        assert!(matches!(kernel_unit_prop::<f64>(cv(1, 0, 0), 5, 5), Err(KernelError::HeightOutOfRange { .. })));
        assert!(matches!(kernel_split_uc::<f64>(cv(0, 0, 1), 3, 5), Err(KernelError::Unreachable { .. })));
        assert!(matches!(kernel_col::<f64>(cv(0, 0, 2), 0, 4, 3.0), Err(KernelError::Unreachable { .. })));
    }
}
