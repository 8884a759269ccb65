//! Dense-grid engine.
//!
//! One height step applies the kernel to all states at once. A state's
//! children are formed in three groups (unit propagation, split, and for GUC
//! the split on a 3-clause), then every spectator type is processed in turn:
//! 1-clauses (survive, vanish or violate), 2-clauses (stay, shorten into the
//! 1-clause axis, vanish), 3-clauses (same into the 2-clause axis). Each stage
//! is a binomial thinning along one axis of the grid. Clauses created by a
//! stage are never touched by a later stage of the same step.
//!
//! Values at each height are stored relative to an exact power of two so that
//! very large or small expectations stay representable while relative pruning
//! is applied.

use rayon::prelude::*;

use super::table::ExpectationTable;
use super::{validate, ClauseVector, DpError, Problem};

/// Engine settings.
#[derive(Debug, Clone, PartialEq)]
pub struct DpOptions {
    /// States below `prune × (largest state at that height)` are dropped;
    /// 0 keeps everything.
    pub prune: f64,
    /// States with more 1-clauses are dropped; the lost mass is reported.
    pub c1_cap: Option<u32>,
    /// Keep per-state values (needed for `eval_g`).
    pub keep_states: bool,
    /// Largest grid (in cells) the engine may allocate.
    pub max_cells: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        Self { prune: 0.0, c1_cap: Some(64), keep_states: true, max_cells: 1 << 25 }
    }
}

/// Default relative pruning threshold for reports and the CLI. Far below
/// f64 resolution of the totals; 0 keeps every state.
pub const DEFAULT_PRUNE: f64 = 1e-30;

/// `dp_expect_with` using default options and the given pruning threshold.
pub fn dp_expect(n: usize, param: f64, problem: Problem, prune: f64) -> Result<ExpectationTable, DpError> {
    dp_expect_with(n, param, problem, &DpOptions { prune, ..DpOptions::default() })
}

/// Expected tree statistics for `N = n` and `M = param` (SAT) or `c = param`
/// (COL).
pub fn dp_expect_with(
    n: usize,
    param: f64,
    problem: Problem,
    options: &DpOptions,
) -> Result<ExpectationTable, DpError> {
    let m = validate(n, param, problem)?;
    if !(0.0..=1e-12).contains(&options.prune) {
        return Err(DpError::BadParameter(format!("prune threshold {} outside [0, 1e-12]", options.prune)));
    }
    let limit = options.max_cells;
    let cut = if options.prune > 0.0 { options.prune * 1e-3 } else { 0.0 };
    let start = match m {
        Some(m) => [0, 0, m as i64],
        None => [0, 0, n as i64],
    };
    let mut grid = Grid::zeros(start, start, limit)?;
    *grid.at_mut(start) = 1.0;
    let mut scale = 0i32;

    let mut solution = vec![0.0; n + 1];
    let mut contradiction = vec![0.0; n + 1];
    let mut discarded = vec![0.0; n + 1];
    let mut pruned = vec![0.0; n + 1];
    let mut states = options.keep_states.then(Vec::new);

    for t in 0..=n {
        let unit = pow2(scale);
        if let Some(s) = states.as_mut() {
            s.push(grid.to_states(unit));
        }
        if problem.is_sat() || t == n {
            let origin = [0, 0, 0];
            if grid.contains(origin) {
                solution[t] = grid.get(origin) * unit;
                if problem.is_sat() {
                    *grid.at_mut(origin) = 0.0;
                }
            }
        }
        if t == n {
            break;
        }
        let free = (n - t) as i64;
        let (mut next, contra) = match problem {
            Problem::SatUc | Problem::SatGuc => sat_step(&grid, free, problem == Problem::SatGuc, cut, limit)?,
            Problem::Col => col_step(&grid, param / (3.0 * n as f64), cut, limit)?,
        };
        contradiction[t + 1] = contra * unit;
        if let Some(cap) = options.c1_cap {
            discarded[t + 1] = next.drop_where(|c| c[0] > cap as i64) * unit;
        }
        if options.prune > 0.0 {
            let thr = options.prune * next.max();
            pruned[t + 1] = next.drop_values_below(thr) * unit;
        }
        next = next.crop(limit)?;
        let max = next.max();
        if max > 0.0 {
            let e = max.log2().floor() as i32;
            next.scale_by(pow2(-e));
            scale += e;
        }
        grid = next;
    }
    Ok(ExpectationTable {
        n,
        problem,
        param,
        prune: options.prune,
        c1_cap: options.c1_cap,
        solution,
        contradiction,
        discarded,
        pruned,
        states,
    })
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

fn sat_step(a: &Grid, n: i64, guc: bool, cut: f64, limit: usize) -> Result<(Grid, f64), DpError> {
    // Unit propagation: one 1-clause consumed, the others are spectators.
    let mut b = a.restrict([1, 0, 0], a.hi, limit)?.shifted([-1, 0, 0]);
    let contra = b.survive_axis0(-0.5 / n as f64);
    b = b.thin(0, None, ratio(1, 2 * n - 1), cut, limit)?;

    let plane = a.restrict([0, 0, 0], [0, a.hi[1], a.hi[2]], limit)?;
    if guc {
        let s2 = plane.restrict([0, 1, 0], plane.hi, limit)?.shifted([0, -1, 0]);
        b = b.add_scaled(&s2, 1.0, limit)?;
        b = b.add_scaled(&s2.shifted([1, 0, 0]), 1.0, limit)?;
    } else {
        b = b.add_scaled(&plane, 2.0, limit)?;
    }
    if n >= 2 {
        b = b.thin(1, Some(0), ratio(1, n), cut, limit)?;
        b = b.thin(1, None, ratio(2, 2 * n - 2), cut, limit)?;
    }
    if guc {
        let s3 = plane.restrict([0, 0, 1], [0, 0, plane.hi[2]], limit)?.shifted([0, 0, -1]);
        b = b.add_scaled(&s3, 1.0, limit)?;
        b = b.add_scaled(&s3.shifted([0, 1, 0]), 1.0, limit)?;
    }
    if n >= 3 {
        b = b.thin(2, Some(1), ratio(3, 2 * n), cut, limit)?;
        b = b.thin(2, None, ratio(3, 2 * n - 3), cut, limit)?;
    }
    Ok((b, contra))
}

fn col_step(a: &Grid, mu: f64, cut: f64, limit: usize) -> Result<(Grid, f64), DpError> {
    let g1 = a.restrict([1, 0, 0], a.hi, limit)?.shifted([-1, 0, 0]);
    let g2 = a.restrict([0, 1, 0], [0, a.hi[1], a.hi[2]], limit)?.shifted([0, -1, 0]);
    let g3 = a.restrict([0, 0, 1], [0, 0, a.hi[2]], limit)?.shifted([0, 0, -1]);
    let mut b = g1.add_scaled(&g2, 2.0, limit)?.add_scaled(&g3, 3.0, limit)?;
    let contra = b.survive_axis0(-mu);
    b = b.thin(1, Some(0), 2.0 * mu, cut, limit)?;
    b = b.thin(2, Some(1), 3.0 * mu, cut, limit)?;
    Ok((b, contra))
}

fn ratio(num: i64, den: i64) -> f64 {
    num as f64 / den as f64
}

/// Truncated binomial rows `P(Bin(a, q) = m)` for `a` in a range.
struct Pmf {
    a_lo: i64,
    rows: Vec<(i64, Vec<f64>)>,
}

impl Pmf {
    fn new(a_lo: i64, a_hi: i64, q: f64, cut: f64) -> Self {
        let rows = (a_lo..=a_hi).map(|a| pmf_row(a, q, cut)).collect();
        Self { a_lo, rows }
    }

    fn row(&self, a: i64) -> &(i64, Vec<f64>) {
        &self.rows[(a - self.a_lo) as usize]
    }
}

fn pmf_row(a: i64, q: f64, cut: f64) -> (i64, Vec<f64>) {
    if a == 0 || q == 0.0 {
        return (0, vec![1.0]);
    }
    if q == 1.0 {
        return (a, vec![1.0]);
    }
    let step = q.ln() - (-q).ln_1p();
    let mut lp = a as f64 * (-q).ln_1p();
    let mut p = Vec::with_capacity(a as usize + 1);
    for m in 0..=a {
        if m > 0 {
            lp += ((a - m + 1) as f64 / m as f64).ln() + step;
        }
        p.push(lp.exp());
    }
    let keep = |x: &f64| *x > cut;
    let lo = p.iter().position(keep).unwrap_or(0);
    let hi = p.iter().rposition(keep).unwrap_or(0);
    (lo as i64, p[lo..=hi].to_vec())
}

/// Dense box `lo..=hi` (per axis: C₁, C₂, C₃), C₁ fastest in memory.
#[derive(Debug, Clone)]
struct Grid {
    lo: [i64; 3],
    hi: [i64; 3],
    data: Vec<f64>,
}

impl Grid {
    fn empty() -> Self {
        Self { lo: [0; 3], hi: [-1; 3], data: Vec::new() }
    }

    fn zeros(lo: [i64; 3], hi: [i64; 3], limit: usize) -> Result<Self, DpError> {
        if (0..3).any(|i| hi[i] < lo[i]) {
            return Ok(Self::empty());
        }
        let cells = (0..3).map(|i| (hi[i] - lo[i] + 1) as usize).product::<usize>();
        if cells > limit {
            return Err(DpError::MemoryGuard { cells, limit });
        }
        Ok(Self { lo, hi, data: vec![0.0; cells] })
    }

    fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn dims(&self) -> [usize; 3] {
        [0, 1, 2].map(|i| (self.hi[i] - self.lo[i] + 1).max(0) as usize)
    }

    fn contains(&self, c: [i64; 3]) -> bool {
        !self.is_empty() && (0..3).all(|i| self.lo[i] <= c[i] && c[i] <= self.hi[i])
    }

    fn index(&self, c: [i64; 3]) -> usize {
        let d = self.dims();
        (((c[2] - self.lo[2]) as usize * d[1]) + (c[1] - self.lo[1]) as usize) * d[0] + (c[0] - self.lo[0]) as usize
    }

    fn get(&self, c: [i64; 3]) -> f64 {
        if self.contains(c) {
            self.data[self.index(c)]
        } else {
            0.0
        }
    }

    fn at_mut(&mut self, c: [i64; 3]) -> &mut f64 {
        let i = self.index(c);
        &mut self.data[i]
    }

    fn coords(&self, i: usize) -> [i64; 3] {
        let d = self.dims();
        [
            self.lo[0] + (i % d[0]) as i64,
            self.lo[1] + ((i / d[0]) % d[1]) as i64,
            self.lo[2] + (i / (d[0] * d[1])) as i64,
        ]
    }

    fn shifted(mut self, d: [i64; 3]) -> Self {
        for i in 0..3 {
            self.lo[i] += d[i];
            self.hi[i] += d[i];
        }
        self
    }

    /// Copy of the part inside `lo..=hi`.
    fn restrict(&self, lo: [i64; 3], hi: [i64; 3], limit: usize) -> Result<Self, DpError> {
        if self.is_empty() {
            return Ok(Self::empty());
        }
        let lo = [0, 1, 2].map(|i| lo[i].max(self.lo[i]));
        let hi = [0, 1, 2].map(|i| hi[i].min(self.hi[i]));
        let mut out = Self::zeros(lo, hi, limit)?;
        for i in 0..out.data.len() {
            out.data[i] = self.get(out.coords(i));
        }
        Ok(out)
    }

    /// `self + w·other` on the union box.
    fn add_scaled(self, other: &Grid, w: f64, limit: usize) -> Result<Self, DpError> {
        if other.is_empty() {
            return Ok(self);
        }
        let (lo, hi) = if self.is_empty() {
            (other.lo, other.hi)
        } else {
            ([0, 1, 2].map(|i| self.lo[i].min(other.lo[i])), [0, 1, 2].map(|i| self.hi[i].max(other.hi[i])))
        };
        let mut out = if lo == self.lo && hi == self.hi { self } else { self.restrict_into(lo, hi, limit)? };
        for i in 0..other.data.len() {
            let v = other.data[i];
            if v != 0.0 {
                *out.at_mut(other.coords(i)) += w * v;
            }
        }
        Ok(out)
    }

    /// Re-embeds into a box containing the current one.
    fn restrict_into(&self, lo: [i64; 3], hi: [i64; 3], limit: usize) -> Result<Self, DpError> {
        let mut out = Self::zeros(lo, hi, limit)?;
        for i in 0..self.data.len() {
            let v = self.data[i];
            if v != 0.0 {
                *out.at_mut(self.coords(i)) = v;
            }
        }
        Ok(out)
    }

    /// Multiplies each cell by `(1 + r)^{C₁}` (survival of C₁ independent
    /// 1-clauses or 1-color vertices) and returns the mass removed.
    fn survive_axis0(&mut self, r: f64) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let l = r.ln_1p();
        let d0 = self.dims()[0];
        let factors: Vec<(f64, f64)> = (0..d0)
            .map(|k| {
                let c1 = (self.lo[0] + k as i64) as f64;
                ((c1 * l).exp(), -(c1 * l).exp_m1())
            })
            .collect();
        let mut lost = 0.0;
        for (i, v) in self.data.iter_mut().enumerate() {
            let (keep, gone) = factors[i % d0];
            lost += *v * gone;
            *v *= keep;
        }
        lost
    }

    /// Each of the `C_from` items independently leaves with probability `q`,
    /// moving one unit to axis `to` or vanishing.
    fn thin(&self, from: usize, to: Option<usize>, q: f64, cut: f64, limit: usize) -> Result<Self, DpError> {
        if self.is_empty() || q == 0.0 {
            return Ok(self.clone());
        }
        let (a_lo, a_hi) = (self.lo[from], self.hi[from]);
        let pmf = Pmf::new(a_lo, a_hi, q, cut);
        let (mut r_lo, mut r_hi, mut m_min, mut m_max) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for a in a_lo..=a_hi {
            let (lo, row) = pmf.row(a);
            let hi = lo + row.len() as i64 - 1;
            r_lo = r_lo.min(a - hi);
            r_hi = r_hi.max(a - lo);
            m_min = m_min.min(*lo);
            m_max = m_max.max(hi);
        }
        // For each output value r on the `from` axis: (m, weight) with source a = r + m.
        let gather: Vec<Vec<(i64, f64)>> = (r_lo..=r_hi)
            .map(|r| {
                (a_lo.max(r)..=a_hi)
                    .filter_map(|a| {
                        let (lo, row) = pmf.row(a);
                        let m = a - r;
                        (m >= *lo && m < lo + row.len() as i64).then(|| (m, row[(m - lo) as usize]))
                    })
                    .collect()
            })
            .collect();
        let mut lo = self.lo;
        let mut hi = self.hi;
        lo[from] = r_lo;
        hi[from] = r_hi;
        if let Some(t) = to {
            lo[t] += m_min;
            hi[t] += m_max;
        }
        let mut out = Self::zeros(lo, hi, limit)?;
        let d = out.dims();
        let slab = d[0] * d[1];
        let sd = self.dims();
        let stride = [1i64, sd[0] as i64, (sd[0] * sd[1]) as i64];
        // Moving m units from `from` to `to` shifts the source index by m·step.
        let step = stride[from] - to.map_or(0, |t| stride[t]);
        let (olo, src) = (out.lo, self);
        out.data.par_chunks_mut(slab).enumerate().for_each(|(k, chunk)| {
            for (i, cell) in chunk.iter_mut().enumerate() {
                let c = [olo[0] + (i % d[0]) as i64, olo[1] + (i / d[0]) as i64, olo[2] + k as i64];
                // Axes other than `from` and `to` are unchanged and must lie in the source box.
                if (0..3).any(|ax| ax != from && Some(ax) != to && (c[ax] < src.lo[ax] || c[ax] > src.hi[ax])) {
                    continue;
                }
                let base: i64 = (0..3).map(|ax| (c[ax] - src.lo[ax]) * stride[ax]).sum();
                let mut acc = 0.0;
                for &(m, w) in &gather[(c[from] - r_lo) as usize] {
                    if let Some(t) = to {
                        let u = c[t] - m;
                        if u < src.lo[t] || u > src.hi[t] {
                            continue;
                        }
                    }
                    acc += w * src.data[(base + m * step) as usize];
                }
                *cell = acc;
            }
        });
        Ok(out)
    }

    fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    fn scale_by(&mut self, f: f64) {
        self.data.iter_mut().for_each(|v| *v *= f);
    }

    fn drop_where(&mut self, pred: impl Fn([i64; 3]) -> bool) -> f64 {
        let mut lost = 0.0;
        for i in 0..self.data.len() {
            if self.data[i] != 0.0 && pred(self.coords(i)) {
                lost += self.data[i];
                self.data[i] = 0.0;
            }
        }
        lost
    }

    fn drop_values_below(&mut self, thr: f64) -> f64 {
        let mut lost = 0.0;
        for v in &mut self.data {
            if *v != 0.0 && *v < thr {
                lost += *v;
                *v = 0.0;
            }
        }
        lost
    }

    /// Shrinks the box to the nonzero cells.
    fn crop(self, limit: usize) -> Result<Self, DpError> {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for (i, v) in self.data.iter().enumerate() {
            if *v != 0.0 {
                let c = self.coords(i);
                for k in 0..3 {
                    lo[k] = lo[k].min(c[k]);
                    hi[k] = hi[k].max(c[k]);
                }
            }
        }
        if lo[0] == i64::MAX {
            return Ok(Self::empty());
        }
        if lo == self.lo && hi == self.hi {
            return Ok(self);
        }
        self.restrict(lo, hi, limit)
    }

    fn to_states(&self, unit: f64) -> Vec<(ClauseVector, f64)> {
        let mut out: Vec<(ClauseVector, f64)> = self
            .data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| {
                let c = self.coords(i);
                (ClauseVector::new(c[0] as u32, c[1] as u32, c[2] as u32), v * unit)
            })
            .collect();
        out.sort_by_key(|(c, _)| *c);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expectation::dp_reference;

    fn assert_tables_close(a: &ExpectationTable, b: &ExpectationTable, tol: f64) {
        assert_eq!(a.n, b.n);
        for t in 0..=a.n {
            let (sa, sb) = (a.states(t).unwrap(), b.states(t).unwrap());
            let scale = sa.iter().map(|(_, v)| v.abs()).fold(1e-300, f64::max);
            let mut i = 0;
            let mut j = 0;
            while i < sa.len() || j < sb.len() {
                let (ka, kb) = (sa.get(i).map(|x| x.0), sb.get(j).map(|x| x.0));
                let (va, vb) = match (ka, kb) {
                    (Some(x), Some(y)) if x == y => {
                        i += 1;
                        j += 1;
                        (sa[i - 1].1, sb[j - 1].1)
                    }
                    (Some(x), Some(y)) if x < y => {
                        i += 1;
                        (sa[i - 1].1, 0.0)
                    }
                    (Some(_), None) => {
                        i += 1;
                        (sa[i - 1].1, 0.0)
                    }
                    _ => {
                        j += 1;
                        (0.0, sb[j - 1].1)
                    }
                };
                assert!((va - vb).abs() <= tol * scale, "T={t}: {va} vs {vb}");
            }
            assert!((a.solution[t] - b.solution[t]).abs() <= tol * (1.0 + a.solution[t].abs()));
            assert!((a.contradiction[t] - b.contradiction[t]).abs() <= tol * (1.0 + a.contradiction[t].abs()));
        }
    }

    #[test]
    fn matches_reference_engine() {
        for (n, p, problem) in [
            (10, 20.0, Problem::SatUc),
            (10, 20.0, Problem::SatGuc),
            (9, 40.0, Problem::SatUc),
            (9, 40.0, Problem::SatGuc),
            (8, 4.0, Problem::Col),
            (7, 7.0, Problem::Col),
        ] {
            let dense = dp_expect(n, p, problem, 0.0).unwrap();
            let reference = dp_reference::<f64>(n, p, problem).unwrap().to_table();
            assert_tables_close(&dense, &reference, 1e-12);
        }
    }

    #[test]
    fn empty_formula_is_one_leaf() {
        let t = dp_expect(5, 0.0, Problem::SatUc, 0.0).unwrap();
        assert_eq!(t.solution[0], 1.0);
        assert_eq!(t.total_leaves(), 1.0);
        assert_eq!(t.states(0).unwrap(), &[(ClauseVector::EMPTY, 1.0)]);
        assert!(t.states(1).unwrap().is_empty());
    }

    #[test]
    fn expected_solution_count() {
        for problem in [Problem::SatUc, Problem::SatGuc] {
            let t = dp_expect(10, 20.0, problem, 0.0).unwrap();
            let exact = 1024.0 * 0.875f64.powi(20);
            assert!((t.s0(10) / exact - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn col_conservation() {
        let t = dp_expect(8, 4.0, Problem::Col, 0.0).unwrap();
        for h in 0..=8 {
            for (c, v) in t.states(h).unwrap() {
                assert_eq!(c.total() as usize, 8 - h);
                assert!(*v > 0.0);
            }
        }
    }

    #[test]
    fn pruning_and_cap_are_reported() {
        let exact = dp_expect(14, 70.0, Problem::SatUc, 0.0).unwrap();
        let opts = DpOptions { prune: 1e-12, c1_cap: Some(3), keep_states: false, ..DpOptions::default() };
        let t = dp_expect_with(14, 70.0, Problem::SatUc, &opts).unwrap();
        assert!(!t.has_states());
        assert!(t.total_discarded() > 0.0);
        assert!(t.total_leaves() < exact.total_leaves());
        let opts = DpOptions { prune: 1e-12, keep_states: false, ..DpOptions::default() };
        let t = dp_expect_with(14, 70.0, Problem::SatUc, &opts).unwrap();
        assert!((t.total_leaves() / exact.total_leaves() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn guards() {
        assert!(dp_expect(10, 20.0, Problem::SatUc, 1e-3).is_err());
        let opts = DpOptions { max_cells: 10, ..DpOptions::default() };
        assert!(matches!(dp_expect_with(10, 40.0, Problem::SatUc, &opts), Err(DpError::MemoryGuard { .. })));
    }

    #[test]
    fn pmf_rows() {
        let (lo, row) = pmf_row(4, 0.5, 0.0);
        assert_eq!(lo, 0);
        for (m, p) in row.iter().enumerate() {
            let exact = [1.0, 4.0, 6.0, 4.0, 1.0][m] / 16.0;
            assert!((p - exact).abs() < 1e-15);
        }
        assert_eq!(pmf_row(7, 1.0, 0.0), (7, vec![1.0]));
        let (lo, row) = pmf_row(4000, 0.03, 1e-30);
        assert!(lo > 0 && row.len() < 400);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
