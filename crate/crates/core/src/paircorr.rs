//! Empirical pair correlation statistics.
//!
//! For `N` points and a scale `s >= 0` the weak statistic is
//!
//! ```text
//! F_N^a(s) = #{ k != l : ||x_k - x_l|| <= s / N^a } / N^(2 - a)
//! ```
//!
//! with `||.||` the distance to the nearest integer; `a = 1` is the
//! classical `F_N(s)`. The comparison is inclusive.
//!
//! Two counters produce the ordered pair count: [`pair_count_naive`] checks
//! every pair, [`pair_count_fast`] walks two pointers over the sorted points.
//! Both evaluate the same floating point expressions for every pair so their
//! counts agree exactly, including pairs sitting on the threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::seq::PointSet;
use crate::table::{CurveMeta, CurveTable};
use crate::{Error, Result};

/// Scale `s` and exponent `alpha` of a pair correlation query.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcfQuery {
    s: f64,
    alpha: f64,
}

impl PcfQuery {
    pub fn new(s: f64, alpha: f64) -> Result<Self> {
        if !(s >= 0.0) || s.is_infinite() {
            return Err(Error::invalid(format!("scale s = {s} must be finite and >= 0")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("alpha = {alpha} must lie in [0, 1]")));
        }
        Ok(Self { s, alpha })
    }

    /// The classical statistic, `alpha = 1`.
    pub fn classical(s: f64) -> Result<Self> {
        Self::new(s, 1.0)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Distance threshold `s / N^alpha`.
    pub fn threshold(&self, n: usize) -> f64 {
        self.s / (n as f64).powf(self.alpha)
    }

    /// Turns an ordered pair count into the statistic, dividing by
    /// `N^(2 - alpha)`.
    pub fn normalize(&self, count: u64, n: usize) -> f64 {
        count as f64 / (n as f64).powf(2.0 - self.alpha)
    }
}

/// Distance between `a` and `b` on the unit torus, in `[0, 0.5]`.
#[inline]
pub fn torus_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Number of ordered pairs `k != l` with `torus_distance <= threshold`.
/// Exhaustive, `O(N^2)`.
pub fn pair_count_naive(points: &[f64], threshold: f64) -> u64 {
    let mut count = 0u64;
    for (k, &a) in points.iter().enumerate() {
        for (l, &b) in points.iter().enumerate() {
            if k != l && torus_distance(a, b) <= threshold {
                count += 1;
            }
        }
    }
    count
}

/// Same count as [`pair_count_naive`] for points sorted ascending, in
/// `O(N)` after sorting.
///
/// For `i < j` put `d = p_j - p_i`. The naive test is `min(d, 1 - d) <= t`.
/// When `t < 0.5` the two branches `d <= t` and `1 - d <= t` are exclusive,
/// and each is monotone in `j` for fixed `i` and in `i` for fixed `j`, so
/// each unordered pair is found by exactly one of two sliding windows. When
/// `t >= 0.5` every pair is within range.
pub fn pair_count_fast(sorted: &[f64], threshold: f64) -> u64 {
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    let n = sorted.len();
    if n < 2 {
        return 0;
    }
    if threshold >= 0.5 {
        return (n as u64) * (n as u64 - 1);
    }

    let mut near = 0usize; // d <= t
    let mut wrapped = 0usize; // 1 - d <= t
    let mut hi = 0usize;
    let mut lo = 0usize;
    for (i, &p) in sorted.iter().enumerate() {
        hi = hi.max(i + 1);
        while hi < n && sorted[hi] - p <= threshold {
            hi += 1;
        }
        near += hi - i - 1;

        lo = lo.max(i + 1);
        while lo < n && !(1.0 - (sorted[lo] - p) <= threshold) {
            lo += 1;
        }
        wrapped += n - lo;
    }
    2 * (near + wrapped) as u64
}

/// `F_N^alpha(s)` by exhaustive pair enumeration. Serves as the oracle for
/// [`pcf_fast`].
pub fn pcf_naive(ps: &PointSet, q: PcfQuery) -> f64 {
    let n = ps.n_points();
    q.normalize(pair_count_naive(ps.points(), q.threshold(n)), n)
}

/// `F_N^alpha(s)` via the sliding window kernel.
pub fn pcf_fast(ps: &PointSet, q: PcfQuery) -> f64 {
    let n = ps.n_points();
    q.normalize(pair_count_fast(ps.points(), q.threshold(n)), n)
}

pub(crate) fn validate_grid(s_grid: &[f64]) -> Result<()> {
    if s_grid.is_empty() {
        return Err(Error::invalid("the s grid is empty"));
    }
    if s_grid.iter().any(|s| !(*s >= 0.0) || s.is_infinite()) {
        return Err(Error::invalid("s grid values must be finite and >= 0"));
    }
    if s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("the s grid must be strictly ascending"));
    }
    Ok(())
}

/// Evaluates [`pcf_fast`] over a grid, in parallel. Column `F_N`.
pub fn pcf_curve(ps: &PointSet, s_grid: &[f64], alpha: f64) -> Result<CurveTable> {
    validate_grid(s_grid)?;
    let queries = s_grid
        .iter()
        .map(|&s| PcfQuery::new(s, alpha))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = queries.par_iter().map(|&q| pcf_fast(ps, q)).collect();
    let meta = CurveMeta {
        n_points: ps.n_points(),
        alpha,
        generator: format!("{:?}", ps.source()),
    };
    let mut table = CurveTable::new(s_grid.to_vec(), meta)?;
    table.push_column("F_N", values)?;
    Ok(table)
}
