//! Point generation and gap structure on the unit torus.
//!
//! The sequence studied throughout the crate is `x_n = {log2(2n - 1)}`. Its
//! first `N` terms cut the torus into the `N` gaps `log2(m / (m - 1))` for
//! `m = N + 1, ..., 2N`, and the largest one, `log2((N + 1) / N)`, is the
//! dispersion.
//!
//! All arithmetic is `f64`. Points are exact to a few ulps as long as
//! `2N - 1` stays well below `2^52`; past `N ~ 2^40` neighbouring points of
//! the log sequence start to collide and generation reports an error.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::{stable_sum, Error, Result, GAP_SUM_TOLERANCE};

/// Where a [`PointSet`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    /// First `N` terms of `{log2(2n - 1)}`.
    LogSequence,
    /// The shift of the log sequence whose gaps ascend from `y_1 = 0`.
    ShiftedAscending,
    /// Caller supplied points.
    Custom,
}

/// `N` points on `[0, 1)`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<f64>,
    source: Source,
}

impl PointSet {
    /// Builds a custom point set. Points are sorted; duplicates are kept.
    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a point set needs at least one point"));
        }
        if let Some(bad) = points.iter().find(|p| !(0.0..1.0).contains(*p)) {
            return Err(Error::invalid(format!("point {bad} is not in [0, 1)")));
        }
        points.sort_by(f64::total_cmp);
        Ok(Self { points, source: Source::Custom })
    }

    fn generated(mut points: Vec<f64>, source: Source) -> Result<Self> {
        points.sort_by(f64::total_cmp);
        debug_assert!(points.iter().all(|p| (0.0..1.0).contains(p)));
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "{} points exceed f64 resolution (neighbouring points collide)",
                points.len()
            )));
        }
        Ok(Self { points, source })
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// Rotates every point by `c` modulo one. The result is a custom set.
    pub fn shifted_by(&self, c: f64) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|&p| {
                let v = p + c;
                let f = v - v.floor();
                // v - floor(v) can round up to exactly 1.0 for tiny negative v
                if f >= 1.0 { 0.0 } else { f }
            })
            .collect();
        Self::from_points(points)
    }
}

/// The `N` circular gaps of a point set.
///
/// Every gap is positive and the gaps sum to one within
/// [`GAP_SUM_TOLERANCE`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    gaps: Vec<f64>,
}

impl GapProfile {
    pub fn new(gaps: Vec<f64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::invalid("a gap profile needs at least one gap"));
        }
        if let Some(bad) = gaps.iter().find(|g| !(**g > 0.0)) {
            return Err(Error::invalid(format!("gap {bad} is not positive")));
        }
        let total = stable_sum(gaps.iter().copied());
        if (total - 1.0).abs() > GAP_SUM_TOLERANCE {
            return Err(Error::invalid(format!("gaps sum to {total}, expected 1")));
        }
        Ok(Self { gaps })
    }

    pub fn n_points(&self) -> usize {
        self.gaps.len()
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn sum(&self) -> f64 {
        stable_sum(self.gaps.iter().copied())
    }

    pub fn max(&self) -> f64 {
        self.gaps.iter().copied().fold(f64::MIN, f64::max)
    }

    /// Gaps sorted ascending, for multiset comparisons.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.gaps.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Largest elementwise difference between the sorted gap multisets, or
    /// `None` if the sizes differ.
    pub fn multiset_distance(&self, other: &GapProfile) -> Option<f64> {
        if self.n_points() != other.n_points() {
            return None;
        }
        Some(
            self.sorted()
                .iter()
                .zip(other.sorted())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Binary expansion `N = sum a_l 2^l` with `a_L = 1`, plus the split index
/// `n0 = 2 (N - 2^L)` separating the two gap families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicExpansion {
    /// `a_0, ..., a_L`, least significant first.
    pub coefficients: Vec<bool>,
    pub top_index: u32,
    pub n0: u64,
}

impl DyadicExpansion {
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        let top_index = 63 - n.leading_zeros();
        let coefficients = (0..=top_index).map(|l| (n >> l) & 1 == 1).collect();
        let n0 = 2 * (n - (1u64 << top_index));
        Ok(Self { coefficients, top_index, n0 })
    }

    pub fn value(&self) -> u64 {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(l, _)| 1u64 << l)
            .sum()
    }
}

/// `log2(m / (m - 1))`, the length of every gap of the sequence.
pub fn log_ratio_gap(m: u64) -> f64 {
    debug_assert!(m >= 2);
    (1.0 / (m - 1) as f64).ln_1p() / LN_2
}

fn fractional_part(v: f64) -> f64 {
    v - v.floor()
}

/// The `n`-th term `{log2(2n - 1)}`, `n >= 1`.
pub fn term(n: u64) -> f64 {
    fractional_part(((2 * n - 1) as f64).log2())
}

/// First `n` terms of `{log2(2k - 1)}`, sorted.
pub fn generate(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let points = (1..=n as u64).map(term).collect();
    PointSet::generated(points, Source::LogSequence)
}

/// The rotation of `generate(n)` that starts at `y_1 = 0` and has strictly
/// ascending gaps `log2((2n - i + 1) / (2n - i))`, `i = 1..n-1`. The closing
/// gap `1 - y_n` is the largest.
pub fn generate_shifted(n: usize) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::invalid("the shifted form needs n >= 2"));
    }
    let two_n = 2.0 * n as f64;
    // y_j = log2(2n / (2n - j + 1)), evaluated directly rather than summed
    let points = (1..=n)
        .map(|j| -(-((j - 1) as f64) / two_n).ln_1p() / LN_2)
        .collect();
    PointSet::generated(points, Source::ShiftedAscending)
}

/// Raw circular gaps in position order, zero gaps allowed.
pub(crate) fn circular_gaps(points: &[f64]) -> Vec<f64> {
    let n = points.len();
    let mut gaps: Vec<f64> = points.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(points[0] + 1.0 - points[n - 1]);
    gaps
}

/// The `N` circular gaps in torus position order: `g_i = x_{i+1} - x_i` and
/// the wrap gap `x_1 + 1 - x_N` last.
pub fn empirical_gaps(ps: &PointSet) -> Result<GapProfile> {
    if ps.n_points() < 2 {
        return Err(Error::invalid("gaps need at least two points"));
    }
    GapProfile::new(circular_gaps(ps.points()))
}

/// The gaps predicted from the binary expansion of `n`: with `2^L <= n <
/// 2^{L+1}` and `n0 = 2 (n - 2^L)`, gap `i` is `log2(m / (m - 1))` with
/// `m = 2^{L+1} + i` for `i <= n0` and `m = n - n0 + i` otherwise.
///
/// Gaps come back in this index order, which need not be torus position
/// order; compare against [`empirical_gaps`] as multisets.
pub fn theoretical_gaps(n: usize) -> Result<GapProfile> {
    let exp = DyadicExpansion::of(n as u64)?;
    let n = n as u64;
    let base = 1u64 << (exp.top_index + 1);
    let gaps = (1..=n)
        .map(|i| {
            let m = if i <= exp.n0 { base + i } else { n - exp.n0 + i };
            log_ratio_gap(m)
        })
        .collect();
    GapProfile::new(gaps)
}

/// Largest circular gap.
pub fn dispersion(ps: &PointSet) -> Result<f64> {
    if ps.n_points() < 2 {
        return Err(Error::invalid("dispersion needs at least two points"));
    }
    Ok(circular_gaps(ps.points()).into_iter().fold(0.0, f64::max))
}

/// `log2((n + 1) / n)`, the dispersion of the first `n` terms.
pub fn dispersion_formula(n: usize) -> f64 {
    log_ratio_gap(n as u64 + 1)
}

/// What happens to the gaps of `generate(n - 1)` when `x_n` is inserted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitObservation {
    pub n: usize,
    /// Length of the gap of `generate(n - 1)` that contains `x_n`.
    pub parent: f64,
    /// Largest gap of `generate(n - 1)`.
    pub parent_dispersion: f64,
    /// The two pieces, smaller first.
    pub pieces: (f64, f64),
}

impl SplitObservation {
    /// Expected parent gap `log2(n / (n - 1))` and pieces
    /// `log2(2n / (2n - 1))`, `log2((2n - 1) / (2n - 2))`.
    pub fn expected(n: usize) -> (f64, (f64, f64)) {
        let n = n as u64;
        (log_ratio_gap(n), (log_ratio_gap(2 * n), log_ratio_gap(2 * n - 1)))
    }

    /// Largest deviation from [`SplitObservation::expected`], including the
    /// requirement that the split gap is the longest one.
    pub fn max_error(&self) -> f64 {
        let (parent, (a, b)) = Self::expected(self.n);
        [
            (self.parent - parent).abs(),
            (self.parent - self.parent_dispersion).abs(),
            (self.pieces.0 - a).abs(),
            (self.pieces.1 - b).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Inserts `x_n` into `generate(n - 1)` and records which gap it splits.
pub fn observe_split(n: usize) -> Result<SplitObservation> {
    if n < 3 {
        return Err(Error::invalid("split observation needs n >= 3"));
    }
    let prev = generate(n - 1)?;
    let pts = prev.points();
    let x = term(n as u64);
    let idx = pts.partition_point(|&p| p < x);
    let left = if idx == 0 { pts[pts.len() - 1] - 1.0 } else { pts[idx - 1] };
    let right = if idx == pts.len() { pts[0] + 1.0 } else { pts[idx] };
    let parent = if idx == 0 || idx == pts.len() {
        pts[0] + 1.0 - pts[pts.len() - 1]
    } else {
        right - left
    };
    let (a, b) = (x - left, right - x);
    Ok(SplitObservation {
        n,
        parent,
        parent_dispersion: dispersion(&prev)?,
        pieces: (a.min(b), a.max(b)),
    })
}

/// Whether some rotation of the position-ordered empirical gaps equals the
/// theoretical index order elementwise within `tol`.
pub fn positional_match(empirical: &GapProfile, theoretical: &GapProfile, tol: f64) -> bool {
    let e = empirical.gaps();
    let t = theoretical.gaps();
    if e.len() != t.len() {
        return false;
    }
    let n = e.len();
    (0..n)
        .filter(|&r| (e[r] - t[0]).abs() <= tol)
        .any(|r| (0..n).all(|i| (e[(r + i) % n] - t[i]).abs() <= tol))
}
