//! Closed-form results for the pair correlations of `{log2(2n - 1)}`.
//!
//! Everything here is a formula in `N`, `s` (and `alpha` for the weak
//! statistic); no points are generated.
//!
//! The central quantity is `c = 2^(s/N) - 1`. Right of any point of the
//! shifted (ascending-gap) arrangement at most `K_max = floor(2Nc / (1 + c))`
//! and at least `K_min = floor(Nc / (1 + c))` other points lie within
//! `s / N`. These feed the sandwich bounds on `F_N(s)` and, as `N` grows,
//! the limit
//!
//! ```text
//! F(s) = 3k     - (3k^2 + 2k)     / (4 log(2) s)   k even,
//! F(s) = 3k + 1 - (3k^2 + 4k + 1) / (4 log(2) s)   k odd,
//! ```
//!
//! on `k / log 4 <= s < (k + 1) / log 4`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const LN_4: f64 = 2.0 * LN_2;

/// Slope of the weak limit: `lim g(N, s, alpha) = s * WEAK_SLOPE` with
/// `WEAK_SLOPE = 2 * (3/4) * log 4 = 3 log 2`.
pub const WEAK_SLOPE: f64 = 3.0 * LN_2;

fn check_scale(s: f64) -> Result<()> {
    if !(s >= 0.0) || s.is_infinite() {
        return Err(Error::invalid(format!("s = {s} must be finite and >= 0")));
    }
    Ok(())
}

/// `c_{N,s} = exp(log 2 * s / N) - 1 = 2^(s/N) - 1`.
pub fn c_ns(n: usize, s: f64) -> f64 {
    (LN_2 * s / n as f64).exp_m1()
}

/// `C_{N,s,alpha} = 2^(s / N^alpha) - 1`.
pub fn c_ns_alpha(n: usize, s: f64, alpha: f64) -> f64 {
    (LN_2 * s / (n as f64).powf(alpha)).exp_m1()
}

/// `K_max`, `K_min` and the `c` they were computed from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborCounts {
    pub k_max: u64,
    pub k_min: u64,
    pub c: f64,
    pub n: usize,
    pub s: f64,
    pub alpha: f64,
}

impl NeighborCounts {
    fn from_c(n: usize, s: f64, alpha: f64, c: f64) -> Self {
        let ratio = c / (1.0 + c);
        // the floor of 2N c/(1+c) exceeds N only once s >= N, where the
        // window already covers the whole torus
        let k_max = ((2.0 * n as f64 * ratio).floor() as u64).min(n as u64);
        let k_min = ((n as f64 * ratio).floor() as u64).min(k_max);
        Self { k_max, k_min, c, n, s, alpha }
    }

    /// Counts for the classical window `s / N`.
    pub fn classical(n: usize, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        check_scale(s)?;
        Ok(Self::from_c(n, s, 1.0, c_ns(n, s)))
    }

    /// Counts for the weak window `s / N^alpha`.
    pub fn weak(n: usize, s: f64, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        check_scale(s)?;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("alpha = {alpha} must lie in [0, 1]")));
        }
        Ok(Self::from_c(n, s, alpha, c_ns_alpha(n, s, alpha)))
    }

    /// `K_max (K_max + 1) - K_min (K_min + 1)`.
    pub fn k_tilde(&self) -> u64 {
        k_tilde(self.k_max, self.k_min)
    }
}

pub fn k_max(n: usize, s: f64) -> Result<u64> {
    Ok(NeighborCounts::classical(n, s)?.k_max)
}

pub fn k_min(n: usize, s: f64) -> Result<u64> {
    Ok(NeighborCounts::classical(n, s)?.k_min)
}

/// `lim_N K_max(N, s) = floor(s log 4)`.
pub fn k_max_limit(s: f64) -> Result<u64> {
    check_scale(s)?;
    Ok((LN_4 * s).floor() as u64)
}

/// `lim_N K_min(N, s) = floor(s log 2)`.
pub fn k_min_limit(s: f64) -> Result<u64> {
    check_scale(s)?;
    Ok((LN_2 * s).floor() as u64)
}

pub fn k_tilde(k_max: u64, k_min: u64) -> u64 {
    debug_assert!(k_min <= k_max);
    k_max * (k_max + 1) - k_min * (k_min + 1)
}

pub fn k_tilde_ns(n: usize, s: f64) -> Result<u64> {
    Ok(NeighborCounts::classical(n, s)?.k_tilde())
}

/// Bounds on the number `J` of indices whose `k`-th cyclic neighbour (left
/// or right) lies within `s / N`:
/// `min(N, 2N - k(c+1)/c) <= J <= min(N, 2N - k/c)`.
///
/// Requires `1 <= k <= K_max(N, s)`.
pub fn j_bounds(n: usize, s: f64, k: u64) -> Result<(f64, f64)> {
    if !(s > 0.0) {
        return Err(Error::invalid("j bounds need s > 0"));
    }
    let counts = NeighborCounts::classical(n, s)?;
    if k == 0 || k > counts.k_max {
        return Err(Error::invalid(format!(
            "k = {k} must lie in 1..={} (K_max at N = {n}, s = {s})",
            counts.k_max
        )));
    }
    let (n, k, c) = (n as f64, k as f64, counts.c);
    let lower = n.min(2.0 * n - k * (c + 1.0) / c);
    let upper = n.min(2.0 * n - k / c);
    Ok((lower, upper))
}

/// Two-sided bound on `F_N(s)` with its ingredients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsCertificate {
    pub lower: f64,
    pub upper: f64,
    pub k_tilde: u64,
    pub counts: NeighborCounts,
}

impl BoundsCertificate {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// ```text
/// lower = 4 K_max - (2 + 1/N) K_min - (c + 1)/(c N) * K~
/// upper = lower + 2 K~ / N
/// ```
///
/// At `s = 0` both bounds are zero.
pub fn fn_bounds(n: usize, s: f64) -> Result<BoundsCertificate> {
    if n < 2 {
        return Err(Error::invalid("bounds need N >= 2"));
    }
    let counts = NeighborCounts::classical(n, s)?;
    let k_tilde = counts.k_tilde();
    if s == 0.0 {
        return Ok(BoundsCertificate { lower: 0.0, upper: 0.0, k_tilde, counts });
    }
    let nf = n as f64;
    let c = counts.c;
    let lower = 4.0 * counts.k_max as f64
        - (2.0 + 1.0 / nf) * counts.k_min as f64
        - (c + 1.0) / (c * nf) * k_tilde as f64;
    let upper = lower + 2.0 * k_tilde as f64 / nf;
    Ok(BoundsCertificate { lower, upper, k_tilde, counts })
}

/// One piece `F(s) = affine - coeff / (4 log(2) s)` on `[s_lo, s_hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub k: u64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub affine: f64,
    pub coeff: f64,
}

impl Piece {
    pub fn new(k: u64) -> Self {
        let kf = k as f64;
        let (affine, coeff) = if k % 2 == 0 {
            (3.0 * kf, 3.0 * kf * kf + 2.0 * kf)
        } else {
            (3.0 * kf + 1.0, 3.0 * kf * kf + 4.0 * kf + 1.0)
        };
        Self { k, s_lo: kf / LN_4, s_hi: (kf + 1.0) / LN_4, affine, coeff }
    }

    /// Evaluates the piece's formula at any `s` (not only inside the piece).
    pub fn eval(&self, s: f64) -> f64 {
        if self.coeff == 0.0 {
            return self.affine;
        }
        self.affine - self.coeff / (4.0 * LN_2 * s)
    }

    pub fn contains(&self, s: f64) -> bool {
        self.s_lo <= s && s < self.s_hi
    }

    /// Both real roots of `eval(s) = 2s`, i.e. of
    /// `2 s^2 - affine s + coeff / (4 log 2) = 0`, inside the piece or not.
    pub fn poisson_crossings(&self) -> Vec<f64> {
        let disc = self.affine * self.affine - 2.0 * self.coeff / LN_2;
        if disc < 0.0 {
            return Vec::new();
        }
        let root = disc.sqrt();
        vec![(self.affine - root) / 4.0, (self.affine + root) / 4.0]
    }
}

/// Index of the piece containing `s`, intervals closed on the left.
pub fn piece_index(s: f64) -> Result<u64> {
    check_scale(s)?;
    let mut k = (s * LN_4).floor() as u64;
    // settle rounding at the breakpoints in favour of the left-closed piece
    if k > 0 && s < Piece::new(k).s_lo {
        k -= 1;
    } else if s >= Piece::new(k + 1).s_lo {
        k += 1;
    }
    Ok(k)
}

/// Symbolic form of `F(s)` on `[0, (pieces.len()) / log 4)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLimit {
    pub pieces: Vec<Piece>,
}

impl PiecewiseLimit {
    /// Pieces `k = 0..count`.
    pub fn with_pieces(count: u64) -> Self {
        Self { pieces: (0..count).map(Piece::new).collect() }
    }

    /// Enough pieces to cover `[0, s_max]`.
    pub fn covering(s_max: f64) -> Result<Self> {
        Ok(Self::with_pieces(piece_index(s_max)? + 1))
    }

    pub fn eval(&self, s: f64) -> Option<f64> {
        let k = piece_index(s).ok()?;
        self.pieces.get(k as usize).map(|p| p.eval(s))
    }

    /// Largest disagreement between neighbouring pieces at their shared
    /// breakpoint.
    pub fn max_continuity_gap(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| (w[0].eval(w[1].s_lo) - w[1].eval(w[1].s_lo)).abs())
            .fold(0.0, f64::max)
    }
}

/// `F(s)`, the limit of `F_N(s)`, from the piecewise closed form.
pub fn f_limit(s: f64) -> Result<f64> {
    Ok(Piece::new(piece_index(s)?).eval(s))
}

/// The symbolic form of [`f_limit`] covering `[0, s_max]`.
pub fn f_limit_piecewise(s_max: f64) -> Result<PiecewiseLimit> {
    PiecewiseLimit::covering(s_max)
}

/// `F(s)` from the limits of the neighbour counts,
///
/// ```text
/// 4 floor(s log 4) - 2 floor(s log 2) - K~ / (s log 2),
/// K~ = a (a + 1) - b (b + 1),  a = floor(s log 4),  b = floor(s log 2).
/// ```
///
/// This is the limit of both sandwich bounds, since `(c + 1)/(c N)` tends
/// to `1 / (s log 2)`.
pub fn f_limit_floor_form(s: f64) -> Result<f64> {
    check_scale(s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let a = k_max_limit(s)?;
    let b = k_min_limit(s)?;
    let kt = k_tilde(a, b) as f64;
    Ok(4.0 * a as f64 - 2.0 * b as f64 - kt / (LN_2 * s))
}

/// A solution of `F(s) = 2s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub s: f64,
    pub piece: u64,
    /// `F(s) - 2s`.
    pub residual: f64,
}

/// Upper end of the fixed point scan.
pub const FIXED_POINT_SCAN_LIMIT: f64 = 100.0;

/// All `s` in `[0, FIXED_POINT_SCAN_LIMIT]` with `F(s) = 2s`, found by
/// solving the quadratic on every piece and keeping the roots that fall
/// inside their piece.
pub fn fixed_points() -> Vec<FixedPoint> {
    let limit = PiecewiseLimit::covering(FIXED_POINT_SCAN_LIMIT).expect("finite scan limit");
    let mut found: Vec<FixedPoint> = Vec::new();
    for piece in &limit.pieces {
        for s in piece.poisson_crossings() {
            if piece.contains(s) && s <= FIXED_POINT_SCAN_LIMIT && !found.iter().any(|f| f.s == s) {
                found.push(FixedPoint { s, piece: piece.k, residual: piece.eval(s) - 2.0 * s });
            }
        }
    }
    found
}

/// The non-trivial fixed point written out in closed form,
/// `(52 log 2 - sqrt(2704 log(2)^2 - 1872 log 2)) / (4 log 2)`.
pub fn nontrivial_fixed_point_closed_form() -> f64 {
    (52.0 * LN_2 - (2704.0 * LN_2 * LN_2 - 1872.0 * LN_2).sqrt()) / (4.0 * LN_2)
}

fn check_weak(n: usize, s: f64, alpha: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid("the weak bound needs N >= 2"));
    }
    if !(s > 0.0) || s.is_infinite() {
        return Err(Error::invalid("the weak bound needs finite s > 0"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha = {alpha} must lie in [0, 1)")));
    }
    Ok(())
}

/// Lower bound on the weak statistic `F_N^alpha(s)`:
///
/// ```text
/// g = 4 K_max / N^(1-a) - 2 K_min / N^(1-a) - 2 / N^(2-a)
///     - K~ (C + 1) / (C N^(2-a))
/// ```
///
/// with `K_max`, `K_min`, `K~` taken from `C = 2^(s / N^a) - 1`.
pub fn weak_lower_bound(n: usize, s: f64, alpha: f64) -> Result<f64> {
    check_weak(n, s, alpha)?;
    let counts = NeighborCounts::weak(n, s, alpha)?;
    let nf = n as f64;
    let lead = nf.powf(1.0 - alpha);
    let norm = nf.powf(2.0 - alpha);
    let c = counts.c;
    Ok(4.0 * counts.k_max as f64 / lead - 2.0 * counts.k_min as f64 / lead - 2.0 / norm
        - counts.k_tilde() as f64 * (c + 1.0) / (c * norm))
}

/// `lim_N g(N, s, alpha) = 2s * (3/4) log 4`, the same for every
/// `alpha < 1`.
pub fn weak_limit(s: f64, alpha: f64) -> Result<f64> {
    check_scale(s)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::invalid(format!(
            "the weak limit needs alpha in [0, 1), got {alpha}; use f_limit for alpha = 1"
        )));
    }
    Ok(WEAK_SLOPE * s)
}
