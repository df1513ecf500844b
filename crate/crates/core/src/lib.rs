//! Pair correlation statistics for the low-dispersion sequence
//! `x_n = {log2(2n - 1)}`.
//!
//! The crate is split into:
//!
//! - [`seq`]: point generation, gap structure and dispersion;
//! - [`paircorr`]: empirical pair correlation counters (an `O(N^2)` oracle and
//!   an `O(N)` two-pointer kernel) for the classical and the weak statistic;
//! - [`theory`]: the closed-form objects (neighbour counts, sandwich bounds,
//!   the piecewise limit `F(s)`, its fixed points, the weak limit);
//! - [`harness`]: sweeps comparing the empirical statistics to the theory;
//! - [`table`]: CSV/JSON serialization of curve tables;
//! - [`cli`]: the `lowdisp` command line front end.
//!
//! ```
//! use lowdisp::{paircorr, seq, theory};
//!
//! let points = seq::generate(1000).unwrap();
//! let q = paircorr::PcfQuery::classical(1.0).unwrap();
//! let empirical = paircorr::pcf_fast(&points, q);
//! let bounds = theory::fn_bounds(1000, 1.0).unwrap();
//! assert!(bounds.lower <= empirical && empirical <= bounds.upper);
//! ```

pub mod cli;
mod error;
pub mod harness;
pub mod paircorr;
pub mod seq;
pub mod table;
pub mod theory;

pub use error::{Error, Result};
pub use paircorr::{PcfQuery, pcf_curve, pcf_fast, pcf_naive, torus_distance};
pub use seq::{DyadicExpansion, GapProfile, PointSet, Source};
pub use table::CurveTable;
pub use theory::{BoundsCertificate, NeighborCounts, PiecewiseLimit};

/// Tolerance on the torus conservation law `sum(gaps) = 1`.
pub const GAP_SUM_TOLERANCE: f64 = 1e-12;

/// Compensated (Neumaier) summation.
pub(crate) fn stable_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
