//! Sweeps that put the empirical statistics next to the closed forms.
//!
//! Each sweep returns data: a [`SweepReport`] whose cases carry the observed
//! value, the accepted interval and a pass flag, or a [`CurveTable`] for the
//! curve studies. Nothing here panics on a failed comparison.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::paircorr::{pcf_fast, validate_grid, PcfQuery};
use crate::seq::{self, PointSet};
use crate::table::{CurveMeta, CurveTable};
use crate::theory::{self, LN_4};
use crate::{Error, Result};

/// Grid points with `s log 4` closer than this to an integer are treated as
/// breakpoint neighbourhoods and left out of sweeps.
pub const BREAKPOINT_RADIUS: f64 = 0.02;

/// Agreement required between gap formulas and measured gaps.
pub const GAP_TOLERANCE: f64 = 1e-12;

/// Seed of the uniform random baseline.
pub const POISSON_SEED: u64 = 0x5eed_2024;

pub const POISSON_TOLERANCE: f64 = 0.15;

/// Largest `|F_N - F|` accepted by the convergence suite, per `N`.
pub const CONVERGENCE_TOLERANCES: [(usize, f64); 2] = [(1000, 0.2), (100_000, 0.05)];

/// Accepted distance of `F_N^alpha(s) / s` from the weak slope.
pub const WEAK_TOLERANCE: f64 = 0.1;

/// Accepted distance of the weak lower bound from the weak limit at
/// `N = 10^8`.
pub const WEAK_FORMULA_TOLERANCE: f64 = 1e-2;

pub fn near_breakpoint(s: f64) -> bool {
    let x = s * LN_4;
    (x - x.round()).abs() <= BREAKPOINT_RADIUS
}

/// `count` values spread evenly over `(lo, hi]`, each nudged left until it
/// clears the breakpoint neighbourhoods.
pub fn off_breakpoint_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi - lo) / count as f64;
    (1..=count)
        .map(|i| {
            let mut s = lo + step * i as f64;
            while near_breakpoint(s) {
                s -= 0.05 / LN_4;
            }
            s
        })
        .collect()
}

/// `lo, lo + step, ...` up to `hi` inclusive (with a little slack for
/// rounding), without the breakpoint neighbourhoods.
pub fn stepped_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| lo + step * i as f64).filter(|s| !near_breakpoint(*s)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCase {
    pub label: String,
    pub inputs: BTreeMap<String, f64>,
    pub observed: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
}

impl SweepCase {
    pub fn within(
        label: impl Into<String>,
        inputs: &[(&str, f64)],
        observed: f64,
        lower: f64,
        upper: f64,
    ) -> Self {
        Self {
            label: label.into(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            observed,
            lower,
            upper,
            pass: lower <= observed && observed <= upper,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub name: String,
    pub cases: Vec<SweepCase>,
    pub pass_count: usize,
    pub fail_count: usize,
    /// Observations that are reported but not judged.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl SweepReport {
    pub fn new(name: impl Into<String>, cases: Vec<SweepCase>) -> Self {
        let pass_count = cases.iter().filter(|c| c.pass).count();
        let fail_count = cases.len() - pass_count;
        Self { name: name.into(), cases, pass_count, fail_count, notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.fail_count == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepCase> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let report: Self = serde_json::from_str(s)?;
        if report.pass_count + report.fail_count != report.cases.len() {
            return Err(Error::invalid("pass and fail counts do not add up"));
        }
        Ok(report)
    }

    /// One row per case. Floats use the shortest representation that parses
    /// back to the same value, so the cases round-trip exactly. The report
    /// name and notes are not part of the CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["label", "inputs", "observed", "lower", "upper", "pass"])?;
        for c in &self.cases {
            let inputs = c
                .inputs
                .iter()
                .map(|(k, v)| format!("{k}={v:?}"))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                c.label.clone(),
                inputs,
                format!("{:?}", c.observed),
                format!("{:?}", c.lower),
                format!("{:?}", c.upper),
                c.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R, name: impl Into<String>) -> Result<Self> {
        let bad = |what: &str| Error::invalid(format!("malformed report csv: {what}"));
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(s));
        let mut cases = Vec::new();
        for record in csv::Reader::from_reader(input).records() {
            let r = record?;
            let field = |i: usize| r.get(i).ok_or_else(|| bad("missing field"));
            let mut inputs = BTreeMap::new();
            for pair in field(1)?.split(';').filter(|p| !p.is_empty()) {
                let (k, v) = pair.split_once('=').ok_or_else(|| bad(pair))?;
                inputs.insert(k.to_string(), num(v)?);
            }
            cases.push(SweepCase {
                label: field(0)?.to_string(),
                inputs,
                observed: num(field(2)?)?,
                lower: num(field(3)?)?,
                upper: num(field(4)?)?,
                pass: field(5)?.parse().map_err(|_| bad("pass flag"))?,
            });
        }
        Ok(Self::new(name, cases))
    }
}

/// Checks `F_N(s)` of the log sequence against the sandwich bounds for
/// every `(N, s)`.
pub fn run_sandwich_sweep(n_list: &[usize], s_grid: &[f64]) -> Result<SweepReport> {
    if n_list.iter().any(|&n| n < 2) {
        return Err(Error::invalid("sandwich sweep needs N >= 2"));
    }
    if let Some(s) = s_grid.iter().find(|s| near_breakpoint(**s) || !(**s > 0.0)) {
        return Err(Error::invalid(format!("s = {s} is not a positive off-breakpoint value")));
    }
    let mut cases = Vec::with_capacity(n_list.len() * s_grid.len());
    for &n in n_list {
        let ps = seq::generate(n)?;
        let row: Vec<SweepCase> = s_grid
            .par_iter()
            .map(|&s| {
                let f = pcf_fast(&ps, PcfQuery::classical(s)?);
                let b = theory::fn_bounds(n, s)?;
                Ok(SweepCase::within("sandwich", &[("n", n as f64), ("s", s)], f, b.lower, b.upper))
            })
            .collect::<Result<_>>()?;
        cases.extend(row);
    }
    Ok(SweepReport::new("sandwich", cases))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    /// Columns `F_N=<n>` per `N`, then `F`.
    pub table: CurveTable,
    /// `max_s |F_N(s) - F(s)|` per `N`, in input order.
    pub max_deviation: Vec<(usize, f64)>,
}

impl ConvergenceStudy {
    pub fn deviation_nonincreasing(&self) -> bool {
        self.max_deviation.windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

/// `F_N(s)` of the log sequence for each `N` next to the limit `F(s)`.
pub fn run_convergence_study(n_list: &[usize], s_grid: &[f64]) -> Result<ConvergenceStudy> {
    validate_grid(s_grid)?;
    let limit: Vec<f64> = s_grid.iter().map(|&s| theory::f_limit(s)).collect::<Result<_>>()?;
    let meta = CurveMeta {
        n_points: n_list.iter().copied().max().unwrap_or(0),
        alpha: 1.0,
        generator: "LogSequence".into(),
    };
    let mut table = CurveTable::new(s_grid.to_vec(), meta)?;
    let mut max_deviation = Vec::new();
    for &n in n_list {
        let ps = seq::generate(n)?;
        let values: Vec<f64> = s_grid
            .par_iter()
            .map(|&s| Ok(pcf_fast(&ps, PcfQuery::classical(s)?)))
            .collect::<Result<_>>()?;
        let dev = values.iter().zip(&limit).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        max_deviation.push((n, dev));
        table.push_column(format!("F_N={n}"), values)?;
    }
    table.push_column("F", limit)?;
    Ok(ConvergenceStudy { table, max_deviation })
}

/// Judges a convergence study: each `N` with a tolerance must stay within
/// it, and the deviation must not grow with `N`.
pub fn convergence_report(study: &ConvergenceStudy, tolerances: &[(usize, f64)]) -> SweepReport {
    let mut cases: Vec<SweepCase> = study
        .max_deviation
        .iter()
        .filter_map(|&(n, dev)| {
            let tol = tolerances.iter().find(|(m, _)| *m == n)?.1;
            Some(SweepCase::within("max |F_N - F|", &[("n", n as f64)], dev, 0.0, tol))
        })
        .collect();
    for w in study.max_deviation.windows(2) {
        let ((n0, d0), (n1, d1)) = (w[0], w[1]);
        cases.push(SweepCase::within(
            "deviation nonincreasing in N",
            &[("n_prev", n0 as f64), ("n", n1 as f64)],
            d1,
            0.0,
            d0,
        ));
    }
    SweepReport::new("convergence", cases)
}

/// For `n = 2..=n_max`: theoretical against measured gap multisets, the
/// dispersion formula, and (from `n = 3`) the split of the longest gap by
/// the newest point. Whether the theoretical index order is a rotation of
/// torus position order is recorded in the notes.
pub fn run_gap_validation(n_max: usize) -> Result<SweepReport> {
    let per_n: Vec<(Vec<SweepCase>, bool)> = (2..=n_max.max(1))
        .into_par_iter()
        .filter(|&n| n >= 2)
        .map(|n| {
            let nf = n as f64;
            let ps = seq::generate(n)?;
            let empirical = seq::empirical_gaps(&ps)?;
            let theoretical = seq::theoretical_gaps(n)?;
            let dist = theoretical.multiset_distance(&empirical).unwrap_or(f64::INFINITY);
            let disp = seq::dispersion(&ps)?;
            let mut cases = vec![
                SweepCase::within("gap multiset", &[("n", nf)], dist, 0.0, GAP_TOLERANCE),
                SweepCase::within(
                    "dispersion formula",
                    &[("n", nf)],
                    (disp - seq::dispersion_formula(n)).abs(),
                    0.0,
                    GAP_TOLERANCE,
                ),
            ];
            if n >= 3 {
                let split = seq::observe_split(n)?;
                cases.push(SweepCase::within(
                    "longest gap split",
                    &[("n", nf)],
                    split.max_error(),
                    0.0,
                    GAP_TOLERANCE,
                ));
            }
            let positional = seq::positional_match(&empirical, &theoretical, GAP_TOLERANCE);
            Ok((cases, positional))
        })
        .collect::<Result<_>>()?;

    let total = per_n.len();
    let positional = per_n.iter().filter(|(_, p)| *p).count();
    let mut report =
        SweepReport::new("gaps", per_n.into_iter().flat_map(|(cases, _)| cases).collect());
    report.notes.push(format!(
        "theoretical index order is a rotation of torus position order for {positional} of {total} N"
    ));
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakStudy {
    /// Columns `F_N^a=<alpha>` per alpha, `weak_limit` and `poisson` (`2s`).
    pub table: CurveTable,
    /// `max_s |F_N^a(s) - weak_limit(s)|` per alpha, in input order.
    pub deviations: Vec<(f64, f64)>,
}

impl WeakStudy {
    pub fn deviation(&self, alpha: f64) -> Option<f64> {
        self.deviations.iter().find(|(a, _)| *a == alpha).map(|(_, d)| *d)
    }
}

/// Empirical weak statistic of `generate(n)` for each `alpha < 1` next to
/// the weak limit line and the Poissonian line.
pub fn run_weak_study(n: usize, alpha_list: &[f64], s_grid: &[f64]) -> Result<WeakStudy> {
    validate_grid(s_grid)?;
    if let Some(a) = alpha_list.iter().find(|a| !(0.0..1.0).contains(*a)) {
        return Err(Error::invalid(format!("alpha = {a} must lie in [0, 1)")));
    }
    let ps = seq::generate(n)?;
    let limit: Vec<f64> = s_grid.iter().map(|&s| theory::WEAK_SLOPE * s).collect();
    let meta = CurveMeta {
        n_points: n,
        alpha: alpha_list.first().copied().unwrap_or(f64::NAN),
        generator: "LogSequence".into(),
    };
    let mut table = CurveTable::new(s_grid.to_vec(), meta)?;
    let mut deviations = Vec::new();
    for &alpha in alpha_list {
        let values: Vec<f64> = s_grid
            .par_iter()
            .map(|&s| Ok(pcf_fast(&ps, PcfQuery::new(s, alpha)?)))
            .collect::<Result<_>>()?;
        let dev = values.iter().zip(&limit).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        deviations.push((alpha, dev));
        table.push_column(format!("F_N^a={alpha}"), values)?;
    }
    table.push_column("weak_limit", limit)?;
    table.push_column("poisson", s_grid.iter().map(|s| 2.0 * s).collect())?;
    Ok(WeakStudy { table, deviations })
}

/// `n` uniform points from a ChaCha8 stream seeded with `seed`.
pub fn uniform_points(n: usize, seed: u64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointSet::from_points((0..n).map(|_| rng.gen::<f64>()).collect())
}

/// `|F_N(s) - 2s|` for seeded uniform random points.
pub fn run_poisson_baseline(n: usize, seed: u64, s_list: &[f64]) -> Result<SweepReport> {
    let ps = uniform_points(n, seed)?;
    let cases = s_list
        .iter()
        .map(|&s| {
            let f = pcf_fast(&ps, PcfQuery::classical(s)?);
            Ok(SweepCase::within(
                "|F_N(s) - 2s|, uniform random",
                &[("n", n as f64), ("s", s)],
                (f - 2.0 * s).abs(),
                0.0,
                POISSON_TOLERANCE,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport::new("poisson", cases))
}

/// The verification suites behind `lowdisp verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Sandwich,
    Gaps,
    Convergence,
    Weak,
    Poisson,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Gaps, Suite::Sandwich, Suite::Convergence, Suite::Weak, Suite::Poisson];

    /// Runs the suite with its default parameters.
    pub fn run(self) -> Result<SweepReport> {
        match self {
            Suite::Sandwich => {
                run_sandwich_sweep(&[100, 500, 1000, 5000, 10_000], &off_breakpoint_grid(0.0, 10.0, 40))
            }
            Suite::Gaps => run_gap_validation(2048),
            Suite::Convergence => {
                let ns: Vec<usize> = CONVERGENCE_TOLERANCES.iter().map(|(n, _)| *n).collect();
                let study = run_convergence_study(&ns, &stepped_grid(0.0, 5.0, 0.25))?;
                Ok(convergence_report(&study, &CONVERGENCE_TOLERANCES))
            }
            Suite::Weak => weak_suite(1_000_000),
            Suite::Poisson => run_poisson_baseline(100_000, POISSON_SEED, &[0.5, 1.0, 2.0]),
        }
    }
}

fn weak_suite(n: usize) -> Result<SweepReport> {
    let s_grid = [0.5, 1.0, 2.0];
    let study = run_weak_study(n, &[0.25, 0.5, 0.75], &s_grid)?;
    let mid = study.table.column("F_N^a=0.5").expect("alpha 0.5 column");
    let mut cases: Vec<SweepCase> = s_grid
        .iter()
        .zip(mid)
        .map(|(&s, &f)| {
            SweepCase::within(
                "F_N^a(s) / s",
                &[("n", n as f64), ("alpha", 0.5), ("s", s)],
                f / s,
                theory::WEAK_SLOPE - WEAK_TOLERANCE,
                theory::WEAK_SLOPE + WEAK_TOLERANCE,
            )
        })
        .collect();
    let (fast, slow) = (study.deviation(0.25).unwrap(), study.deviation(0.75).unwrap());
    cases.push(SweepCase::within(
        "deviation at alpha 0.25 <= deviation at alpha 0.75",
        &[("n", n as f64)],
        fast,
        0.0,
        slow,
    ));
    let g = theory::weak_lower_bound(100_000_000, 1.0, 0.5)?;
    let lim = theory::weak_limit(1.0, 0.5)?;
    cases.push(SweepCase::within(
        "|g(N, s, a) - weak limit|",
        &[("n", 1e8), ("alpha", 0.5), ("s", 1.0)],
        (g - lim).abs(),
        0.0,
        WEAK_FORMULA_TOLERANCE,
    ));
    let mut report = SweepReport::new("weak", cases);
    report.notes.push(format!(
        "weak slope {:.6} differs from the Poissonian slope 2",
        theory::WEAK_SLOPE
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_avoid_breakpoints() {
        let g = off_breakpoint_grid(0.0, 10.0, 40);
        assert_eq!(g.len(), 40);
        assert!(g.iter().all(|s| *s > 0.0 && *s <= 10.0 && !near_breakpoint(*s)));
        assert!(g.windows(2).all(|w| w[0] < w[1]));

        let g = stepped_grid(0.0, 5.0, 0.25);
        // s = 0 is the first breakpoint
        assert!(!g.contains(&0.0) && g.contains(&5.0));
        assert!(g.iter().all(|s| !near_breakpoint(*s)));
    }

    #[test]
    fn sandwich_single_case() {
        let r = run_sandwich_sweep(&[1000], &[1.0]).unwrap();
        assert_eq!(r.cases.len(), 1);
        assert!(r.passed());
    }

    #[test]
    fn sandwich_empty_grid() {
        let r = run_sandwich_sweep(&[1000], &[]).unwrap();
        assert!(r.cases.is_empty());
        assert_eq!((r.pass_count, r.fail_count), (0, 0));
    }

    #[test]
    fn sandwich_rejects_breakpoints() {
        assert!(run_sandwich_sweep(&[1000], &[1.0 / LN_4]).is_err());
        assert!(run_sandwich_sweep(&[1], &[1.0]).is_err());
    }

    #[test]
    fn gap_validation_small() {
        let r = run_gap_validation(64).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        // n = 2 has no split case
        assert_eq!(r.cases.len(), 63 * 2 + 62);
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn convergence_small() {
        let grid = stepped_grid(0.0, 5.0, 0.25);
        let study = run_convergence_study(&[1000], &grid).unwrap();
        let f = study.table.column("F").unwrap();
        for (s, v) in grid.iter().zip(f) {
            assert_eq!(*v, theory::f_limit(*s).unwrap());
        }
        assert!(study.max_deviation[0].1 <= 0.2);
    }

    #[test]
    fn report_round_trips() {
        let mut r = SweepReport::new(
            "demo",
            vec![
                SweepCase::within("a", &[("n", 3.0), ("s", 0.1)], 1.0 / 3.0, 0.0, 1.0),
                SweepCase::within("b", &[], 2.5, 0.0, 1.0),
            ],
        );
        r.notes.push("note".into());
        assert_eq!(SweepReport::from_json_str(&r.to_json_string().unwrap()).unwrap(), r);

        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let back = SweepReport::read_csv(buf.as_slice(), "demo").unwrap();
        assert_eq!(back.cases, r.cases);
        assert_eq!((back.pass_count, back.fail_count), (1, 1));
    }

    #[test]
    fn uniform_points_are_seeded() {
        let a = uniform_points(100, 7).unwrap();
        let b = uniform_points(100, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, uniform_points(100, 8).unwrap());
    }
}
