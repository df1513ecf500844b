//! The `lowdisp` command line.
//!
//! Data goes to standard output (or `--output`), diagnostics to standard
//! error. Exit status: 0 on success, 1 when a verification suite fails or an
//! output cannot be written, 2 for usage errors.
//!
//! A relative `--output` path is resolved against `$LOWDISP_OUTPUT_DIR`
//! when that variable is set.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::harness::{self, Suite, SweepReport};
use crate::paircorr;
use crate::table::{format_sig, CurveMeta, CurveTable};
use crate::{seq, theory, Error, Result};

pub const OUTPUT_DIR_ENV: &str = "LOWDISP_OUTPUT_DIR";

const DEFAULT_N: &str = "1000";
const DEFAULT_RANGE: &str = "0:5:0.05";

#[derive(Debug, Parser)]
#[command(name = "lowdisp", version, about = "Pair correlation statistics of {log2(2n - 1)}")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write data here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first N points, sorted.
    Generate {
        #[arg(long, default_value = DEFAULT_N)]
        n: usize,
        /// Print the ascending-gap rotation instead.
        #[arg(long)]
        shifted: bool,
    },
    /// Print the N circular gaps.
    Gaps {
        #[arg(long, default_value = DEFAULT_N)]
        n: usize,
        /// Gaps from the binary expansion formula rather than measured ones.
        #[arg(long)]
        theoretical: bool,
    },
    /// Empirical pair correlation F_N(s), or the weak variant for alpha < 1.
    Pcf {
        #[arg(long, default_value = DEFAULT_N)]
        n: usize,
        #[command(flatten)]
        scale: ScaleArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Add the limit F(s) as a column (alpha = 1 only).
        #[arg(long)]
        with_limit: bool,
    },
    /// The limit F(s).
    Limit {
        #[command(flatten)]
        scale: ScaleArgs,
    },
    /// Sandwich bounds on F_N(s).
    Bounds {
        #[arg(long, default_value = DEFAULT_N)]
        n: usize,
        #[command(flatten)]
        scale: ScaleArgs,
    },
    /// Weak statistic for several alpha next to its limit line.
    Weak {
        #[arg(long, default_value = DEFAULT_N)]
        n: usize,
        /// Comma separated exponents in [0, 1).
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        alpha: Vec<f64>,
        #[arg(long, default_value = DEFAULT_RANGE)]
        s_range: SRange,
    },
    /// Solutions of F(s) = 2s with residuals.
    FixedPoints,
    /// Run verification sweeps; exit status 1 if any case fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Args)]
struct ScaleArgs {
    /// A single scale s.
    #[arg(long, conflicts_with = "s_range")]
    s: Option<f64>,
    /// Scales lo:hi:step, both ends inclusive.
    #[arg(long)]
    s_range: Option<SRange>,
}

impl ScaleArgs {
    fn grid(&self) -> Result<Vec<f64>> {
        match (self.s, &self.s_range) {
            (Some(s), _) => Ok(vec![s]),
            (None, Some(r)) => Ok(r.points()),
            (None, None) => Ok(SRange::from_str(DEFAULT_RANGE).expect("default range").points()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Sandwich,
    Gaps,
    Convergence,
    Weak,
    Poisson,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Sandwich => vec![Suite::Sandwich],
            SuiteArg::Gaps => vec![Suite::Gaps],
            SuiteArg::Convergence => vec![Suite::Convergence],
            SuiteArg::Weak => vec![Suite::Weak],
            SuiteArg::Poisson => vec![Suite::Poisson],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

/// An inclusive range `lo:hi:step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl SRange {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|i| self.lo + self.step * i as f64).collect()
    }
}

impl FromStr for SRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("expected lo:hi:step, got {s:?}"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
        let r = SRange { lo: num(lo)?, hi: num(hi)?, step: num(step)? };
        if !(r.lo >= 0.0 && r.lo <= r.hi && r.step > 0.0 && r.hi.is_finite()) {
            return Err(format!("need 0 <= lo <= hi and step > 0, got {s:?}"));
        }
        Ok(r)
    }
}

/// A plain numeric table for outputs that are not curves over `s`.
#[derive(Debug, Serialize)]
struct Rows {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Rows {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }
}

enum Output {
    Rows(Rows),
    Curve(CurveTable),
    Reports(Vec<SweepReport>),
}

impl Output {
    fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match (self, format) {
            (Output::Rows(r), Format::Csv) => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&r.columns)?;
                for row in &r.rows {
                    w.write_record(row.iter().map(|v| format_sig(*v)))?;
                }
                w.flush()?;
            }
            (Output::Rows(r), Format::Json) => {
                serde_json::to_writer_pretty(&mut *out, r)?;
                writeln!(out)?;
            }
            (Output::Curve(t), Format::Csv) => t.write_csv(out)?,
            (Output::Curve(t), Format::Json) => writeln!(out, "{}", t.to_json_string()?)?,
            (Output::Reports(reports), Format::Csv) => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["suite", "label", "inputs", "observed", "lower", "upper", "pass"])?;
                for r in reports {
                    for c in &r.cases {
                        let inputs = c
                            .inputs
                            .iter()
                            .map(|(k, v)| format!("{k}={}", format_sig(*v)))
                            .collect::<Vec<_>>()
                            .join(";");
                        w.write_record([
                            r.name.clone(),
                            c.label.clone(),
                            inputs,
                            format_sig(c.observed),
                            format_sig(c.lower),
                            format_sig(c.upper),
                            c.pass.to_string(),
                        ])?;
                    }
                }
                w.flush()?;
            }
            (Output::Reports(reports), Format::Json) => {
                serde_json::to_writer_pretty(&mut *out, reports)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn execute(command: &Command, err: &mut dyn Write) -> Result<(Output, bool)> {
    let ok = |o| Ok((o, true));
    match command {
        Command::Generate { n, shifted } => {
            let ps = if *shifted { seq::generate_shifted(*n)? } else { seq::generate(*n)? };
            let mut rows = Rows::new(&["index", "x"]);
            rows.rows = ps.points().iter().enumerate().map(|(i, x)| vec![(i + 1) as f64, *x]).collect();
            ok(Output::Rows(rows))
        }
        Command::Gaps { n, theoretical } => {
            let gaps = if *theoretical {
                seq::theoretical_gaps(*n)?
            } else {
                seq::empirical_gaps(&seq::generate(*n)?)?
            };
            let mut rows = Rows::new(&["i", "gap"]);
            rows.rows = gaps.gaps().iter().enumerate().map(|(i, g)| vec![(i + 1) as f64, *g]).collect();
            ok(Output::Rows(rows))
        }
        Command::Pcf { n, scale, alpha, with_limit } => {
            let grid = scale.grid()?;
            let ps = seq::generate(*n)?;
            let mut table = paircorr::pcf_curve(&ps, &grid, *alpha)?;
            if *with_limit {
                if *alpha != 1.0 {
                    return Err(Error::invalid("--with-limit needs alpha = 1"));
                }
                let f = grid.iter().map(|&s| theory::f_limit(s)).collect::<Result<_>>()?;
                table.push_column("F", f)?;
            }
            ok(Output::Curve(table))
        }
        Command::Limit { scale } => {
            let grid = scale.grid()?;
            let f = grid.iter().map(|&s| theory::f_limit(s)).collect::<Result<_>>()?;
            let meta = CurveMeta { n_points: 0, alpha: 1.0, generator: "limit".into() };
            let mut table = CurveTable::new(grid, meta)?;
            table.push_column("F", f)?;
            ok(Output::Curve(table))
        }
        Command::Bounds { n, scale } => {
            let mut rows = Rows::new(&["s", "lower", "upper", "k_max", "k_min", "k_tilde", "c"]);
            for s in scale.grid()? {
                let b = theory::fn_bounds(*n, s)?;
                rows.rows.push(vec![
                    s,
                    b.lower,
                    b.upper,
                    b.counts.k_max as f64,
                    b.counts.k_min as f64,
                    b.k_tilde as f64,
                    b.counts.c,
                ]);
            }
            ok(Output::Rows(rows))
        }
        Command::Weak { n, alpha, s_range } => {
            let study = harness::run_weak_study(*n, alpha, &s_range.points())?;
            for (a, d) in &study.deviations {
                let _ = writeln!(err, "alpha {}: max |F_N^a - weak limit| = {}", a, format_sig(*d));
            }
            ok(Output::Curve(study.table))
        }
        Command::FixedPoints => {
            let mut rows = Rows::new(&["s", "F", "residual", "piece"]);
            for fp in theory::fixed_points() {
                rows.rows.push(vec![fp.s, theory::f_limit(fp.s)?, fp.residual, fp.piece as f64]);
            }
            ok(Output::Rows(rows))
        }
        Command::Verify { suite } => {
            let mut reports = Vec::new();
            let mut all_pass = true;
            for s in suite.suites() {
                let report = s.run()?;
                let _ = writeln!(
                    err,
                    "{}: {} ({} passed, {} failed)",
                    report.name,
                    if report.passed() { "PASS" } else { "FAIL" },
                    report.pass_count,
                    report.fail_count
                );
                for note in &report.notes {
                    let _ = writeln!(err, "  note: {note}");
                }
                all_pass &= report.passed();
                reports.push(report);
            }
            Ok((Output::Reports(reports), all_pass))
        }
    }
}

fn resolve_output(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };

    let (output, passed) = match execute(&cli.command, err) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if matches!(e, Error::InvalidArgument(_)) { 2 } else { 1 };
        }
    };

    let written = match &cli.output {
        Some(path) => {
            let path = resolve_output(path);
            File::create(&path).map_err(Error::from).and_then(|f| {
                let mut w = BufWriter::new(f);
                output.write(cli.format, &mut w)?;
                w.flush()?;
                Ok(())
            })
        }
        None => output.write(cli.format, out),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    if passed { 0 } else { 1 }
}
