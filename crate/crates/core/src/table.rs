//! Tabulated curves over an `s` grid and their CSV/JSON forms.
//!
//! CSV layout: header `s,<column names>`, one row per grid point, every
//! number written with 12 significant digits and a `.` decimal point.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Significant digits used for every number in tabular output.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub n_points: usize,
    pub alpha: f64,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// A strictly ascending `s` grid with named value columns of equal length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    s_grid: Vec<f64>,
    columns: Vec<Column>,
    meta: CurveMeta,
}

impl CurveTable {
    pub fn new(s_grid: Vec<f64>, meta: CurveMeta) -> Result<Self> {
        if s_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("the s grid must be strictly ascending"));
        }
        Ok(Self { s_grid, columns: Vec::new(), meta })
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.s_grid.len() {
            return Err(Error::invalid(format!(
                "column {name} has {} values for {} grid points",
                values.len(),
                self.s_grid.len()
            )));
        }
        if name == "s" || self.column(&name).is_some() {
            return Err(Error::invalid(format!("duplicate column name {name}")));
        }
        self.columns.push(Column { name, values });
        Ok(())
    }

    pub fn s_grid(&self) -> &[f64] {
        &self.s_grid
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }

    pub fn meta(&self) -> &CurveMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["s".to_string()];
        header.extend(self.columns.iter().map(|c| c.name.clone()));
        w.write_record(&header)?;
        for (i, s) in self.s_grid.iter().enumerate() {
            let mut row = vec![format_sig(*s)];
            row.extend(self.columns.iter().map(|c| format_sig(c.values[i])));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ascii"))
    }

    /// Parses the CSV layout written by [`CurveTable::write_csv`]. The CSV
    /// carries no metadata, so it is supplied by the caller.
    pub fn read_csv<R: Read>(input: R, meta: CurveMeta) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        if header.get(0) != Some("s") {
            return Err(Error::invalid("first csv column must be s"));
        }
        let mut grid = Vec::new();
        let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len() - 1];
        for record in r.records() {
            let record = record?;
            let parse = |i: usize| -> Result<f64> {
                let field = record.get(i).unwrap_or_default();
                field
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad number {field:?} in csv")))
            };
            grid.push(parse(0)?);
            for (j, col) in cols.iter_mut().enumerate() {
                col.push(parse(j + 1)?);
            }
        }
        let mut table = Self::new(grid, meta)?;
        for (name, values) in header.iter().skip(1).zip(cols) {
            table.push_column(name, values)?;
        }
        Ok(table)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let table: Self = serde_json::from_str(s)?;
        if table.columns.iter().any(|c| c.values.len() != table.s_grid.len()) {
            return Err(Error::invalid("column length does not match the grid"));
        }
        Ok(table)
    }
}

/// Formats `v` with [`SIGNIFICANT_DIGITS`] significant digits, `%g` style:
/// fixed notation for moderate exponents, scientific otherwise, trailing
/// zeros removed.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> CurveMeta {
        CurveMeta { n_points: 10, alpha: 1.0, generator: "test".into() }
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(2.0), "2");
        assert_eq!(format_sig(0.25), "0.25");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(12.544_123_456_789_9), "12.5441234568");
        assert_eq!(format_sig(-4.5), "-4.5");
        assert_eq!(format_sig(1234567.0), "1234567");
        assert_eq!(format_sig(6.933_874_625_807_9e-4), "0.000693387462581");
        assert_eq!(format_sig(1.5e-7), "1.5e-7");
        assert_eq!(format_sig(1e15), "1e15");
        assert_eq!(format_sig(999_999_999_999.7), "1e12");
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(CurveTable::new(vec![1.0, 1.0], meta()).is_err());
        let mut t = CurveTable::new(vec![0.0, 1.0], meta()).unwrap();
        assert!(t.push_column("a", vec![1.0]).is_err());
        t.push_column("a", vec![1.0, 2.0]).unwrap();
        assert!(t.push_column("a", vec![1.0, 2.0]).is_err());
        assert!(t.push_column("s", vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut t = CurveTable::new(vec![0.0, 0.5], meta()).unwrap();
        t.push_column("F_N", vec![0.0, 1.0 / 3.0]).unwrap();
        t.push_column("F", vec![0.0, 2.0]).unwrap();
        assert_eq!(t.to_csv_string().unwrap(), "s,F_N,F\n0,0,0\n0.5,0.333333333333,2\n");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut t = CurveTable::new(vec![0.1, 0.7], meta()).unwrap();
        t.push_column("x", vec![1.0 / 3.0, std::f64::consts::PI]).unwrap();
        let back = CurveTable::from_json_str(&t.to_json_string().unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
