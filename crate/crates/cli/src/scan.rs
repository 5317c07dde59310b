//! Parameter sweeps over a state family, written as CSV.
//!
//! Points are evaluated in parallel and written in parameter order.

use std::io::Write;

use rayon::prelude::*;
use spinvar_core::{analyze, HalfInteger, Tolerances};

use crate::failure::Failure;
use crate::input::FamilyArgs;
use crate::json::format_f64;

pub const HEADER: [&str; 9] = ["param", "dj1_sq", "dj2_sq", "dj3_sq", "djt1_sq", "djt2_sq", "djt3_sq", "trace", "phase_res"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ScanParam {
    J,
    M,
    Xi,
    Theta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec {
    pub base: FamilyArgs,
    pub param: ScanParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub log: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub param: f64,
    pub real: [f64; 3],
    pub herm: [f64; 3],
    pub trace: f64,
    pub phase_resolution: Option<f64>,
}

impl ScanSpec {
    /// `steps` points from `from` to `to` inclusive, evenly spaced or
    /// log-spaced.
    pub fn grid(&self) -> Result<Vec<f64>, Failure> {
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(Failure::input("--from/--to: must be finite"));
        }
        if self.steps == 0 {
            return Err(Failure::input("--steps: must be at least 1"));
        }
        if self.log && !(self.from > 0.0 && self.to > 0.0) {
            return Err(Failure::input("--log: range endpoints must be positive"));
        }
        if self.steps == 1 {
            return Ok(vec![self.from]);
        }
        let n = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|k| {
                let t = k as f64 / n;
                if k == self.steps - 1 {
                    self.to
                } else if self.log {
                    (self.from.ln() + t * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + t * (self.to - self.from)
                }
            })
            .collect())
    }

    fn args_at(&self, value: f64) -> Result<FamilyArgs, Failure> {
        let mut args = self.base.clone();
        let halfint = |flag: &str| {
            HalfInteger::from_f64(value)
                .map(|h| h.to_string())
                .map_err(|_| Failure::input(format!("{flag}: grid value {value} is not a multiple of 1/2")))
        };
        match self.param {
            ScanParam::J => args.j = Some(halfint("--param j")?),
            ScanParam::M => args.m = Some(halfint("--param m")?),
            ScanParam::Xi => args.xi = Some(value),
            ScanParam::Theta => args.theta = Some(value),
        }
        Ok(args)
    }

    pub fn rows(&self, tol: &Tolerances) -> Result<Vec<Row>, Failure> {
        let grid = self.grid()?;
        // Reject malformed grids before any work is done.
        let args: Vec<FamilyArgs> = grid.iter().map(|&v| self.args_at(v)).collect::<Result<_, _>>()?;
        let rows: Vec<Result<Row, Failure>> = grid
            .par_iter()
            .zip(args.par_iter())
            .map(|(&param, args)| {
                let (ops, state) = args.to_state_file()?.build(tol, false)?;
                let report = analyze(&state, &ops)?;
                Ok(Row {
                    param,
                    real: report.principal_real.variances,
                    herm: report.principal_herm.variances,
                    trace: report.pair.trace(),
                    phase_resolution: report.phase_resolution,
                })
            })
            .collect();
        rows.into_iter().collect()
    }
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), Failure> {
    let io = |e: csv::Error| Failure::internal(format!("writing CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER).map_err(io)?;
    for r in rows {
        let mut record: Vec<String> = Vec::with_capacity(HEADER.len());
        record.push(format_f64(r.param));
        record.extend(r.real.iter().chain(&r.herm).map(|v| format_f64(*v)));
        record.push(format_f64(r.trace));
        record.push(r.phase_resolution.map(format_f64).unwrap_or_default());
        w.write_record(&record).map_err(io)?;
    }
    w.flush().map_err(|e| Failure::internal(format!("writing CSV: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::FamilyName;

    fn spec(family: FamilyName, param: ScanParam, from: f64, to: f64, steps: usize) -> ScanSpec {
        ScanSpec { base: FamilyArgs { family: Some(family), ..Default::default() }, param, from, to, steps, log: false }
    }

    #[test]
    fn grids() {
        let s = spec(FamilyName::Cat, ScanParam::J, 1.0, 10.0, 10);
        assert_eq!(s.grid().unwrap(), (1..=10).map(f64::from).collect::<Vec<_>>());
        let mut s = spec(FamilyName::SqueezedExact, ScanParam::Xi, 1e-3, 1e-1, 3);
        s.log = true;
        let g = s.grid().unwrap();
        assert!((g[1] - 1e-2).abs() < 1e-15 && g[2] == 1e-1);
        s.from = 0.0;
        assert!(s.grid().is_err());
        assert!(spec(FamilyName::Cat, ScanParam::J, 1.0, 2.0, 0).grid().is_err());
    }

    #[test]
    fn cat_resolution_column() {
        let rows = spec(FamilyName::Cat, ScanParam::J, 1.0, 10.0, 10).rows(&Tolerances::default()).unwrap();
        for (k, r) in rows.iter().enumerate() {
            let j = (k + 1) as f64;
            assert_eq!(r.param, j);
            assert!((r.phase_resolution.unwrap() - 0.5 / j).abs() < 1e-12);
            assert!((r.real[0] - j * j).abs() < 1e-9);
        }
    }

    #[test]
    fn jm_variances_column() {
        let mut s = spec(FamilyName::Jm, ScanParam::M, -5.0, 5.0, 11);
        s.base.j = Some("5".into());
        for r in s.rows(&Tolerances::default()).unwrap() {
            assert!((r.real[0] - 0.5 * (30.0 - r.param * r.param)).abs() < 1e-10);
        }
    }

    #[test]
    fn squeezed_log_slope() {
        let mut s = spec(FamilyName::SqueezedExact, ScanParam::Xi, 1e-3, 1e-1, 9);
        s.base.j = Some("3".into());
        s.log = true;
        let rows = s.rows(&Tolerances::default()).unwrap();
        let (first, last) = (&rows[0], &rows[rows.len() - 1]);
        let slope = (last.real[2].ln() - first.real[2].ln()) / (last.param.ln() - first.param.ln());
        assert!((slope - 2.0).abs() <= 0.05, "slope {slope}");
    }

    #[test]
    fn non_half_integer_grid_is_input_error() {
        let s = spec(FamilyName::Cat, ScanParam::J, 1.0, 2.0, 4);
        assert_eq!(s.rows(&Tolerances::default()).unwrap_err().code, crate::failure::EXIT_INPUT);
    }

    #[test]
    fn csv_layout() {
        let rows = spec(FamilyName::Cat, ScanParam::J, 2.0, 2.0, 1).rows(&Tolerances::default()).unwrap();
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), HEADER.join(","));
        let fields: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), HEADER.len());
        assert_eq!(fields[0], 2.0);
        assert!((fields[1] - 4.0).abs() < 1e-12 && (fields[8] - 0.25).abs() < 1e-12);
    }
}
