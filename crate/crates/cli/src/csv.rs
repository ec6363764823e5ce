//! Trace tables.
//!
//! One file per trace, UTF-8 with LF line endings. Floats use 17
//! significant digits so every value parses back to the same double;
//! missing values are empty fields. Wall-clock times are not written, so
//! files are byte-identical across repeated runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use dlmodel::{RunTrace, TraceRow};

use crate::error::{config, HarnessError, HarnessResult};

pub const HEADER: &str = "k,l,alpha,a,backtracks,delta,delta_tilde,certified_delta_tilde,f_iterate,f_output,gap,dist_to_opt";

fn float(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").unwrap();
}

fn optional(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        float(out, v);
    }
}

/// The table for one trace, header included.
pub fn trace_to_csv(trace: &RunTrace) -> String {
    let mut out = String::with_capacity(64 + 256 * trace.len());
    out.push_str(HEADER);
    out.push('\n');
    for r in &trace.rows {
        write!(out, "{},", r.k).unwrap();
        for v in [r.l, r.alpha, r.a] {
            float(&mut out, v);
            out.push(',');
        }
        write!(out, "{},", r.backtracks).unwrap();
        for v in [r.delta, r.delta_tilde, r.certified_delta_tilde] {
            float(&mut out, v);
            out.push(',');
        }
        optional(&mut out, r.f_iterate);
        out.push(',');
        optional(&mut out, r.f_output);
        out.push(',');
        optional(&mut out, r.gap);
        out.push(',');
        optional(&mut out, r.dist_to_opt);
        out.push('\n');
    }
    out
}

/// Parses a table written by [`trace_to_csv`]. Points and step times are
/// not stored and come back empty.
pub fn parse_csv(text: &str) -> HarnessResult<Vec<TraceRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return config("CSV header does not match");
    }
    let bad = |line: usize, what: &str| HarnessError::Config(format!("CSV line {line}: {what}"));
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(bad(n, "expected 12 fields"));
        }
        let f = |j: usize| fields[j].parse::<f64>().map_err(|_| bad(n, "bad number"));
        let opt = |j: usize| if fields[j].is_empty() { Ok(None) } else { f(j).map(Some) };
        let k = fields[0].parse().map_err(|_| bad(n, "bad k"))?;
        let mut row = TraceRow::bare(k, f(1)?, f(2)?, f(3)?);
        row.backtracks = fields[4].parse().map_err(|_| bad(n, "bad backtracks"))?;
        row.delta = f(5)?;
        row.delta_tilde = f(6)?;
        row.certified_delta_tilde = f(7)?;
        row.f_iterate = opt(8)?;
        row.f_output = opt(9)?;
        row.gap = opt(10)?;
        row.dist_to_opt = opt(11)?;
        rows.push(row);
    }
    Ok(rows)
}

/// Writes `{dir}/{name}_{method}.csv` for every trace.
pub fn emit_csv(traces: &[RunTrace], dir: &Path, name: &str) -> HarnessResult<Vec<PathBuf>> {
    if traces.is_empty() {
        return config("no traces to write");
    }
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    traces
        .iter()
        .map(|t| {
            let path = dir.join(format!("{name}_{}.csv", t.method.as_str()));
            std::fs::write(&path, trace_to_csv(t)).map_err(|e| HarnessError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dlmodel::MethodTag;
    use nalgebra::dvector;

    fn sample() -> RunTrace {
        let mut t = RunTrace::empty(MethodTag::FastGradient, dvector![0.0], 1.0);
        for k in 1..=3 {
            let mut r = TraceRow::bare(k, 0.1 * k as f64, 1.0 / 3.0, std::f64::consts::PI * k as f64);
            r.gap = Some(1e-300 / k as f64);
            r.f_output = (k != 2).then_some(-0.0);
            r.backtracks = k as u32;
            t.rows.push(r);
        }
        t
    }

    #[test]
    fn three_rows_give_four_lines() {
        let text = trace_to_csv(&sample());
        assert_eq!(text.lines().count(), 4);
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn round_trip_is_exact() {
        let t = sample();
        let rows = parse_csv(&trace_to_csv(&t)).unwrap();
        assert_eq!(rows, t.rows);
        for (a, b) in rows.iter().zip(&t.rows) {
            assert_eq!(a.a.to_bits(), b.a.to_bits());
            assert_eq!(a.f_output.map(f64::to_bits), b.f_output.map(f64::to_bits));
        }
    }

    #[test]
    fn seventeen_significant_digits() {
        let text = trace_to_csv(&sample());
        let line = text.lines().nth(1).unwrap();
        assert_eq!(line.split(',').nth(2).unwrap(), "3.3333333333333331e-1");
    }

    #[test]
    fn two_traces_two_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut gd = sample();
        gd.method = MethodTag::Gradient;
        let paths = emit_csv(&[gd, sample()], dir.path(), "p").unwrap();
        assert_eq!(paths[0].file_name().unwrap(), "p_gd.csv");
        assert_eq!(paths[1].file_name().unwrap(), "p_fgm.csv");
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(parse_csv("k,l\n").is_err());
    }
}
