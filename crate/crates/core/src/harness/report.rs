use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{BenchError, ReportRow};
use crate::estimator::EstimatorKind;
use crate::metrics::TraceRow;

pub const REPORT_HEADER: &str =
    "estimator,q,m,rel_l1_pct,abs_linf,mean_spread,center_frac,steps,skipped_zero,runtime_ms";
pub const TRACE_HEADER: &str = "n,truth,estimate,k,spread,center_offset";

/// Shortest decimal that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// Trace file for one grid cell, e.g. `tas_q0.95_m100.csv`.
pub fn trace_file_name(kind: EstimatorKind, q: f64, m: usize) -> String {
    format!("{kind}_q{q:?}_m{m}.csv")
}

pub(crate) fn write_trace_row(out: &mut impl Write, row: &TraceRow) -> std::io::Result<()> {
    write!(out, "{},{},{}", row.n, format_float(row.truth), opt(row.estimate))?;
    match row.tas {
        Some(d) => writeln!(out, ",{},{},{}", d.k, format_float(d.spread), d.center_offset),
        None => writeln!(out, ",,,"),
    }
}

/// Writes one CSV row per grid cell. Refuses an empty report without
/// touching the filesystem.
pub fn write_report(rows: &[ReportRow], path: impl AsRef<Path>) -> Result<(), BenchError> {
    let path = path.as_ref();
    if rows.is_empty() {
        return Err(BenchError::Config("no report rows to write".into()));
    }
    let io = |e| BenchError::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "{REPORT_HEADER}").map_err(io)?;
    for r in rows {
        let s = &r.result.summary;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.estimator,
            format_float(r.q),
            r.m,
            opt(s.rel_l1_pct),
            opt(s.abs_linf),
            opt(s.mean_spread),
            opt(s.center_within_band_frac),
            s.steps_evaluated,
            s.steps_skipped_zero_truth,
            format_float(s.runtime_ms),
        )
        .map_err(io)?;
    }
    out.flush().map_err(io)
}
