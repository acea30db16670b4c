use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use rayon::prelude::*;

use super::report::{trace_file_name, write_report, write_trace_row, TRACE_HEADER};
use super::{load_stream, BenchConfig, BenchError, Source};
use crate::estimator::{Estimator, EstimatorKind, QuantileEstimator};
use crate::metrics::{RunSummary, SummaryAccumulator, TasDiagnostics, TraceRow};
use crate::oracle::OracleMultiset;
use crate::spec::QuantileSpec;

/// One grid cell's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub summary: RunSummary,
    /// Values pulled from the source; equals the stream length after one pass.
    pub values_read: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub estimator: EstimatorKind,
    pub q: f64,
    pub m: usize,
    pub result: CellResult,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Per-cell seed: `seed XOR fnv1a64("estimator|q|m")`, independent of the
/// order in which cells run.
pub fn cell_seed(seed: u64, kind: EstimatorKind, q: f64, m: usize) -> u64 {
    let key = format!("{kind}|{q:?}|{m}");
    let hash = key
        .bytes()
        .fold(FNV_OFFSET, |h, b| (h ^ b as u64).wrapping_mul(FNV_PRIME));
    seed ^ hash
}

fn open(source: &Source) -> Result<Box<dyn Iterator<Item = Result<f64, BenchError>>>, BenchError> {
    Ok(match source {
        Source::File { path, format } => Box::new(load_stream(path, *format)?),
        Source::Generated(spec) => Box::new(spec.iter().map(Ok)),
    })
}

fn diagnostics(est: &Estimator) -> Option<TasDiagnostics> {
    let tas = est.as_tas()?;
    Some(TasDiagnostics {
        k: tas.locate_index().ok()?,
        spread: tas.spread().ok()?,
        center_offset: tas.center_offset().ok()?,
        buffer_len: tas.len(),
    })
}

/// Replays `source` once through one estimator and the exact oracle.
///
/// Every step is scored; every `trace_every`-th row is handed to `sink`.
pub fn replay(
    source: &Source,
    kind: EstimatorKind,
    spec: QuantileSpec,
    seed: u64,
    trace_every: u64,
    band: f64,
    mut sink: impl FnMut(&TraceRow) -> Result<(), BenchError>,
) -> Result<CellResult, BenchError> {
    if trace_every == 0 {
        return Err(BenchError::Config("trace-every must be at least 1".into()));
    }
    let started = Instant::now();
    let mut estimator = Estimator::new(kind, spec, seed);
    let mut oracle = OracleMultiset::new();
    let mut acc = SummaryAccumulator::new(spec.capacity(), band);
    let mut n = 0u64;
    for x in open(source)? {
        let x = x?;
        n += 1;
        estimator.observe(x)?;
        oracle.insert(x)?;
        let row = TraceRow {
            n,
            truth: oracle.quantile(spec.q())?,
            estimate: estimator.estimate().ok(),
            tas: diagnostics(&estimator),
        };
        acc.push(&row);
        if n % trace_every == 0 {
            sink(&row)?;
        }
    }
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(CellResult {
        summary: acc.finish(runtime_ms),
        values_read: n,
    })
}

fn run_cell(config: &BenchConfig, kind: EstimatorKind, q: f64, m: usize) -> Result<ReportRow, BenchError> {
    let spec = QuantileSpec::new(q, m)?;
    let seed = cell_seed(config.seed, kind, q, m);
    let result = match &config.trace_dir {
        None => replay(&config.source, kind, spec, seed, config.trace_every, config.band, |_| Ok(()))?,
        Some(dir) => {
            let path = dir.join(trace_file_name(kind, q, m));
            let io = |e| BenchError::io(&path, e);
            let mut out = BufWriter::new(File::create(&path).map_err(io)?);
            writeln!(out, "{TRACE_HEADER}").map_err(io)?;
            let result = replay(&config.source, kind, spec, seed, config.trace_every, config.band, |row| {
                write_trace_row(&mut out, row).map_err(|e| BenchError::io(&path, e))
            })?;
            out.flush().map_err(io)?;
            result
        }
    };
    Ok(ReportRow { estimator: kind, q, m, result })
}

/// Runs every grid cell (in parallel) and writes the report and traces the
/// config asks for. Rows come back in grid order: estimator, then quantile,
/// then capacity.
pub fn run_benchmark(config: &BenchConfig) -> Result<Vec<ReportRow>, BenchError> {
    config.validate()?;
    if let Some(dir) = &config.trace_dir {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    let cells: Vec<(EstimatorKind, f64, usize)> = config
        .estimators
        .iter()
        .flat_map(|&k| {
            config
                .quantiles
                .iter()
                .flat_map(move |&q| config.capacities.iter().map(move |&m| (k, q, m)))
        })
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(k, q, m)| run_cell(config, k, q, m))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = &config.report {
        write_report(&rows, path)?;
    }
    Ok(rows)
}
