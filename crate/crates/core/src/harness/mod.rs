//! Benchmark harness: replays a stream through an estimator and the exact
//! oracle in lockstep, scores every step and writes report and trace CSVs.

mod config;
mod io;
mod report;
mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{parse_settings, BenchConfig, Source};
pub use io::{load_stream, write_stream, StreamFormat, StreamReader};
pub use report::{format_float, trace_file_name, write_report, REPORT_HEADER, TRACE_HEADER};
pub use run::{cell_seed, replay, run_benchmark, CellResult, ReportRow};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: cannot parse {text:?} as a number")]
    Parse { line: u64, text: String },
    #[error("value #{position} is not finite ({value})")]
    NonFinite { position: u64, value: f64 },
    #[error("binary stream length {len} is not a multiple of 8 bytes")]
    Truncated { len: u64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Estimator(#[from] crate::Error),
}

impl BenchError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }
}
