use thiserror::Error;

/// Errors raised by estimators, the oracle, generators and metrics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quantile must lie strictly between 0 and 1, got {0}")]
    InvalidQuantile(f64),
    #[error("buffer capacity must be at least 3, got {0}")]
    InvalidCapacity(usize),
    #[error("stream value is not finite: {0}")]
    NonFiniteValue(f64),
    #[error("estimator has not observed enough data to produce an estimate")]
    NotWarmedUp,
    #[error("buffer is empty")]
    EmptyBuffer,
    #[error("multiset is empty")]
    EmptySet,
    #[error("value {0} occurs more than once in a stream required to be distinct")]
    DuplicateValue(f64),
    #[error("invalid stream specification: {0}")]
    InvalidSpec(String),
    #[error("series lengths differ: {0} estimates vs {1} truths")]
    LengthMismatch(usize, usize),
    #[error("series are empty")]
    EmptySeries,
    #[error("every truth value is zero; relative error is undefined")]
    AllTruthZero,
    #[error("trace is empty")]
    EmptyTrace,
    #[error("inconsistent estimator state: {0}")]
    InvalidState(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Rejects NaN and infinities at the estimator boundary.
#[inline]
pub(crate) fn check_finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFiniteValue(x))
    }
}
