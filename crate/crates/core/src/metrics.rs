//! Error metrics and per-run diagnostics.
//!
//! Relative L1 error is the mean of the per-step relative errors
//! `|e_t - v_t| / |v_t|`, in percent, over steps whose truth is nonzero.
//! Absolute L∞ error is the largest `|e_t - v_t|` over all steps.

use crate::error::{Error, Result};

/// Default half-width of the centring band, as a fraction of the capacity.
pub const DEFAULT_CENTER_BAND: f64 = 0.25;

fn check_aligned(estimates: &[f64], truths: &[f64]) -> Result<()> {
    if estimates.len() != truths.len() {
        return Err(Error::LengthMismatch(estimates.len(), truths.len()));
    }
    Ok(())
}

/// Mean relative error in percent, skipping zero-truth steps.
pub fn rel_l1(estimates: &[f64], truths: &[f64]) -> Result<f64> {
    check_aligned(estimates, truths)?;
    let mut acc = ErrorAccumulator::default();
    for (&e, &v) in estimates.iter().zip(truths) {
        acc.push(e, v);
    }
    acc.rel_l1_pct().ok_or(Error::AllTruthZero)
}

/// Largest absolute error.
pub fn abs_linf(estimates: &[f64], truths: &[f64]) -> Result<f64> {
    check_aligned(estimates, truths)?;
    if estimates.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut acc = ErrorAccumulator::default();
    for (&e, &v) in estimates.iter().zip(truths) {
        acc.push(e, v);
    }
    Ok(acc.abs_linf().expect("nonempty"))
}

/// Running accumulator behind both metrics, so a harness can score a stream
/// without keeping it.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ErrorAccumulator {
    steps: u64,
    skipped_zero: u64,
    rel_sum: f64,
    abs_max: f64,
}

impl ErrorAccumulator {
    #[inline]
    pub fn push(&mut self, estimate: f64, truth: f64) {
        let err = (estimate - truth).abs();
        self.steps += 1;
        if err > self.abs_max {
            self.abs_max = err;
        }
        if truth == 0.0 {
            self.skipped_zero += 1;
        } else {
            self.rel_sum += err / truth.abs();
        }
    }

    /// Combines two accumulators over disjoint stretches of one run.
    pub fn merge(&mut self, other: &ErrorAccumulator) {
        self.steps += other.steps;
        self.skipped_zero += other.skipped_zero;
        self.rel_sum += other.rel_sum;
        self.abs_max = self.abs_max.max(other.abs_max);
    }

    /// Steps that contributed an (estimate, truth) pair.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn skipped_zero(&self) -> u64 {
        self.skipped_zero
    }

    /// Steps with nonzero truth.
    pub fn evaluable(&self) -> u64 {
        self.steps - self.skipped_zero
    }

    pub fn rel_l1_pct(&self) -> Option<f64> {
        let n = self.evaluable();
        (n > 0).then(|| 100.0 * self.rel_sum / n as f64)
    }

    pub fn abs_linf(&self) -> Option<f64> {
        (self.steps > 0).then_some(self.abs_max)
    }
}

/// Buffer-level diagnostics recorded for the TAS estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TasDiagnostics {
    /// 1-based buffer index of the estimate.
    pub k: usize,
    pub spread: f64,
    pub center_offset: i64,
    /// Current number of stored values; equal to the capacity after warm-up.
    pub buffer_len: usize,
}

/// One step of a replay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    /// 1-based count of observations consumed.
    pub n: u64,
    pub truth: f64,
    /// `None` until the estimator can produce an estimate.
    pub estimate: Option<f64>,
    pub tas: Option<TasDiagnostics>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub rel_l1_pct: Option<f64>,
    pub abs_linf: Option<f64>,
    /// Mean spread over post-warm-up rows (TAS only).
    pub mean_spread: Option<f64>,
    /// Fraction of post-warm-up rows with `|center offset| <= band * m` (TAS only).
    pub center_within_band_frac: Option<f64>,
    pub runtime_ms: f64,
    pub steps_evaluated: u64,
    pub steps_skipped_zero_truth: u64,
}

/// Streaming form of [`summarize_run`].
#[derive(Debug, Clone)]
pub struct SummaryAccumulator {
    capacity: usize,
    band: f64,
    errors: ErrorAccumulator,
    rows: u64,
    post_warmup: u64,
    spread_sum: f64,
    centered: u64,
}

impl SummaryAccumulator {
    pub fn new(capacity: usize, band: f64) -> Self {
        SummaryAccumulator {
            capacity,
            band,
            errors: ErrorAccumulator::default(),
            rows: 0,
            post_warmup: 0,
            spread_sum: 0.0,
            centered: 0,
        }
    }

    pub fn push(&mut self, row: &TraceRow) {
        self.rows += 1;
        if let Some(e) = row.estimate {
            self.errors.push(e, row.truth);
        }
        if let Some(d) = row.tas.filter(|d| d.buffer_len == self.capacity) {
            self.post_warmup += 1;
            self.spread_sum += d.spread;
            if d.center_offset.unsigned_abs() as f64 <= self.band * self.capacity as f64 {
                self.centered += 1;
            }
        }
    }

    pub fn errors(&self) -> &ErrorAccumulator {
        &self.errors
    }

    pub fn finish(&self, runtime_ms: f64) -> RunSummary {
        let post = self.post_warmup;
        RunSummary {
            rel_l1_pct: self.errors.rel_l1_pct(),
            abs_linf: self.errors.abs_linf(),
            mean_spread: (post > 0).then(|| self.spread_sum / post as f64),
            center_within_band_frac: (post > 0).then(|| self.centered as f64 / post as f64),
            runtime_ms,
            steps_evaluated: self.errors.steps(),
            steps_skipped_zero_truth: self.errors.skipped_zero(),
        }
    }
}

/// Summarises a full trace; `capacity` is the estimator's `m`.
pub fn summarize_run(trace: &[TraceRow], capacity: usize, band: f64) -> Result<RunSummary> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut acc = SummaryAccumulator::new(capacity, band);
    trace.iter().for_each(|r| acc.push(r));
    Ok(acc.finish(0.0))
}

/// Percentage with one decimal, e.g. `2.1%`.
pub fn format_pct(pct: f64) -> String {
    format!("{pct:.1}%")
}
