//! Targeted adaptable sample (TAS).
//!
//! The estimator keeps an ordered buffer of unique stream values
//! `b_1 < ... < b_m` together with real-valued counts `a_i`, each an estimate
//! of how many observations so far were strictly below `b_i`. Until the buffer
//! first fills, every distinct value is stored and the counts are exact. After
//! that each new datum either
//!
//! * matches a stored value, in which case only the counts above it move;
//! * lands below the current quantile element `b_k` and is admitted while the
//!   largest element is evicted (when `k` sits low in the buffer, or the datum
//!   falls inside the buffer range);
//! * lands above `b_k` and is admitted while the smallest element is evicted
//!   (mirror conditions);
//! * or is dropped, again only moving counts.
//!
//! Admitted values get a count linearly interpolated in value between their
//! neighbours, or one step past the end count (`a_1 - 1` floored at zero,
//! `a_m + 1`) outside the buffer range.

use crate::error::{check_finite, Error, Result};
use crate::spec::QuantileSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct TasState {
    spec: QuantileSpec,
    values: Vec<f64>,
    counts: Vec<f64>,
    n: u64,
}

#[inline]
fn bump(counts: &mut [f64]) {
    for a in counts {
        *a += 1.0;
    }
}

impl TasState {
    pub fn new(spec: QuantileSpec) -> Self {
        TasState {
            spec,
            values: Vec::with_capacity(spec.capacity()),
            counts: Vec::with_capacity(spec.capacity()),
            n: 0,
        }
    }

    /// Rebuilds a state from raw parts, checking the structural invariants.
    pub fn from_parts(spec: QuantileSpec, values: Vec<f64>, counts: Vec<f64>, n: u64) -> Result<Self> {
        let state = TasState { spec, values, counts, n };
        state.validate()?;
        Ok(state)
    }

    /// Checks ordering, count monotonicity, count range and capacity.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidState(msg));
        if self.values.len() != self.counts.len() {
            return bad(format!(
                "{} values but {} counts",
                self.values.len(),
                self.counts.len()
            ));
        }
        if self.values.len() > self.spec.capacity() {
            return bad(format!("buffer holds {} > capacity", self.values.len()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return bad("non-finite buffer value".into());
        }
        if let Some(w) = self.values.windows(2).find(|w| w[0] >= w[1]) {
            return bad(format!("values not strictly increasing at {} >= {}", w[0], w[1]));
        }
        if let Some(w) = self.counts.windows(2).find(|w| w[0] > w[1]) {
            return bad(format!("counts decrease at {} > {}", w[0], w[1]));
        }
        let n = self.n as f64;
        if let Some(a) = self.counts.iter().find(|&&a| !(0.0..=n).contains(&a)) {
            return bad(format!("count {a} outside [0, {n}]"));
        }
        Ok(())
    }

    pub fn spec(&self) -> QuantileSpec {
        self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    /// Observations consumed so far.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True once the buffer has held `m` unique values; it never shrinks back.
    pub fn is_full(&self) -> bool {
        self.values.len() == self.spec.capacity()
    }

    /// 1-based buffer index `k` of the current quantile element.
    ///
    /// `k` is the last index whose count of smaller observations is below
    /// `q * n`, i.e. the stored value whose (estimated) rank range covers
    /// `ceil(q * n)`. With exact counts this is the exact quantile, duplicates
    /// included. Falls back to 1 when every count is already at or above
    /// `q * n`.
    pub fn locate_index(&self) -> Result<usize> {
        if self.values.is_empty() {
            return Err(Error::EmptyBuffer);
        }
        let target = self.spec.q() * self.n as f64;
        Ok(self.counts.partition_point(|&a| a < target).max(1))
    }

    /// Current running quantile estimate `b_k`.
    pub fn estimate(&self) -> Result<f64> {
        match self.locate_index() {
            Ok(k) => Ok(self.values[k - 1]),
            Err(_) => Err(Error::NotWarmedUp),
        }
    }

    /// Range `b_max - b_min` covered by the buffer.
    pub fn spread(&self) -> Result<f64> {
        match (self.values.first(), self.values.last()) {
            (Some(lo), Some(hi)) => Ok(hi - lo),
            _ => Err(Error::EmptyBuffer),
        }
    }

    /// Displacement `k - ceil(m'/2)` of the quantile index from the buffer
    /// midpoint.
    pub fn center_offset(&self) -> Result<i64> {
        let k = self.locate_index()?;
        Ok(k as i64 - self.values.len().div_ceil(2) as i64)
    }

    pub fn observe(&mut self, x: f64) -> Result<()> {
        check_finite(x)?;
        let pos = self.values.partition_point(|&b| b < x);
        if pos < self.values.len() && self.values[pos] == x {
            bump(&mut self.counts[pos + 1..]);
        } else if self.values.len() < self.spec.capacity() {
            // Every distinct value seen so far is stored, so the successor's
            // count is exactly the number of observations below `x`.
            let count = self.counts.get(pos).copied().unwrap_or(self.n as f64);
            bump(&mut self.counts[pos..]);
            self.values.insert(pos, x);
            self.counts.insert(pos, count);
        } else {
            self.observe_full(x, pos);
        }
        self.n += 1;
        Ok(())
    }

    fn interpolate(&self, lo: usize, x: f64) -> f64 {
        lerp((self.values[lo], self.counts[lo]), (self.values[lo + 1], self.counts[lo + 1]), x)
    }

    /// `x` is not stored and the buffer is full; `pos` is its insertion point.
    fn observe_full(&mut self, x: f64, pos: usize) {
        let m = self.values.len();
        let half = m / 2;
        // n has not been incremented yet: k reflects the state before x.
        let k = self.locate_index().expect("full buffer is nonempty");
        let bk = self.values[k - 1];

        if x < bk && (k < half || x > self.values[0]) {
            // Admit below the quantile, evict the maximum. pos < k <= m here.
            let count = if pos == 0 {
                (self.counts[0] - 1.0).max(0.0)
            } else {
                self.interpolate(pos - 1, x)
            };
            bump(&mut self.counts[pos..m - 1]);
            self.values.copy_within(pos..m - 1, pos + 1);
            self.counts.copy_within(pos..m - 1, pos + 1);
            self.values[pos] = x;
            self.counts[pos] = count;
        } else if x > bk && (k > half || x < self.values[m - 1]) {
            // Admit above the quantile, evict the minimum. pos >= k >= 1 here.
            let count = if pos == m {
                self.counts[m - 1] + 1.0
            } else {
                self.interpolate(pos - 1, x)
            };
            bump(&mut self.counts[pos..]);
            self.values.copy_within(1..pos, 0);
            self.counts.copy_within(1..pos, 0);
            self.values[pos - 1] = x;
            self.counts[pos - 1] = count;
        } else {
            bump(&mut self.counts[pos..]);
        }
    }
}

#[inline]
fn lerp((x0, y0): (f64, f64), (x1, y1): (f64, f64), x: f64) -> f64 {
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}
