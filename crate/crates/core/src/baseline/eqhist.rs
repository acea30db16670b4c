use crate::error::{check_finite, Error, Result};
use crate::spec::QuantileSpec;

/// Fixed-size histogram of equal-width bins stretched to cover the observed
/// range (Schmeiser & Deutsch style).
///
/// When a datum falls outside `[lo, hi]` the range grows to reach it exactly
/// and every old bin's mass is spread over the new grid in proportion to
/// overlap, i.e. assuming uniform density inside each old bin.
#[derive(Debug, Clone, PartialEq)]
pub struct EqHistState {
    spec: QuantileSpec,
    lo: f64,
    hi: f64,
    /// Empty while every observation so far is the same value.
    bins: Vec<f64>,
    n: u64,
}

impl EqHistState {
    pub fn new(spec: QuantileSpec) -> Self {
        EqHistState {
            spec,
            lo: 0.0,
            hi: 0.0,
            bins: Vec::new(),
            n: 0,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(lo, hi)`, or `None` before the first observation.
    pub fn range(&self) -> Option<(f64, f64)> {
        (self.n > 0).then_some((self.lo, self.hi))
    }

    /// Bin masses; empty until two distinct values have been seen.
    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn total_mass(&self) -> f64 {
        if self.bins.is_empty() {
            self.n as f64
        } else {
            self.bins.iter().sum()
        }
    }

    fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins.len() as f64
    }

    fn bin_of(&self, x: f64) -> usize {
        let m = self.bins.len();
        (((x - self.lo) / self.width()) as usize).min(m - 1)
    }

    pub fn observe(&mut self, x: f64) -> Result<()> {
        check_finite(x)?;
        self.n += 1;
        if self.n == 1 {
            self.lo = x;
            self.hi = x;
            return Ok(());
        }
        if self.bins.is_empty() {
            if x == self.lo {
                return Ok(());
            }
            // All earlier observations sit at the old point value.
            let point = self.lo;
            self.lo = point.min(x);
            self.hi = point.max(x);
            self.bins = vec![0.0; self.spec.capacity()];
            let i = self.bin_of(point);
            self.bins[i] = (self.n - 1) as f64;
        } else if x < self.lo || x > self.hi {
            self.rebin(self.lo.min(x), self.hi.max(x));
        }
        let i = self.bin_of(x);
        self.bins[i] += 1.0;
        Ok(())
    }

    fn rebin(&mut self, lo: f64, hi: f64) {
        let m = self.bins.len();
        let (old_lo, old_w) = (self.lo, self.width());
        let new_w = (hi - lo) / m as f64;
        let mut bins = vec![0.0; m];
        for (j, &mass) in self.bins.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let a = old_lo + j as f64 * old_w;
            let b = a + old_w;
            let first = (((a - lo) / new_w) as usize).min(m - 1);
            let last = (((b - lo) / new_w) as usize).min(m - 1);
            let mut left = mass;
            for (i, slot) in bins.iter_mut().enumerate().take(last + 1).skip(first) {
                if i == last {
                    // Remainder keeps the total exact.
                    *slot += left;
                    break;
                }
                let edge = lo + (i + 1) as f64 * new_w;
                let share = (mass * (edge.min(b) - a.max(lo + i as f64 * new_w)) / old_w)
                    .clamp(0.0, left);
                *slot += share;
                left -= share;
            }
        }
        self.lo = lo;
        self.hi = hi;
        self.bins = bins;
    }

    /// Value where the cumulative mass first reaches `q * n`, linearly
    /// interpolated inside the crossing bin and clamped to `[lo, hi]`.
    pub fn estimate(&self) -> Result<f64> {
        if self.n == 0 {
            return Err(Error::NotWarmedUp);
        }
        if self.bins.is_empty() {
            return Ok(self.lo);
        }
        let target = self.spec.q() * self.n as f64;
        let w = self.width();
        let mut cum = 0.0;
        for (i, &mass) in self.bins.iter().enumerate() {
            if mass > 0.0 && cum + mass >= target {
                let frac = ((target - cum) / mass).clamp(0.0, 1.0);
                let x = self.lo + (i as f64 + frac) * w;
                return Ok(x.clamp(self.lo, self.hi));
            }
            cum += mass;
        }
        Ok(self.hi)
    }
}
