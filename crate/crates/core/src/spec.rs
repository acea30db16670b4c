use crate::error::{Error, Result};

/// Smallest buffer for which both TAS insertion branches can fire.
pub const MIN_CAPACITY: usize = 3;

/// Target quantile and buffer capacity for one estimator instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileSpec {
    q: f64,
    m: usize,
}

impl QuantileSpec {
    /// Validates `0 < q < 1` and `m >= 3`.
    ///
    /// ```
    /// use tasquant::{Error, QuantileSpec};
    ///
    /// let spec = QuantileSpec::new(0.95, 100).unwrap();
    /// assert_eq!((spec.q(), spec.capacity()), (0.95, 100));
    /// assert_eq!(QuantileSpec::new(1.0, 100), Err(Error::InvalidQuantile(1.0)));
    /// ```
    pub fn new(q: f64, m: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidQuantile(q));
        }
        if m < MIN_CAPACITY {
            return Err(Error::InvalidCapacity(m));
        }
        Ok(QuantileSpec { q, m })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn capacity(&self) -> usize {
        self.m
    }
}

/// 1-based rank `ceil(q * n)` of the q-quantile among `n` sorted values,
/// clamped to `1..=n`.
///
/// Equivalent to the top-down index `n - floor((1 - q) * n)`.
#[inline]
pub fn rank_index(n: u64, q: f64) -> u64 {
    let k = (q * n as f64).ceil() as u64;
    k.clamp(1, n.max(1))
}
