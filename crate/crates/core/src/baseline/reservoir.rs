use crate::error::{check_finite, Error, Result};
use crate::rng::SeededRng;
use crate::spec::{rank_index, QuantileSpec};

/// Uniform random sample of the stream (Vitter's algorithm R).
///
/// The sample is kept sorted. Once `n > m`, the `n`-th datum is admitted with
/// probability `m / n` and replaces a uniformly chosen retained value. Which
/// physical slot is replaced is irrelevant to the sample's distribution, so
/// the victim is picked by sorted position and the estimate needs no sort.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirState {
    q: f64,
    capacity: usize,
    buffer: Vec<f64>,
    n: u64,
    rng: SeededRng,
}

impl ReservoirState {
    pub fn new(spec: QuantileSpec, seed: u64) -> Self {
        Self::build(spec.q(), spec.capacity(), seed)
    }

    /// Sampling alone works down to a single slot, below the shared
    /// [`MIN_CAPACITY`](crate::MIN_CAPACITY).
    pub fn with_capacity(q: f64, capacity: usize, seed: u64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidQuantile(q));
        }
        if capacity == 0 {
            return Err(Error::InvalidCapacity(0));
        }
        Ok(Self::build(q, capacity, seed))
    }

    fn build(q: f64, capacity: usize, seed: u64) -> Self {
        ReservoirState {
            q,
            capacity,
            buffer: Vec::with_capacity(capacity),
            n: 0,
            rng: SeededRng::new(seed),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The retained sample in ascending order.
    pub fn sample(&self) -> &[f64] {
        &self.buffer
    }

    pub fn observe(&mut self, x: f64) -> Result<()> {
        check_finite(x)?;
        self.n += 1;
        let m = self.capacity;
        if self.buffer.len() < m {
            let pos = self.buffer.partition_point(|&b| b < x);
            self.buffer.insert(pos, x);
            return Ok(());
        }
        let j = self.rng.below(self.n) as usize;
        if j < m {
            self.buffer.remove(j);
            let pos = self.buffer.partition_point(|&b| b < x);
            self.buffer.insert(pos, x);
        }
        Ok(())
    }

    /// Element of rank `ceil(q * |sample|)` in the sorted sample.
    pub fn estimate(&self) -> Result<f64> {
        if self.buffer.is_empty() {
            return Err(Error::NotWarmedUp);
        }
        let k = rank_index(self.buffer.len() as u64, self.q);
        Ok(self.buffer[k as usize - 1])
    }
}
