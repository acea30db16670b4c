use crate::error::{check_finite, Error, Result};

/// P² single-quantile estimator (Jain & Chlamtac, 1985).
///
/// Five markers track the minimum, the `q/2`, `q`, `(1+q)/2` quantiles and the
/// maximum. Interior markers move one rank at a time and their heights follow
/// a piecewise-parabolic fit of the empirical CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct P2State {
    q: f64,
    count: u64,
    heights: [f64; 5],
    positions: [i64; 5],
    desired: [f64; 5],
    increments: [f64; 5],
}

impl P2State {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidQuantile(q));
        }
        Ok(P2State {
            q,
            count: 0,
            heights: [0.0; 5],
            positions: [1, 2, 3, 4, 5],
            desired: [1.0, 1.0 + 2.0 * q, 1.0 + 4.0 * q, 3.0 + 2.0 * q, 5.0],
            increments: [0.0, q / 2.0, q, (1.0 + q) / 2.0, 1.0],
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.count
    }

    /// Marker heights, valid once five values have been seen.
    pub fn heights(&self) -> Option<&[f64; 5]> {
        (self.count >= 5).then_some(&self.heights)
    }

    /// Marker positions (1-based ranks), valid once five values have been seen.
    pub fn positions(&self) -> Option<&[i64; 5]> {
        (self.count >= 5).then_some(&self.positions)
    }

    pub fn observe(&mut self, x: f64) -> Result<()> {
        check_finite(x)?;
        if self.count < 5 {
            self.heights[self.count as usize] = x;
            self.count += 1;
            if self.count == 5 {
                self.heights.sort_by(f64::total_cmp);
            }
            return Ok(());
        }
        self.count += 1;

        let h = &mut self.heights;
        let cell = if x < h[0] {
            h[0] = x;
            0
        } else if x >= h[4] {
            h[4] = h[4].max(x);
            3
        } else {
            // h[0] <= x < h[4]
            (1..4).find(|&i| x < h[i]).map_or(3, |i| i - 1)
        };
        for p in &mut self.positions[cell + 1..] {
            *p += 1;
        }
        for (d, inc) in self.desired.iter_mut().zip(self.increments) {
            *d += inc;
        }
        for i in 1..4 {
            self.adjust(i);
        }
        Ok(())
    }

    fn adjust(&mut self, i: usize) {
        let n = &self.positions;
        let drift = self.desired[i] - n[i] as f64;
        let step = if drift >= 1.0 && n[i + 1] - n[i] > 1 {
            1
        } else if drift <= -1.0 && n[i - 1] - n[i] < -1 {
            -1
        } else {
            return;
        };
        let h = &self.heights;
        let candidate = self.parabolic(i, step as f64);
        let height = if h[i - 1] < candidate && candidate < h[i + 1] {
            candidate
        } else {
            let j = (i as i64 + step) as usize;
            h[i] + step as f64 * (h[j] - h[i]) / (n[j] - n[i]) as f64
        };
        self.heights[i] = height;
        self.positions[i] += step;
    }

    fn parabolic(&self, i: usize, d: f64) -> f64 {
        let h = &self.heights;
        let n = self.positions.map(|p| p as f64);
        h[i] + d / (n[i + 1] - n[i - 1])
            * ((n[i] - n[i - 1] + d) * (h[i + 1] - h[i]) / (n[i + 1] - n[i])
                + (n[i + 1] - n[i] - d) * (h[i] - h[i - 1]) / (n[i] - n[i - 1]))
    }

    /// The central marker height.
    pub fn estimate(&self) -> Result<f64> {
        if self.count < 5 {
            return Err(Error::NotWarmedUp);
        }
        Ok(self.heights[2])
    }
}
