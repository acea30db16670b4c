use std::fmt;
use std::str::FromStr;

use crate::baseline::{EqHistState, P2State, ReservoirState};
use crate::error::{Error, Result};
use crate::spec::QuantileSpec;
use crate::tas::TasState;

/// Common contract of every running-quantile estimator.
pub trait QuantileEstimator {
    /// Consumes one finite datum.
    fn observe(&mut self, x: f64) -> Result<()>;

    /// Current estimate. Never mutates the state.
    fn estimate(&self) -> Result<f64>;

    /// Number of observations consumed.
    fn n(&self) -> u64;
}

impl QuantileEstimator for TasState {
    fn observe(&mut self, x: f64) -> Result<()> {
        TasState::observe(self, x)
    }
    fn estimate(&self) -> Result<f64> {
        TasState::estimate(self)
    }
    fn n(&self) -> u64 {
        TasState::n(self)
    }
}

impl QuantileEstimator for P2State {
    fn observe(&mut self, x: f64) -> Result<()> {
        P2State::observe(self, x)
    }
    fn estimate(&self) -> Result<f64> {
        P2State::estimate(self)
    }
    fn n(&self) -> u64 {
        P2State::n(self)
    }
}

impl QuantileEstimator for ReservoirState {
    fn observe(&mut self, x: f64) -> Result<()> {
        ReservoirState::observe(self, x)
    }
    fn estimate(&self) -> Result<f64> {
        ReservoirState::estimate(self)
    }
    fn n(&self) -> u64 {
        ReservoirState::n(self)
    }
}

impl QuantileEstimator for EqHistState {
    fn observe(&mut self, x: f64) -> Result<()> {
        EqHistState::observe(self, x)
    }
    fn estimate(&self) -> Result<f64> {
        EqHistState::estimate(self)
    }
    fn n(&self) -> u64 {
        EqHistState::n(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    Tas,
    P2,
    Reservoir,
    EqHist,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::Tas,
        EstimatorKind::P2,
        EstimatorKind::Reservoir,
        EstimatorKind::EqHist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Tas => "tas",
            EstimatorKind::P2 => "p2",
            EstimatorKind::Reservoir => "reservoir",
            EstimatorKind::EqHist => "eqhist",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown estimator {s:?} (expected tas, p2, reservoir or eqhist)"))
    }
}

/// Any of the four estimators behind one value.
///
/// `P2` ignores the capacity in its spec; only `Reservoir` uses the seed.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    Tas(TasState),
    P2(P2State),
    Reservoir(ReservoirState),
    EqHist(EqHistState),
}

impl Estimator {
    pub fn new(kind: EstimatorKind, spec: QuantileSpec, seed: u64) -> Self {
        match kind {
            EstimatorKind::Tas => Estimator::Tas(TasState::new(spec)),
            EstimatorKind::P2 => {
                Estimator::P2(P2State::new(spec.q()).expect("spec q is validated"))
            }
            EstimatorKind::Reservoir => Estimator::Reservoir(ReservoirState::new(spec, seed)),
            EstimatorKind::EqHist => Estimator::EqHist(EqHistState::new(spec)),
        }
    }

    pub fn kind(&self) -> EstimatorKind {
        match self {
            Estimator::Tas(_) => EstimatorKind::Tas,
            Estimator::P2(_) => EstimatorKind::P2,
            Estimator::Reservoir(_) => EstimatorKind::Reservoir,
            Estimator::EqHist(_) => EstimatorKind::EqHist,
        }
    }

    pub fn as_tas(&self) -> Option<&TasState> {
        match self {
            Estimator::Tas(t) => Some(t),
            _ => None,
        }
    }

    fn inner(&self) -> &dyn QuantileEstimator {
        match self {
            Estimator::Tas(e) => e,
            Estimator::P2(e) => e,
            Estimator::Reservoir(e) => e,
            Estimator::EqHist(e) => e,
        }
    }

    fn inner_mut(&mut self) -> &mut dyn QuantileEstimator {
        match self {
            Estimator::Tas(e) => e,
            Estimator::P2(e) => e,
            Estimator::Reservoir(e) => e,
            Estimator::EqHist(e) => e,
        }
    }
}

impl QuantileEstimator for Estimator {
    fn observe(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFiniteValue(x));
        }
        self.inner_mut().observe(x)
    }

    fn estimate(&self) -> Result<f64> {
        self.inner().estimate()
    }

    fn n(&self) -> u64 {
        self.inner().n()
    }
}
