//! Bounded-memory running quantile estimation for non-stationary streams.
//!
//! The centrepiece is [`TasState`], a targeted adaptable sample: an ordered
//! buffer of `m` stream values with estimated ranks, updated one datum at a
//! time by admitting values around the current estimate and evicting from
//! the buffer ends. Three comparators ([`P2State`], [`ReservoirState`],
//! [`EqHistState`]) share the [`QuantileEstimator`] contract, and
//! [`OracleMultiset`] supplies the exact running quantile they are scored
//! against.
//!
//! ```
//! use tasquant::{QuantileSpec, TasState};
//!
//! let mut tas = TasState::new(QuantileSpec::new(0.5, 3)?);
//! for x in [1.0, 2.0, 3.0] {
//!     tas.observe(x)?;
//! }
//! assert_eq!(tas.estimate()?, 2.0);
//! # Ok::<(), tasquant::Error>(())
//! ```
//!
//! The guide under `book/` walks through the algorithm, the comparators and
//! the evaluation harness; its code listings are compiled as doctests of this
//! crate.

pub mod baseline;
mod error;
mod estimator;
pub mod harness;
pub mod metrics;
pub mod oracle;
pub mod rng;
mod spec;
pub mod stream;
pub mod tas;

pub use baseline::{EqHistState, P2State, ReservoirState};
pub use error::{Error, Result};
pub use estimator::{Estimator, EstimatorKind, QuantileEstimator};
pub use oracle::{rank_step_check, OracleMultiset};
pub use spec::{rank_index, QuantileSpec, MIN_CAPACITY};
pub use tas::TasState;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quantiles.md")]
    mod quantiles {}
    #[doc = include_str!("../../../book/src/tas.md")]
    mod tas {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/streams.md")]
    mod streams {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
}
