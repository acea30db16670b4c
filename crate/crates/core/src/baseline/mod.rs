//! Comparator estimators: P², a reservoir sample and an equispaced histogram.

mod eqhist;
mod p2;
mod reservoir;

pub use eqhist::EqHistState;
pub use p2::P2State;
pub use reservoir::ReservoirState;
