//! Hecke operators for Maass waveforms of integer weight with the eta
//! multiplier on the modular group.

pub mod arith;
pub mod cli;
mod error;
pub mod fixtures;
pub mod hecke;
pub mod modular;
pub mod series;
pub mod solver;
pub mod whittaker;

pub use error::{Error, Result};
