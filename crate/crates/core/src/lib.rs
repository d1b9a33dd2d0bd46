//! Variable-resolution ADC receiver simulator.
//!
//! Sparse clustered mmWave channels ([`channel`]), additive quantization
//! noise ([`quantize`]), ADC power ([`power`]), greedy per-antenna bit
//! allocation ([`alloc`]) and seeded Monte Carlo sweeps ([`montecarlo`]).
//! [`experiment`] and [`report`] back the `varres` command-line tool.

pub mod alloc;
pub mod channel;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod montecarlo;
pub mod power;
pub mod quantize;
pub mod report;
mod sum;

pub use error::{Error, Result};
pub use sum::NeumaierSum;
