//! Max-min fair energy beamforming for a multi-antenna power beacon that
//! wirelessly charges a set of single-antenna energy-harvesting devices.
//!
//! The crate is organized around four layers:
//!
//! - [`channel_model`]: device geometry, ULA line-of-sight channels, path
//!   loss, and Rician fading draws.
//! - [`lp_beamformer`]: the low-complexity average-CSI design. MRT-shaped
//!   beams toward each device mean channel with a power split found by an
//!   affine-scaling interior-point LP, plus closed-form performance bounds.
//! - [`sdp_benchmark`]: the optimum covariance design (full or average CSI)
//!   via an interior-point solve of the max-min SDP, and beam extraction.
//! - [`simulator`]: realized energy, the switching-antenna CSI-free baseline,
//!   Monte-Carlo scheme evaluation and the parameter sweeps.
//!
//! The [`cli`] module holds configuration parsing and the CSV writer used by
//! the `wetbeam` binary.

pub mod channel_model;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod lp_beamformer;
pub mod rng;
pub mod sdp_benchmark;
pub mod simulator;

pub use error::{Error, Result};

/// Converts a power ratio in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to dB (`10·log10`).
pub fn linear_to_db(value: f64) -> f64 {
    10.0 * value.log10()
}
