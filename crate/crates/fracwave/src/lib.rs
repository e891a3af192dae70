//! Numerics for the stochastic wave equation driven by Gaussian noise that is
//! fractional in space and time: spectral covariance kernels, the existence
//! criterion, exact field sampling and Monte Carlo suprema.

pub mod bounds;
pub mod error;
pub mod field;
pub mod kernels;
pub mod params;
pub mod quad;
pub mod solvability;
pub mod stats;
pub mod trig;

pub use error::{Error, Result};
pub use params::{HurstParams, SpaceTimePoint};

/// Seed used by every experiment unless one is given explicitly.
pub const DEFAULT_SEED: u64 = 20_240_601;
