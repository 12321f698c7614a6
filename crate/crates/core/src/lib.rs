//! Exposure and coverage statistics of beamforming cellular networks whose
//! base stations form a Poisson point process.
//!
//! The analytic path builds closed-form characteristic functions
//! ([`charfun`]) from special functions ([`specfun`]) and inverts them
//! ([`metrics`]). The [`montecarlo`] module simulates the same system model
//! with exact geometry and serves as the ground truth.

pub mod antenna;
pub mod charfun;
pub mod error;
pub mod metrics;
pub mod montecarlo;
pub mod network;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex scalar used throughout the characteristic-function layer.
pub type ComplexScalar = Complex64;
