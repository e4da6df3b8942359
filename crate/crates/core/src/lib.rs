//! Two damped oscillators coupled to each other and to reservoirs at
//! unequal temperatures: closed-form and stochastic spectra, the energy flow
//! between the reservoirs, and the statistics of its spectral maximum.

pub mod analytic;
pub mod cli;
pub mod config;
pub mod criticality;
pub mod error;
pub mod linalg;
pub mod lyapunov;
pub mod model;
pub mod parallel;
pub mod sde;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use model::{build_system, LinearSystem, OscillatorPairParams, ValidatedParams};
