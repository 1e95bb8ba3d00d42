//! Experiment runner for the phase-transformation protocol: the quadratic
//! phase demo, the success-probability sweep and fit, Trotter error tables
//! and the property-verification suites.

pub mod app;
pub mod demo;
pub mod error;
pub mod export;
pub mod sweep;
pub mod trotter;
pub mod verify;

pub use error::{CliError, CliResult};
