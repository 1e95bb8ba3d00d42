//! Text formats.
//!
//! Amplitude vectors are JSON arrays of `[re, im]` pairs, for example
//! `[[0.5, 0], [0, 0.5], [0.5, 0], [-0.5, 0]]`. Loading normalizes the vector
//! and rejects lengths that are not a power of two.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::protocol::{ProtocolMode, ProtocolResult};
use crate::state::StateVector;

pub fn parse_amplitudes(text: &str) -> Result<StateVector> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    if pairs.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Format("non-finite amplitude".into()));
    }
    StateVector::from_amplitudes(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

pub fn load_amplitudes(path: impl AsRef<Path>) -> Result<StateVector> {
    parse_amplitudes(&fs::read_to_string(path)?)
}

pub fn amplitude_pairs(amplitudes: &[Complex64]) -> Vec<[f64; 2]> {
    amplitudes.iter().map(|a| [a.re, a.im]).collect()
}

pub fn amplitudes_to_string(amplitudes: &[Complex64]) -> String {
    serde_json::to_string(&amplitude_pairs(amplitudes)).expect("finite pairs serialize")
}

pub fn save_amplitudes(path: impl AsRef<Path>, amplitudes: &[Complex64]) -> Result<()> {
    fs::write(path, amplitudes_to_string(amplitudes))?;
    Ok(())
}

/// Serialized form of a [`ProtocolResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolResultDocument {
    pub mode: ProtocolMode,
    pub delta: f64,
    pub cycles: usize,
    pub cycles_run: usize,
    pub failed_at: Option<usize>,
    pub total_success_probability: f64,
    pub outcomes: Vec<usize>,
    pub final_amplitudes: Vec<[f64; 2]>,
}

impl From<&ProtocolResult> for ProtocolResultDocument {
    fn from(r: &ProtocolResult) -> Self {
        Self {
            mode: r.mode,
            delta: r.delta,
            cycles: r.cycles,
            cycles_run: r.cycles_run,
            failed_at: r.failed_at,
            total_success_probability: r.total_success_probability,
            outcomes: r.outcome_log.iter().map(|o| o.mu).collect(),
            final_amplitudes: amplitude_pairs(r.final_state.amplitudes()),
        }
    }
}

pub fn parse_hamiltonian(text: &str) -> Result<HamiltonianSpec> {
    let spec: HamiltonianSpec = serde_json::from_str(text)?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<HamiltonianSpec> {
    parse_hamiltonian(&fs::read_to_string(path)?)
}
