//! Trotter error table against the dense exponential.

use serde::Serialize;

use qphase::hamiltonian::{evolve, exact_evolution};
use qphase::{HamiltonianSpec, PhaseMode, StateVector};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct TrotterRow {
    pub steps: usize,
    /// √(1 − |⟨ψ_m|ψ_exact⟩|²)
    pub distance: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrotterReport {
    pub n: usize,
    pub total_time: f64,
    pub protocol_cycles: Option<usize>,
    pub rows: Vec<TrotterRow>,
}

pub fn trotter_table(
    spec: &HamiltonianSpec,
    initial: &StateVector,
    steps: &[usize],
    mode: PhaseMode,
) -> CliResult<TrotterReport> {
    if steps.is_empty() || steps.contains(&0) {
        return Err(CliError::Usage("step counts must be positive".into()));
    }
    let exact = exact_evolution(initial, spec)?;
    let rows = steps
        .iter()
        .map(|&m| -> CliResult<TrotterRow> {
            let out = evolve(initial, &spec.with_steps(m), mode)?;
            Ok(TrotterRow { steps: m, distance: out.distance(&exact)?, fidelity: out.fidelity(&exact)? })
        })
        .collect::<CliResult<_>>()?;
    let protocol_cycles = match mode {
        PhaseMode::Protocol { cycles, .. } => Some(cycles),
        PhaseMode::Exact => None,
    };
    Ok(TrotterReport { n: spec.n, total_time: spec.total_time, protocol_cycles, rows })
}
