//! First-order Trotter evolution under H = T(P̂) + V(X̂).
//!
//! Each step applies diag(e^{−iV(x)Δt}) in the position basis, then
//! QFT → diag(e^{−iT(p)Δt}) → inverse QFT. The momentum index is the DFT
//! frequency index (no shift). Profiles are radian phase tables with ħ = 1;
//! grid spacing and units are the caller's business.
//!
//! In [`PhaseMode::Protocol`] every diagonal phase is produced by the
//! post-selected protocol from a software state encoding the profile.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initializer::Completion;
use crate::protocol::{run_protocol, ProtocolConfig, ProtocolMode};
use crate::state::{dft_matrix, StateVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub n: usize,
    /// V(x) on the position grid.
    pub potential: Vec<f64>,
    /// T(p) indexed by DFT frequency.
    pub kinetic: Vec<f64>,
    pub total_time: f64,
    pub steps: usize,
}

impl HamiltonianSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n >= 24 {
            return Err(Error::InvalidParameter(format!("n = {}", self.n)));
        }
        let dim = 1usize << self.n;
        for (name, profile) in [("potential", &self.potential), ("kinetic", &self.kinetic)] {
            if profile.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: profile.len() });
            }
            if profile.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} profile has non-finite entries")));
            }
        }
        if self.steps < 1 {
            return Err(Error::InvalidParameter("steps must be at least 1".into()));
        }
        if !self.total_time.is_finite() {
            return Err(Error::InvalidParameter("total_time must be finite".into()));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.steps as f64
    }

    pub fn with_steps(&self, steps: usize) -> Self {
        Self { steps, ..self.clone() }
    }

    /// V = x²/2, T = p²/2 on a centred grid with dx = dp = √(2π/N).
    pub fn harmonic_oscillator(n: usize, total_time: f64, steps: usize) -> Result<Self> {
        if n == 0 || n >= 24 {
            return Err(Error::InvalidParameter(format!("n = {n}")));
        }
        let dim = 1usize << n;
        let dx = (2.0 * std::f64::consts::PI / dim as f64).sqrt();
        let potential = (0..dim)
            .map(|k| {
                let x = (k as f64 - (dim / 2) as f64) * dx;
                0.5 * x * x
            })
            .collect();
        let kinetic = (0..dim)
            .map(|k| {
                let freq = if k < dim / 2 { k as f64 } else { k as f64 - dim as f64 };
                let p = freq * dx;
                0.5 * p * p
            })
            .collect();
        let spec = Self { n, potential, kinetic, total_time, steps };
        spec.validate()?;
        Ok(spec)
    }
}

/// A software state φ and coefficient α with α·|φ(x)|² = profile(x).
#[derive(Debug, Clone, PartialEq)]
pub struct SoftwareState {
    pub phi: Vec<Complex64>,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub values: Vec<f64>,
    pub software_state: Option<SoftwareState>,
}

impl PhaseProfile {
    pub fn plain(values: Vec<f64>) -> Self {
        Self { values, software_state: None }
    }
}

/// Encodes a single-signed profile: φ(x) = √(|f(x)|/A), A = Σ|f|, α = ±A.
///
/// A non-positive profile is encoded with negative α.
pub fn profile_to_software_state(values: &[f64]) -> Result<PhaseProfile> {
    crate::state::qubits_for_len(values.len())?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("profile has non-finite entries".into()));
    }
    let has_pos = values.iter().any(|&v| v > 0.0);
    let has_neg = values.iter().any(|&v| v < 0.0);
    if has_pos && has_neg {
        return Err(Error::MixedSignProfile);
    }
    if !has_pos && !has_neg {
        return Err(Error::ZeroProfile);
    }
    let total: f64 = values.iter().map(|v| v.abs()).sum();
    let phi = values.iter().map(|v| Complex64::new((v.abs() / total).sqrt(), 0.0)).collect();
    let alpha = if has_neg { -total } else { total };
    Ok(PhaseProfile { values: values.to_vec(), software_state: Some(SoftwareState { phi, alpha }) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// Multiply by e^{i·f(x)} directly.
    Exact,
    /// Apply e^{i·f(x)} through `cycles` post-selected protocol cycles.
    Protocol { cycles: usize, completion: Completion },
}

impl PhaseMode {
    pub fn protocol(cycles: usize) -> Self {
        PhaseMode::Protocol { cycles, completion: Completion::Householder }
    }
}

/// Applies e^{i·values(x)} on the full register.
pub fn apply_phase_profile(state: &StateVector, values: &[f64], mode: PhaseMode) -> Result<StateVector> {
    if values.len() != state.dim() {
        return Err(Error::DimensionMismatch { expected: state.dim(), found: values.len() });
    }
    match mode {
        PhaseMode::Exact => state.apply_phases(values),
        PhaseMode::Protocol { cycles, completion } => {
            let profile = match profile_to_software_state(values) {
                Ok(p) => p,
                Err(Error::ZeroProfile) => return Ok(state.clone()),
                Err(e) => return Err(e),
            };
            let software = profile.software_state.expect("encoded profile");
            let config = ProtocolConfig::from_alpha(software.alpha, cycles, ProtocolMode::Postselected)?
                .with_completion(completion);
            Ok(run_protocol(state, &software.phi, &config)?.final_state)
        }
    }
}

/// One Trotter step with explicit profiles, for callers that vary V and T per step.
pub fn trotter_step_with_profiles(
    state: &StateVector,
    potential: &[f64],
    kinetic: &[f64],
    dt: f64,
    mode: PhaseMode,
) -> Result<StateVector> {
    let register: Vec<usize> = (0..state.n_qubits()).collect();
    let v_phase: Vec<f64> = potential.iter().map(|v| -v * dt).collect();
    let t_phase: Vec<f64> = kinetic.iter().map(|t| -t * dt).collect();
    let after_v = apply_phase_profile(state, &v_phase, mode)?;
    let momentum = after_v.qft(&register, false)?;
    let kicked = apply_phase_profile(&momentum, &t_phase, mode)?;
    kicked.qft(&register, true)
}

pub fn trotter_step(state: &StateVector, spec: &HamiltonianSpec, mode: PhaseMode) -> Result<StateVector> {
    spec.validate()?;
    check_state(state, spec)?;
    trotter_step_with_profiles(state, &spec.potential, &spec.kinetic, spec.dt(), mode)
}

/// `spec.steps` Trotter steps.
pub fn evolve(state: &StateVector, spec: &HamiltonianSpec, mode: PhaseMode) -> Result<StateVector> {
    spec.validate()?;
    check_state(state, spec)?;
    let mut out = state.clone();
    for _ in 0..spec.steps {
        out = trotter_step_with_profiles(&out, &spec.potential, &spec.kinetic, spec.dt(), mode)?;
    }
    Ok(out)
}

/// Dense H = F†·diag(T)·F + diag(V), with F the forward DFT matrix.
pub fn dense_hamiltonian(spec: &HamiltonianSpec) -> Result<DMatrix<Complex64>> {
    spec.validate()?;
    let f = dft_matrix(spec.n, false);
    let to_diag = |v: &[f64]| DMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0))));
    Ok(f.adjoint() * to_diag(&spec.kinetic) * f + to_diag(&spec.potential))
}

/// e^{−iHt}|ψ⟩ by eigendecomposition of the dense Hamiltonian.
pub fn exact_evolution(state: &StateVector, spec: &HamiltonianSpec) -> Result<StateVector> {
    check_state(state, spec)?;
    let h = dense_hamiltonian(spec)?;
    let herm = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let q = &eig.eigenvectors;
    let psi = DVector::from_column_slice(state.amplitudes());
    let mut coeffs = q.adjoint() * psi;
    for (c, &lambda) in coeffs.iter_mut().zip(eig.eigenvalues.iter()) {
        *c *= Complex64::from_polar(1.0, -lambda * spec.total_time);
    }
    StateVector::from_amplitudes((q * coeffs).iter().copied().collect())
}

fn check_state(state: &StateVector, spec: &HamiltonianSpec) -> Result<()> {
    if state.n_qubits() != spec.n {
        return Err(Error::DimensionMismatch { expected: spec.n, found: state.n_qubits() });
    }
    Ok(())
}
