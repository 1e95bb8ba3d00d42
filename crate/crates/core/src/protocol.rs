//! One cycle of the phase-transformation protocol and its iteration.
//!
//! A cycle loads the software state into an ancilla register
//! (|ψ⟩|0⟩ → |ψ⟩|φ⟩), applies the partial phase operator U(Δ), undoes the
//! initializer on the ancilla and measures it. Outcome μ = 0 leaves the
//! primary register in
//!
//! ```text
//! ψ'₀(x) ∝ ψ(x)·(1 + 2i·e^{iΔ/2}·sin(Δ/2)·|φ(x)|²) ≈ ψ(x)·e^{iΔ|φ(x)|²}
//! ```
//!
//! with probability P(0) = Σ_x |ψ(x)|²(1 − 4 sin²(Δ/2)|φ(x)|²(1 − |φ(x)|²)).
//! Any other μ corrupts the state to ψ'_μ(x) ∝ ψ(x)·φ_μ*(x)·φ(x).
//!
//! The simulation path ([`Cycle`]) runs the gate-level circuit on the 2n-qubit
//! composite state; the `exact_*` functions evaluate the closed forms. Tests
//! check one against the other.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initializer::{Completion, InitializerUnitary, NORM_TOLERANCE};
use crate::layout::RegisterLayout;
use crate::partial_phase::PartialPhaseCircuit;
use crate::rng;
use crate::state::{l2_norm, StateVector, BRANCH_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolMode {
    /// Sample μ every cycle and stop at the first failure.
    #[default]
    Sampled,
    /// Simulate the circuit and project onto μ = 0 every cycle.
    Postselected,
    /// Apply the closed-form success map every cycle.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Phase step per cycle.
    pub delta: f64,
    pub cycles: usize,
    pub mode: ProtocolMode,
    pub completion: Completion,
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn from_delta(delta: f64, cycles: usize, mode: ProtocolMode) -> Result<Self> {
        if cycles < 1 {
            return Err(Error::InvalidParameter("cycles must be at least 1".into()));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("delta = {delta}")));
        }
        Ok(Self { delta, cycles, mode, completion: Completion::Householder, seed: rng::DEFAULT_SEED })
    }

    /// Δ = α / m.
    pub fn from_alpha(alpha: f64, cycles: usize, mode: ProtocolMode) -> Result<Self> {
        if cycles < 1 {
            return Err(Error::InvalidParameter("cycles must be at least 1".into()));
        }
        Self::from_delta(alpha / cycles as f64, cycles, mode)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_completion(mut self, completion: Completion) -> Self {
        self.completion = completion;
        self
    }

    /// Total coefficient α = m·Δ.
    pub fn alpha(&self) -> f64 {
        self.delta * self.cycles as f64
    }
}

#[derive(Debug, Clone)]
pub struct CycleOutcome {
    pub mu: usize,
    pub success: bool,
    /// Exact probability of `mu`.
    pub probability: f64,
    /// Primary register after the collapse, renormalized.
    pub post_state: StateVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn success(&self) -> f64 {
        self.probabilities[0]
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub mode: ProtocolMode,
    pub delta: f64,
    pub cycles: usize,
    pub final_state: StateVector,
    pub cycles_run: usize,
    pub failed_at: Option<usize>,
    /// Π over the cycles run of the exact P(0) of each cycle's input state.
    pub total_success_probability: f64,
    pub outcome_log: Vec<CycleOutcome>,
}

/// Prepared cycle: initializer, gate-level U(Δ) and layout for a fixed (φ, Δ).
#[derive(Debug, Clone)]
pub struct Cycle {
    layout: RegisterLayout,
    initializer: InitializerUnitary,
    circuit: PartialPhaseCircuit,
}

impl Cycle {
    pub fn new(phi: &[Complex64], delta: f64, completion: Completion) -> Result<Self> {
        let initializer = InitializerUnitary::new(phi, completion)?;
        let layout = RegisterLayout::standard(initializer.n())?;
        let circuit = PartialPhaseCircuit::for_layout(&layout, delta)?;
        Ok(Self { layout, initializer, circuit })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn initializer(&self) -> &InitializerUnitary {
        &self.initializer
    }

    /// |Γ⟩ = (I⊗U_φ†)·U(Δ)·(I⊗U_φ)|ψ⟩|0⟩, just before the ancilla readout.
    pub fn pre_measurement_state(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_qubits() != self.layout.n() {
            return Err(Error::DimensionMismatch { expected: self.layout.n(), found: psi.n_qubits() });
        }
        let start = StateVector::product(psi, &StateVector::basis(self.layout.n(), 0)?);
        let loaded = self.initializer.apply(&start, self.layout.ancilla(), false)?;
        let entangled = self.circuit.apply(&loaded)?;
        self.initializer.apply(&entangled, self.layout.ancilla(), true)
    }

    /// Ancilla outcome probabilities read off the simulated composite state.
    pub fn outcome_probabilities(&self, psi: &StateVector) -> Result<Vec<f64>> {
        self.pre_measurement_state(psi)?.marginal_probabilities(self.layout.ancilla())
    }

    /// Forces outcome `mu`: returns the collapsed primary state and P(μ).
    pub fn branch(&self, psi: &StateVector, mu: usize) -> Result<(StateVector, f64)> {
        let gamma = self.pre_measurement_state(psi)?;
        let (collapsed, probability) = gamma.project(self.layout.ancilla(), mu)?;
        Ok((self.primary_part(&collapsed, mu), probability))
    }

    pub fn run<R: Rng + ?Sized>(&self, psi: &StateVector, rng: &mut R) -> Result<CycleOutcome> {
        let gamma = self.pre_measurement_state(psi)?;
        let m = gamma.measure_subregister(self.layout.ancilla(), rng)?;
        Ok(CycleOutcome {
            mu: m.outcome,
            success: m.outcome == 0,
            probability: m.probability,
            post_state: self.primary_part(&m.collapsed, m.outcome),
        })
    }

    fn primary_part(&self, collapsed: &StateVector, mu: usize) -> StateVector {
        let amps = (0..1usize << self.layout.n())
            .map(|x| collapsed.amplitudes()[self.layout.composite_index(x, mu)])
            .collect();
        StateVector::from_normalized(amps)
    }
}

/// Simulates one cycle and samples the ancilla outcome.
pub fn run_cycle<R: Rng + ?Sized>(
    psi: &StateVector,
    phi: &[Complex64],
    delta: f64,
    completion: Completion,
    rng: &mut R,
) -> Result<CycleOutcome> {
    check_dims(psi, phi)?;
    Cycle::new(phi, delta, completion)?.run(psi, rng)
}

/// 2i·e^{iΔ/2}·sin(Δ/2), the weight of the x = y projector in U(Δ) − I.
fn branch_coefficient(delta: f64) -> Complex64 {
    Complex64::new(0.0, 2.0) * Complex64::from_polar(1.0, delta / 2.0) * (delta / 2.0).sin()
}

pub fn exact_success_probability(psi: &StateVector, phi: &[Complex64], delta: f64) -> Result<f64> {
    check_dims(psi, phi)?;
    let s2 = (delta / 2.0).sin().powi(2);
    Ok(psi
        .amplitudes()
        .iter()
        .zip(phi)
        .map(|(a, f)| {
            let p = f.norm_sqr();
            a.norm_sqr() * (1.0 - 4.0 * s2 * p * (1.0 - p))
        })
        .sum())
}

pub fn exact_outcome_distribution(
    psi: &StateVector,
    phi: &[Complex64],
    delta: f64,
    completion: Completion,
) -> Result<OutcomeDistribution> {
    check_dims(psi, phi)?;
    let u = InitializerUnitary::new(phi, completion)?;
    let s2 = (delta / 2.0).sin().powi(2);
    let mut probabilities = vec![exact_success_probability(psi, phi, delta)?];
    for mu in 1..phi.len() {
        let col = u.column(mu)?;
        let weight: f64 = psi
            .amplitudes()
            .iter()
            .zip(&col)
            .zip(phi)
            .map(|((a, c), f)| a.norm_sqr() * c.norm_sqr() * f.norm_sqr())
            .sum();
        probabilities.push(4.0 * s2 * weight);
    }
    Ok(OutcomeDistribution { probabilities })
}

/// Normalized ψ'₀; independent of the completion.
pub fn exact_postselected_state(psi: &StateVector, phi: &[Complex64], delta: f64) -> Result<StateVector> {
    check_dims(psi, phi)?;
    let k = branch_coefficient(delta);
    let amps: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(phi)
        .map(|(a, f)| a * (Complex64::new(1.0, 0.0) + k * f.norm_sqr()))
        .collect();
    normalized_branch(amps, 0)
}

/// Normalized ψ'_μ for a failure outcome μ ≠ 0 under the given completion.
pub fn exact_failure_state(
    psi: &StateVector,
    phi: &[Complex64],
    delta: f64,
    mu: usize,
    completion: Completion,
) -> Result<StateVector> {
    check_dims(psi, phi)?;
    if mu == 0 {
        return Err(Error::InvalidParameter("failure branch needs mu != 0".into()));
    }
    let u = InitializerUnitary::new(phi, completion)?;
    let col = u.column(mu)?;
    let k = branch_coefficient(delta);
    let amps: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(&col)
        .zip(phi)
        .map(|((a, c), f)| a * k * c.conj() * f)
        .collect();
    normalized_branch(amps, mu)
}

fn normalized_branch(amps: Vec<Complex64>, outcome: usize) -> Result<StateVector> {
    let probability = l2_norm(&amps).powi(2);
    if probability < BRANCH_EPS {
        return Err(Error::ImpossibleBranch { outcome, probability });
    }
    StateVector::from_amplitudes(amps)
}

pub fn run_protocol(psi: &StateVector, phi: &[Complex64], config: &ProtocolConfig) -> Result<ProtocolResult> {
    check_dims(psi, phi)?;
    if config.cycles < 1 {
        return Err(Error::InvalidParameter("cycles must be at least 1".into()));
    }
    let cycle = match config.mode {
        ProtocolMode::Exact => None,
        _ => Some(Cycle::new(phi, config.delta, config.completion)?),
    };
    let mut state = psi.clone();
    let mut total = 1.0;
    let mut log = Vec::with_capacity(config.cycles);
    let mut failed_at = None;

    for k in 0..config.cycles {
        let p0 = exact_success_probability(&state, phi, config.delta)?;
        total *= p0;
        let outcome = match (config.mode, &cycle) {
            (ProtocolMode::Sampled, Some(c)) => {
                let mut rng = rng::stream(config.seed, &[k as u64]);
                c.run(&state, &mut rng)?
            }
            (ProtocolMode::Postselected, Some(c)) => {
                let (post_state, probability) = c.branch(&state, 0)?;
                CycleOutcome { mu: 0, success: true, probability, post_state }
            }
            _ => CycleOutcome {
                mu: 0,
                success: true,
                probability: p0,
                post_state: exact_postselected_state(&state, phi, config.delta)?,
            },
        };
        state = outcome.post_state.clone();
        let success = outcome.success;
        log.push(outcome);
        if !success {
            failed_at = Some(k);
            break;
        }
    }

    Ok(ProtocolResult {
        mode: config.mode,
        delta: config.delta,
        cycles: config.cycles,
        final_state: state,
        cycles_run: log.len(),
        failed_at,
        total_success_probability: total,
        outcome_log: log,
    })
}

fn check_dims(psi: &StateVector, phi: &[Complex64]) -> Result<()> {
    if psi.dim() != phi.len() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: phi.len() });
    }
    let norm = l2_norm(phi);
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(if norm > 0.0 { Error::NotNormalized(norm) } else { Error::ZeroVector });
    }
    Ok(())
}
