//! Property suites runnable from the command line.
//!
//! Each check returns a [`CheckResult`] with the worst observed value next to
//! its threshold. Checks draw instances from seeded streams and are cheap
//! enough to run on every invocation.

use rand::Rng;
use serde::Serialize;

use qphase::partial_phase::dense_operator;
use qphase::protocol::{
    exact_outcome_distribution, exact_postselected_state, exact_success_probability, run_protocol, Cycle,
};
use qphase::state::dft_matrix;
use qphase::{
    rng, Completion, Complex64, GateOp, HamiltonianSpec, OperatorSource, PartialPhaseCircuit, PhaseMode,
    ProtocolConfig, ProtocolMode, StateVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Core,
    PartialPhase,
    Protocol,
    Hamiltonian,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

pub type SuccessProbabilityFn = fn(&StateVector, &[Complex64], f64) -> qphase::Result<f64>;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// P(0) implementation under test by the lower-bound check.
    pub success_probability: SuccessProbabilityFn,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: rng::DEFAULT_SEED, success_probability: exact_success_probability }
    }
}

pub fn verify(suite: Suite, options: &VerifyOptions) -> qphase::Result<VerifyReport> {
    let suites = match suite {
        Suite::All => vec![Suite::Core, Suite::PartialPhase, Suite::Protocol, Suite::Hamiltonian],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in suites {
        match s {
            Suite::Core => core_suite(options.seed, &mut checks)?,
            Suite::PartialPhase => partial_phase_suite(options.seed, &mut checks)?,
            Suite::Protocol => protocol_suite(options, &mut checks)?,
            Suite::Hamiltonian => hamiltonian_suite(&mut checks)?,
            Suite::All => unreachable!(),
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { seed: options.seed, passed, checks })
}

fn at_most(suite: Suite, name: &'static str, worst: f64, threshold: f64) -> CheckResult {
    CheckResult { suite, name, passed: worst <= threshold, worst, threshold }
}

fn random_amplitudes<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
        .collect();
    StateVector::from_amplitudes(raw).expect("nonzero draw").into_amplitudes()
}

fn random_state<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    StateVector::from_amplitudes(random_amplitudes(n, rng)).expect("normalized")
}

fn core_suite(seed: u64, out: &mut Vec<CheckResult>) -> qphase::Result<()> {
    let mut rng = rng::stream(seed, &[1, 0]);
    let (mut marg, mut norm, mut rdm_trace, mut rdm_neg) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 1 + i % 4;
        let s = random_state(n, &mut rng);
        for mask in 1..(1usize << n) {
            let qubits: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
            let sum: f64 = s.marginal_probabilities(&qubits)?.iter().sum();
            marg = marg.max((sum - 1.0).abs());
            if qubits.len() < n {
                let rho = s.reduced_density_matrix(&qubits)?;
                rdm_trace = rdm_trace.max((rho.trace() - 1.0).abs());
                rdm_neg = rdm_neg.max(-rho.eigenvalues()[0]);
            }
        }
        let mut gates = vec![
            GateOp::hadamard(0),
            GateOp::mcphase((0..n).collect(), rng.random_range(-8.0..8.0)),
        ];
        if n > 1 {
            gates.push(GateOp::cnot0(0, n - 1));
        }
        let g = s.apply_gates(&gates)?;
        norm = norm.max((g.norm() - 1.0).abs());
    }
    out.push(at_most(Suite::Core, "marginals-sum-to-one", marg, 1e-12));
    out.push(at_most(Suite::Core, "gate-norm-preservation", norm, 1e-12));
    out.push(at_most(Suite::Core, "reduced-state-trace", rdm_trace, 1e-12));
    out.push(at_most(Suite::Core, "reduced-state-positivity", rdm_neg, 1e-10));

    let mut qft = 0.0f64;
    for n in 1..=3 {
        let f = dft_matrix(n, false);
        let reg: Vec<usize> = (0..n).collect();
        for col in 0..1usize << n {
            let got = StateVector::basis(n, col)?.qft(&reg, false)?;
            for (row, a) in got.amplitudes().iter().enumerate() {
                qft = qft.max((a - f[(row, col)]).norm());
            }
        }
        let s = random_state(n, &mut rng);
        let back = s.qft(&reg, false)?.qft(&reg, true)?;
        for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
            qft = qft.max((a - b).norm());
        }
    }
    out.push(at_most(Suite::Core, "qft-matches-dft", qft, 1e-12));
    Ok(())
}

fn partial_phase_suite(seed: u64, out: &mut Vec<CheckResult>) -> qphase::Result<()> {
    let mut rng = rng::stream(seed, &[2, 0]);
    let (mut dev, mut unit, mut count) = (0.0f64, 0.0f64, 0.0f64);
    for n in 1..=3 {
        for _ in 0..20 {
            let delta = rng.random_range(-8.0..8.0);
            let direct = dense_operator(n, delta, OperatorSource::Direct)?;
            let circuit = dense_operator(n, delta, OperatorSource::Circuit)?;
            dev = dev.max(direct.max_deviation(&circuit));
            unit = unit.max(circuit.unitarity_deviation());
            let gates = PartialPhaseCircuit::new(n, delta)?.gate_count();
            count = count.max((gates as f64 - (2 * n + 1) as f64).abs());
        }
    }
    out.push(at_most(Suite::PartialPhase, "circuit-equals-direct", dev, 1e-12));
    out.push(at_most(Suite::PartialPhase, "circuit-unitarity", unit, 1e-12));
    out.push(at_most(Suite::PartialPhase, "gate-count", count, 0.0));
    Ok(())
}

fn protocol_suite(options: &VerifyOptions, out: &mut Vec<CheckResult>) -> qphase::Result<()> {
    let mut rng = rng::stream(options.seed, &[3, 0]);
    // violation of P(0) ≥ cos²(Δ/2), positive means broken
    let (mut bound, mut completions) = (f64::NEG_INFINITY, 0.0f64);
    for i in 0..1000 {
        let n = 1 + i % 3;
        let psi = random_state(n, &mut rng);
        let phi = random_amplitudes(n, &mut rng);
        let delta = rng.random_range(-8.0..8.0);
        let p0 = (options.success_probability)(&psi, &phi, delta)?;
        bound = bound.max((delta / 2.0).cos().powi(2) - p0);
        let h = exact_outcome_distribution(&psi, &phi, delta, Completion::Householder)?;
        let g = exact_outcome_distribution(&psi, &phi, delta, Completion::GramSchmidt)?;
        completions = completions.max((h.success() - g.success()).abs());
    }
    out.push(at_most(Suite::Protocol, "success-lower-bound", bound, 1e-12));
    out.push(at_most(Suite::Protocol, "completion-independence", completions, 1e-12));

    let (mut dist, mut post) = (0.0f64, 0.0f64);
    for i in 0..60 {
        let n = 1 + i % 3;
        let psi = random_state(n, &mut rng);
        let phi = random_amplitudes(n, &mut rng);
        let delta = rng.random_range(-8.0..8.0);
        let completion = if i % 2 == 0 { Completion::Householder } else { Completion::GramSchmidt };
        let cycle = Cycle::new(&phi, delta, completion)?;
        let sim = cycle.outcome_probabilities(&psi)?;
        let exact = exact_outcome_distribution(&psi, &phi, delta, completion)?;
        for (a, b) in sim.iter().zip(&exact.probabilities) {
            dist = dist.max((a - b).abs());
        }
        let (state, _) = cycle.branch(&psi, 0)?;
        let want = exact_postselected_state(&psi, &phi, delta)?;
        post = post.max(1.0 - state.fidelity(&want)?);
    }
    out.push(at_most(Suite::Protocol, "circuit-outcome-distribution", dist, 1e-12));
    out.push(at_most(Suite::Protocol, "postselected-state", post, 1e-12));

    let psi = StateVector::uniform(3)?;
    let phi = StateVector::from_real(&(0..8).map(|x| x as f64).collect::<Vec<_>>())?.into_amplitudes();
    let fail = |m: usize| -> qphase::Result<f64> {
        let cfg = ProtocolConfig::from_alpha(1.0, m, ProtocolMode::Exact)?;
        Ok(1.0 - run_protocol(&psi, &phi, &cfg)?.total_success_probability)
    };
    let mut worst = 0.0f64;
    for m in [50, 100] {
        worst = worst.max((fail(m)? / fail(2 * m)? - 2.0).abs());
    }
    out.push(at_most(Suite::Protocol, "failure-scaling-ratio", worst, 0.2));
    Ok(())
}

fn hamiltonian_suite(out: &mut Vec<CheckResult>) -> qphase::Result<()> {
    let spec = HamiltonianSpec::harmonic_oscillator(3, 1.0, 1)?;
    let psi = oscillator_test_state(3, 1.0)?;
    let exact = qphase::hamiltonian::exact_evolution(&psi, &spec)?;
    let mut dist = Vec::new();
    let mut norm = 0.0f64;
    for m in [1, 2, 4, 8, 16, 32] {
        let s = qphase::hamiltonian::evolve(&psi, &spec.with_steps(m), PhaseMode::Exact)?;
        norm = norm.max((s.norm() - 1.0).abs());
        dist.push(s.distance(&exact)?);
    }
    let increases = dist.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    let ratio = dist[3..].windows(2).map(|w| (w[0] / w[1] - 2.0).abs()).fold(0.0, f64::max);
    out.push(at_most(Suite::Hamiltonian, "trotter-monotone", increases, 0.0));
    out.push(at_most(Suite::Hamiltonian, "trotter-first-order", ratio, 0.3));
    out.push(at_most(Suite::Hamiltonian, "norm-preservation", norm, 1e-12));

    let small = HamiltonianSpec::harmonic_oscillator(2, 0.4, 2)?;
    let start = oscillator_test_state(2, 0.3)?;
    let a = qphase::hamiltonian::evolve(&start, &small, PhaseMode::Exact)?;
    let b = qphase::hamiltonian::evolve(&start, &small, PhaseMode::protocol(200))?;
    out.push(at_most(Suite::Hamiltonian, "protocol-phase-fidelity", 1.0 - a.fidelity(&b)?, 1e-4));
    Ok(())
}

/// Gaussian e^{−(x−centre)²/2} on the oscillator grid.
pub fn oscillator_test_state(n: usize, centre: f64) -> qphase::Result<StateVector> {
    let dim = 1usize << n;
    let dx = (2.0 * std::f64::consts::PI / dim as f64).sqrt();
    let v: Vec<f64> = (0..dim)
        .map(|k| {
            let x = (k as f64 - (dim / 2) as f64) * dx;
            (-(x - centre).powi(2) / 2.0).exp()
        })
        .collect();
    StateVector::from_real(&v)
}
