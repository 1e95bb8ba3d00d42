//! Quadratic phase demo: ψ uniform, φ(x) ∝ x, post-selected run.

use std::f64::consts::PI;

use serde::Serialize;

use qphase::protocol::run_protocol;
use qphase::{Complex64, ProtocolConfig, ProtocolMode, StateVector};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct DemoRow {
    pub x: usize,
    pub magnitude: f64,
    /// arg ψ(x) − arg ψ(0), wrapped into (−π, π]
    pub phase: f64,
    pub unwrapped_phase: f64,
    /// α·x²
    pub ideal_phase: f64,
    /// unwrapped − ideal
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub n: usize,
    pub delta: f64,
    pub cycles: usize,
    pub alpha: f64,
    pub total_success_probability: f64,
    pub fidelity_with_ideal: f64,
    /// max |ψ_sim − e^{iθ}ψ_oracle| against the iterated closed-form map
    pub oracle_deviation: f64,
    pub rows: Vec<DemoRow>,
}

/// φ(x) = x/√A with A = Σx².
pub fn linear_software_state(n: usize) -> CliResult<(Vec<Complex64>, f64)> {
    let dim = 1usize << n;
    let a: f64 = (0..dim).map(|x| (x * x) as f64).sum();
    let v: Vec<f64> = (0..dim).map(|x| x as f64).collect();
    Ok((StateVector::from_real(&v)?.into_amplitudes(), a))
}

pub fn demo_quadratic(delta: f64, cycles: usize, n: usize) -> CliResult<DemoReport> {
    if !(1..=12).contains(&n) {
        return Err(CliError::Usage(format!("--qubits must be in 1..=12, got {n}")));
    }
    let psi = StateVector::uniform(n)?;
    let (phi, a) = linear_software_state(n)?;
    let sim = run_protocol(&psi, &phi, &ProtocolConfig::from_delta(delta, cycles, ProtocolMode::Postselected)?)?;
    let oracle = run_protocol(&psi, &phi, &ProtocolConfig::from_delta(delta, cycles, ProtocolMode::Exact)?)?;
    let out = &sim.final_state;
    let alpha = cycles as f64 * delta / a;

    let amps = out.amplitudes();
    let ref_phase = amps[0].arg();
    let mut rows = Vec::with_capacity(amps.len());
    let (mut prev, mut prev_ideal) = (0.0, 0.0);
    for (x, amp) in amps.iter().enumerate() {
        let phase = wrap(amp.arg() - ref_phase);
        let ideal = alpha * (x * x) as f64;
        // nearest branch to the previous value advanced by the ideal increment
        let predicted = prev + (ideal - prev_ideal);
        let unwrapped = if x == 0 { 0.0 } else { predicted + wrap(phase - predicted) };
        (prev, prev_ideal) = (unwrapped, ideal);
        rows.push(DemoRow {
            x,
            magnitude: amp.norm(),
            phase,
            unwrapped_phase: unwrapped,
            ideal_phase: ideal,
            deviation: unwrapped - ideal,
        });
    }
    let ideal = ideal_state(n, alpha)?;

    Ok(DemoReport {
        n,
        delta,
        cycles,
        alpha,
        total_success_probability: sim.total_success_probability,
        fidelity_with_ideal: out.fidelity(&ideal)?,
        oracle_deviation: phase_aligned_deviation(amps, oracle.final_state.amplitudes()),
        rows,
    })
}

/// Uniform magnitudes with phase α·x².
pub fn ideal_state(n: usize, alpha: f64) -> CliResult<StateVector> {
    let dim = 1usize << n;
    let amps = (0..dim)
        .map(|x| Complex64::from_polar(1.0, alpha * (x * x) as f64))
        .collect();
    Ok(StateVector::from_amplitudes(amps)?)
}

pub fn phase_aligned_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    let rot = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - rot * y).norm()))
}

fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI { t - 2.0 * PI } else { t }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_tracks_quadratic() {
        let r = demo_quadratic(0.05, 100, 3).unwrap();
        assert!((r.alpha - 5.0 / 140.0).abs() < 1e-15);
        assert!(r.oracle_deviation <= 1e-10);
        assert!(r.fidelity_with_ideal > 0.9999);
        for row in &r.rows {
            assert!(row.deviation.abs() < 1e-3);
            assert!((row.magnitude - 8f64.sqrt().recip()).abs() < 1e-2);
        }
    }

    #[test]
    fn zero_delta_is_flat() {
        let r = demo_quadratic(0.0, 10, 3).unwrap();
        for row in &r.rows {
            assert!(row.phase.abs() < 1e-15);
            assert!((row.magnitude - 8f64.sqrt().recip()).abs() < 1e-15);
        }
    }

    #[test]
    fn single_qubit_phase_is_exact() {
        let r = demo_quadratic(0.3, 7, 1).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!((r.rows[1].unwrapped_phase - 2.1).abs() < 1e-12);
        assert!((r.fidelity_with_ideal - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unwrapping_follows_large_phases() {
        // α = 50/140, so neighbouring phases differ by more than π near x = 7
        let r = demo_quadratic(0.05, 1000, 3).unwrap();
        assert!(r.rows.iter().all(|row| row.phase.abs() <= PI));
        assert!(r.rows[7].unwrapped_phase > 2.0 * PI);
        assert!(r.rows.iter().all(|row| row.deviation.abs() < 0.05));
    }

    #[test]
    fn wrap_range() {
        assert!((wrap(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap(-0.5) + 0.5).abs() < 1e-15);
    }
}
