#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qphase::{Complex64, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps = (0..1 << n)
        .map(|_| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
        .collect();
    StateVector::from_amplitudes(amps).unwrap()
}

pub fn random_phi(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    random_state(n, rng).into_amplitudes()
}

pub fn uniform(n: usize) -> StateVector {
    StateVector::uniform(n).unwrap()
}

/// φ(x) ∝ x
pub fn linear(n: usize) -> Vec<Complex64> {
    let v: Vec<f64> = (0..1usize << n).map(|x| x as f64).collect();
    StateVector::from_real(&v).unwrap().into_amplitudes()
}

/// U(Δ) read off its definition: e^{iΔ} on index x·N + y when x = y.
pub fn partial_phase_from_definition(n: usize, delta: f64) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let diag = (0..dim * dim).map(|s| {
        if s / dim == s % dim {
            Complex64::from_polar(1.0, delta)
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    DMatrix::from_diagonal(&DVector::from_iterator(dim * dim, diag))
}

/// |Γ⟩ = (I⊗U†)·U(Δ)·(I⊗U)|ψ⟩|0⟩ from dense Kronecker products.
pub fn dense_cycle_state(psi: &StateVector, u: &DMatrix<Complex64>, delta: f64) -> DVector<Complex64> {
    let dim = psi.dim();
    let n = psi.n_qubits();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let load = id.kronecker(u);
    let unload = id.kronecker(&u.adjoint());
    let mut start = DVector::from_element(dim * dim, Complex64::new(0.0, 0.0));
    for x in 0..dim {
        start[x * dim] = psi.amplitudes()[x];
    }
    unload * partial_phase_from_definition(n, delta) * load * start
}

/// (P(μ), unnormalized ψ'_μ) from the dense composite state.
pub fn dense_branches(gamma: &DVector<Complex64>, dim: usize) -> Vec<(f64, Vec<Complex64>)> {
    (0..dim)
        .map(|mu| {
            let branch: Vec<Complex64> = (0..dim).map(|x| gamma[x * dim + mu]).collect();
            (branch.iter().map(|a| a.norm_sqr()).sum(), branch)
        })
        .collect()
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// max |a − e^{iθ}b| with θ chosen to align b with a.
pub fn phase_aligned_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    let rot = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - rot * y).norm()))
}

/// Normalized copy of a raw amplitude list.
pub fn normalized(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|a| a / n).collect()
}
