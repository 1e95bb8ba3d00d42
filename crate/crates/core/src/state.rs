//! Dense statevector engine.
//!
//! Qubit `q` of an `n`-qubit state is bit `q` of the basis index, so qubit 0
//! is the least significant bit. A *register* is an ordered list of qubits;
//! the register value `v` has bit `j` equal to the state of `register[j]`.
//!
//! Every operation takes `&self` and returns a fresh state.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rustfft::{FftDirection, FftPlanner};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gate::GateOp;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Branch norms below this are treated as numerically impossible outcomes.
pub const BRANCH_EPS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Result of a sampled subregister measurement.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: usize,
    pub collapsed: StateVector,
    /// Exact marginal probability of `outcome`.
    pub probability: f64,
}

impl StateVector {
    /// Computational basis state |index⟩ on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!("n_qubits = {n_qubits}")));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, n_qubits });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { n_qubits, amplitudes })
    }

    /// Normalizes `values` into a state. The length must be a power of two (at least 2).
    pub fn from_amplitudes(values: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(values.len())?;
        let norm = l2_norm(&values);
        if !(norm > 1e-12) || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let amplitudes = values.into_iter().map(|a| a / norm).collect();
        Ok(Self { n_qubits, amplitudes })
    }

    /// Real amplitudes convenience constructor; normalizes like [`from_amplitudes`](Self::from_amplitudes).
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Uniform superposition over all 2ⁿ basis states.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!("n_qubits = {n_qubits}")));
        }
        Self::from_real(&vec![1.0; 1 << n_qubits])
    }

    /// Product state with `high` on the most significant qubits and `low` on the rest.
    pub fn product(high: &StateVector, low: &StateVector) -> Self {
        let mut amplitudes = Vec::with_capacity(high.dim() * low.dim());
        for h in &high.amplitudes {
            for l in &low.amplitudes {
                amplitudes.push(h * l);
            }
        }
        Self { n_qubits: high.n_qubits + low.n_qubits, amplitudes }
    }

    pub(crate) fn from_normalized(amplitudes: Vec<Complex64>) -> Self {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_dim(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Trace distance between the two pure states, √(1 − |⟨a|b⟩|²).
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        let f = self.fidelity(other)?.min(1.0);
        Ok((1.0 - f * f).max(0.0).sqrt())
    }

    /// Multiplies amplitude `i` by e^{i·phases[i]}.
    pub fn apply_phases(&self, phases: &[f64]) -> Result<StateVector> {
        if phases.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: phases.len() });
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(phases)
            .map(|(a, &p)| a * Complex64::from_polar(1.0, p))
            .collect();
        Ok(Self::from_normalized(amplitudes))
    }

    pub fn apply_gate(&self, gate: &GateOp) -> Result<StateVector> {
        gate.validate(self.n_qubits)?;
        let mut out = self.amplitudes.clone();
        match gate {
            GateOp::SingleQubit { matrix, target } => {
                let bit = 1usize << target;
                for i in 0..out.len() {
                    if i & bit == 0 {
                        let a0 = self.amplitudes[i];
                        let a1 = self.amplitudes[i | bit];
                        out[i] = matrix[0][0] * a0 + matrix[0][1] * a1;
                        out[i | bit] = matrix[1][0] * a0 + matrix[1][1] * a1;
                    }
                }
            }
            GateOp::Cnot0 { control, target } => {
                let c = 1usize << control;
                let t = 1usize << target;
                for i in 0..out.len() {
                    if i & c == 0 {
                        out[i] = self.amplitudes[i ^ t];
                    }
                }
            }
            GateOp::MultiControlledPhase { controls, delta } => {
                let mask = register_mask(controls);
                let phase = Complex64::from_polar(1.0, *delta);
                for (i, a) in out.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a *= phase;
                    }
                }
            }
        }
        Ok(Self::from_normalized(out))
    }

    pub fn apply_gates<'a>(&self, gates: impl IntoIterator<Item = &'a GateOp>) -> Result<StateVector> {
        let mut state = self.clone();
        for gate in gates {
            state = state.apply_gate(gate)?;
        }
        Ok(state)
    }

    /// Probability of each value of `qubits`, indexed by register value.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_register(qubits)?;
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[register_value(i, qubits)] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Projects onto `qubits == outcome` and renormalizes by the exact branch norm.
    /// Returns the collapsed state and the branch probability.
    pub fn project(&self, qubits: &[usize], outcome: usize) -> Result<(StateVector, f64)> {
        self.check_register(qubits)?;
        if outcome >= 1 << qubits.len() {
            return Err(Error::IndexOutOfRange { index: outcome, n_qubits: qubits.len() });
        }
        let mut out = vec![ZERO; self.dim()];
        let mut probability = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if register_value(i, qubits) == outcome {
                out[i] = *a;
                probability += a.norm_sqr();
            }
        }
        if probability < BRANCH_EPS {
            return Err(Error::ImpossibleBranch { outcome, probability });
        }
        let scale = probability.sqrt();
        out.iter_mut().for_each(|a| *a /= scale);
        Ok((Self::from_normalized(out), probability))
    }

    /// Samples an outcome of `qubits` from the marginal distribution and collapses.
    pub fn measure_subregister<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<Measurement> {
        let probs = self.marginal_probabilities(qubits)?;
        let outcome = sample_index(&probs, rng.random::<f64>());
        let (collapsed, probability) = self.project(qubits, outcome)?;
        Ok(Measurement { outcome, collapsed, probability })
    }

    /// Partial trace over every qubit not in `keep`. The kept register's value
    /// indexes the rows and columns of the result.
    pub fn reduced_density_matrix(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.check_register(keep)?;
        if keep.len() >= self.n_qubits {
            return Err(Error::InvalidQubits("keep must be a proper subset".into()));
        }
        let dim = 1 << keep.len();
        let mask = register_mask(keep);
        let offsets: Vec<usize> = (0..dim).map(|v| register_offset(v, keep)).collect();
        let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
        for base in (0..self.dim()).filter(|i| i & mask == 0) {
            for (r, &or) in offsets.iter().enumerate() {
                let ar = self.amplitudes[base | or];
                if ar == ZERO {
                    continue;
                }
                for (c, &oc) in offsets.iter().enumerate() {
                    rho[(r, c)] += ar * self.amplitudes[base | oc].conj();
                }
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(rho))
    }

    /// Discrete Fourier transform along `register`, entries e^{2πi·jk/N}/√N.
    /// `inverse` applies the conjugate transpose.
    pub fn qft(&self, register: &[usize], inverse: bool) -> Result<StateVector> {
        self.check_register(register)?;
        let dim = 1usize << register.len();
        // rustfft's forward transform uses e^{−2πi·jk/N}
        let direction = if inverse { FftDirection::Forward } else { FftDirection::Inverse };
        let fft = FftPlanner::new().plan_fft(dim, direction);
        let scale = 1.0 / (dim as f64).sqrt();
        let mask = register_mask(register);
        let offsets: Vec<usize> = (0..dim).map(|v| register_offset(v, register)).collect();
        let mut out = vec![ZERO; self.dim()];
        let mut local = vec![ZERO; dim];
        let mut scratch = vec![ZERO; fft.get_inplace_scratch_len()];
        for base in (0..self.dim()).filter(|i| i & mask == 0) {
            for (l, &o) in local.iter_mut().zip(&offsets) {
                *l = self.amplitudes[base | o];
            }
            fft.process_with_scratch(&mut local, &mut scratch);
            for (l, &o) in local.iter().zip(&offsets) {
                out[base | o] = l * scale;
            }
        }
        Ok(Self::from_normalized(out))
    }

    /// Applies `matrix` along the amplitude axis of `register`. The caller
    /// guarantees that `matrix` is unitary and sized 2^|register|.
    pub(crate) fn apply_register_matrix(&self, register: &[usize], matrix: &DMatrix<Complex64>) -> StateVector {
        let dim = 1usize << register.len();
        debug_assert_eq!(matrix.nrows(), dim);
        let mask = register_mask(register);
        let offsets: Vec<usize> = (0..dim).map(|v| register_offset(v, register)).collect();
        let mut out = vec![ZERO; self.dim()];
        let mut local = vec![ZERO; dim];
        for base in (0..self.dim()).filter(|i| i & mask == 0) {
            for (v, &o) in offsets.iter().enumerate() {
                local[v] = self.amplitudes[base | o];
            }
            for (r, &o) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (c, l) in local.iter().enumerate() {
                    acc += matrix[(r, c)] * l;
                }
                out[base | o] = acc;
            }
        }
        Self::from_normalized(out)
    }

    pub(crate) fn check_register(&self, qubits: &[usize]) -> Result<()> {
        if qubits.is_empty() {
            return Err(Error::InvalidQubits("empty qubit set".into()));
        }
        check_register(qubits, self.n_qubits)
    }

    fn check_same_dim(&self, other: &StateVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

pub(crate) fn check_register(qubits: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::InvalidQubits(format!("qubit {q} out of range for {n_qubits} qubits")));
        }
        if qubits[..i].contains(&q) {
            return Err(Error::InvalidQubits(format!("qubit {q} repeated")));
        }
    }
    Ok(())
}

pub(crate) fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

pub(crate) fn l2_norm(values: &[Complex64]) -> f64 {
    values.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Value of `register` in basis index `index`.
pub fn register_value(index: usize, register: &[usize]) -> usize {
    register
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | (((index >> q) & 1) << j))
}

/// Basis-index bits that encode register value `value`.
pub fn register_offset(value: usize, register: &[usize]) -> usize {
    register
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | (((value >> j) & 1) << q))
}

fn register_mask(register: &[usize]) -> usize {
    register.iter().fold(0, |acc, &q| acc | (1 << q))
}

/// Inverse-CDF draw. `u` is uniform on [0, 1); rounding slack falls on the
/// last outcome with nonzero weight.
pub fn sample_index(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Largest entry modulus of a complex matrix.
pub trait MaxAbs {
    fn max_abs(&self) -> f64;
}

impl<R, C, S> MaxAbs for nalgebra::Matrix<Complex64, R, C, S>
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<Complex64, R, C>,
{
    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Dense DFT matrix on `n_qubits` qubits.
pub fn dft_matrix(n_qubits: usize, inverse: bool) -> DMatrix<Complex64> {
    let dim = 1usize << n_qubits;
    let sign = if inverse { -1.0 } else { 1.0 };
    let scale = 1.0 / (dim as f64).sqrt();
    DMatrix::from_fn(dim, dim, |j, k| {
        let angle = sign * 2.0 * std::f64::consts::PI * ((j * k) % dim) as f64 / dim as f64;
        Complex64::from_polar(scale, angle)
    })
}
