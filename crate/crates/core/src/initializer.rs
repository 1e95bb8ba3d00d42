//! Unitary completions U_φ with U_φ|0⟩ = |φ⟩.
//!
//! Only column 0 is fixed by the target. The remaining columns φ_μ decide the
//! failure-branch states of a protocol cycle, so two completions are offered:
//! a single Householder reflection (canonical) and Gram–Schmidt over the
//! computational basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{l2_norm, qubits_for_len, MaxAbs, StateVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Accepted deviation of ‖φ‖ from 1.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completion {
    #[default]
    Householder,
    GramSchmidt,
}

#[derive(Debug, Clone)]
pub struct InitializerUnitary {
    n: usize,
    matrix: DMatrix<Complex64>,
    completion: Completion,
}

impl InitializerUnitary {
    pub fn new(phi: &[Complex64], completion: Completion) -> Result<Self> {
        match completion {
            Completion::Householder => Self::householder(phi),
            Completion::GramSchmidt => Self::gram_schmidt(phi),
        }
    }

    /// U = e^{iθ}(I − 2vv†/v†v), v = φ − e^{iθ}|0⟩, θ = arg φ(0).
    ///
    /// The reflection sends e^{iθ}|0⟩ to φ; the global factor e^{iθ} makes
    /// column 0 equal φ exactly.
    pub fn householder(phi: &[Complex64]) -> Result<Self> {
        let (n, phi) = validated(phi)?;
        let dim = phi.len();
        let theta = if phi[0].norm() > 0.0 { phi[0].arg() } else { 0.0 };
        let rot = Complex64::from_polar(1.0, theta);
        let mut v = phi.clone();
        v[0] -= rot;
        let vv = v.norm_squared();
        let matrix = if vv.sqrt() < 1e-12 {
            let mut m = DMatrix::identity(dim, dim);
            m[(0, 0)] = rot;
            m
        } else {
            let reflector = DMatrix::identity(dim, dim) - (&v * v.adjoint()) * Complex64::new(2.0 / vv, 0.0);
            reflector * rot
        };
        Ok(Self { n, matrix, completion: Completion::Householder })
    }

    /// φ followed by the computational basis vectors, orthonormalized in order
    /// (two passes of modified Gram–Schmidt); near-dependent vectors are skipped.
    pub fn gram_schmidt(phi: &[Complex64]) -> Result<Self> {
        let (n, phi) = validated(phi)?;
        let dim = phi.len();
        let mut columns: Vec<DVector<Complex64>> = vec![phi];
        for k in 0..dim {
            if columns.len() == dim {
                break;
            }
            let mut v = DVector::from_element(dim, ZERO);
            v[k] = ONE;
            for _ in 0..2 {
                for c in &columns {
                    let proj = c.dotc(&v);
                    v -= c * proj;
                }
            }
            let norm = v.norm();
            if norm > 1e-8 {
                columns.push(v / Complex64::new(norm, 0.0));
            }
        }
        debug_assert_eq!(columns.len(), dim);
        Ok(Self { n, matrix: DMatrix::from_columns(&columns), completion: Completion::GramSchmidt })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn completion(&self) -> Completion {
        self.completion
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// φ_μ = U_φ|μ⟩
    pub fn column(&self, mu: usize) -> Result<Vec<Complex64>> {
        if mu >= self.dim() {
            return Err(Error::IndexOutOfRange { index: mu, n_qubits: self.n });
        }
        Ok(self.matrix.column(mu).iter().copied().collect())
    }

    /// max |(U†U − I)_ij|
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        (prod - DMatrix::identity(self.dim(), self.dim())).max_abs()
    }

    /// Applies U_φ (or U_φ† when `adjoint`) along `register`.
    pub fn apply(&self, state: &StateVector, register: &[usize], adjoint: bool) -> Result<StateVector> {
        state.check_register(register)?;
        if register.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: register.len() });
        }
        if adjoint {
            Ok(state.apply_register_matrix(register, &self.matrix.adjoint()))
        } else {
            Ok(state.apply_register_matrix(register, &self.matrix))
        }
    }
}

pub fn householder_unitary(phi: &[Complex64]) -> Result<InitializerUnitary> {
    InitializerUnitary::householder(phi)
}

pub fn gram_schmidt_unitary(phi: &[Complex64]) -> Result<InitializerUnitary> {
    InitializerUnitary::gram_schmidt(phi)
}

pub fn apply_initializer(
    state: &StateVector,
    u: &InitializerUnitary,
    register: &[usize],
    adjoint: bool,
) -> Result<StateVector> {
    u.apply(state, register, adjoint)
}

/// Checks length and norm, returns (n, φ rescaled to unit norm).
fn validated(phi: &[Complex64]) -> Result<(usize, DVector<Complex64>)> {
    let n = qubits_for_len(phi.len())?;
    let norm = l2_norm(phi);
    if !(norm > 1e-12) {
        return Err(Error::ZeroVector);
    }
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    Ok((n, DVector::from_iterator(phi.len(), phi.iter().map(|a| a / norm))))
}
