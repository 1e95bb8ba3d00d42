use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{MaxAbs, StateVector};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity (−1e-10).
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidParameter("density matrix must be square".into()));
        }
        let rho = Self { matrix };
        let herm = rho.hermiticity_deviation();
        if herm > 1e-12 {
            return Err(Error::InvalidParameter(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("trace {tr} != 1")));
        }
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::InvalidParameter(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    /// |ψ⟩⟨ψ|
    pub fn pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        Self { matrix: DMatrix::from_fn(dim, dim, |r, c| a[r] * a[c].conj()) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|d| d.re).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).max_abs()
    }

    /// Real eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// ½‖ρ − σ‖₁
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let diff = &self.matrix - &other.matrix;
        let herm = (&diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(0.5 * herm.symmetric_eigenvalues().iter().map(|l| l.abs()).sum::<f64>())
    }

    /// tr(ρ²)
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).diagonal().iter().map(|d| d.re).sum()
    }
}
