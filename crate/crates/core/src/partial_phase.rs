//! The partial phase operator U(Δ): e^{iΔ} on |x⟩|y⟩ when x = y, identity otherwise.
//!
//! Two routes are provided. [`apply_partial_phase_direct`] multiplies the
//! matching diagonal entries. [`PartialPhaseCircuit`] builds the gate-level
//! version: n CNOT₀ gates compute per-qubit equality flags z_j = x_j ⊕ ¬y_j in
//! place on the primary register, a phase gate controlled on all flags applies
//! e^{iΔ}, and the same CNOT₀ gates in reverse order uncompute the flags.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::layout::RegisterLayout;
use crate::state::{MaxAbs, StateVector};

/// Largest register size accepted by [`dense_operator`] (256×256 matrix).
pub const MAX_DENSE_N: usize = 4;

pub fn apply_partial_phase_direct(
    state: &StateVector,
    layout: &RegisterLayout,
    delta: f64,
) -> Result<StateVector> {
    check_size(state, layout.n())?;
    let phases: Vec<f64> = (0..state.dim())
        .map(|s| {
            let (x, y) = layout.split_index(s);
            if x == y { delta } else { 0.0 }
        })
        .collect();
    state.apply_phases(&phases)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialPhaseCircuit {
    n: usize,
    delta: f64,
    gates: Vec<GateOp>,
}

impl PartialPhaseCircuit {
    /// Circuit on the standard layout.
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("register size must be at least 1".into()));
        }
        Self::for_layout(&RegisterLayout::standard(n)?, delta)
    }

    pub fn for_layout(layout: &RegisterLayout, delta: f64) -> Result<Self> {
        let compute: Vec<GateOp> = layout
            .ancilla()
            .iter()
            .zip(layout.primary())
            .map(|(&y, &x)| GateOp::cnot0(y, x))
            .collect();
        let mut gates = compute.clone();
        gates.push(GateOp::mcphase(layout.primary().to_vec(), delta));
        gates.extend(compute.into_iter().rev());
        Ok(Self { n: layout.n(), delta, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        check_size(state, self.n)?;
        state.apply_gates(&self.gates)
    }
}

/// Convenience wrapper for [`PartialPhaseCircuit::new`].
pub fn build_partial_phase_circuit(n: usize, delta: f64) -> Result<PartialPhaseCircuit> {
    PartialPhaseCircuit::new(n, delta)
}

pub fn apply_circuit(state: &StateVector, circuit: &PartialPhaseCircuit) -> Result<StateVector> {
    circuit.apply(state)
}

fn check_size(state: &StateVector, n: usize) -> Result<()> {
    if state.n_qubits() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: state.n_qubits() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorSource {
    Direct,
    Circuit,
}

/// Full 2^{2n} × 2^{2n} matrix, one column per basis state.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// max |(M†M − I)_ij|
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        (prod - DMatrix::identity(self.dim(), self.dim())).max_abs()
    }

    pub fn max_deviation(&self, other: &DenseOperator) -> f64 {
        (&self.matrix - &other.matrix).max_abs()
    }
}

pub fn dense_operator(n: usize, delta: f64, source: OperatorSource) -> Result<DenseOperator> {
    if n == 0 || n > MAX_DENSE_N {
        return Err(Error::InvalidParameter(format!(
            "dense operator needs 1 <= n <= {MAX_DENSE_N}, got {n}"
        )));
    }
    let layout = RegisterLayout::standard(n)?;
    let circuit = PartialPhaseCircuit::for_layout(&layout, delta)?;
    let dim = 1usize << (2 * n);
    let mut matrix = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let basis = StateVector::basis(2 * n, col)?;
        let out = match source {
            OperatorSource::Direct => apply_partial_phase_direct(&basis, &layout, delta)?,
            OperatorSource::Circuit => circuit.apply(&basis)?,
        };
        matrix.set_column(col, &nalgebra::DVector::from_column_slice(out.amplitudes()));
    }
    Ok(DenseOperator { matrix })
}
