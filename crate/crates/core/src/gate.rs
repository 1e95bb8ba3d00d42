use num_complex::Complex64;

use crate::error::{Error, Result};

/// 2x2 complex matrix in row-major order.
pub type Matrix2 = [[Complex64; 2]; 2];

/// The gate alphabet understood by [`StateVector::apply_gate`](crate::StateVector::apply_gate).
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    /// Arbitrary single-qubit unitary acting on `target`.
    SingleQubit { matrix: Matrix2, target: usize },
    /// CNOT with control state 0: flips `target` when `control` is |0⟩.
    Cnot0 { control: usize, target: usize },
    /// Multiplies the amplitude by e^{iΔ} when every control qubit is |1⟩.
    MultiControlledPhase { controls: Vec<usize>, delta: f64 },
}

impl GateOp {
    pub fn single(matrix: Matrix2, target: usize) -> Self {
        GateOp::SingleQubit { matrix, target }
    }

    pub fn cnot0(control: usize, target: usize) -> Self {
        GateOp::Cnot0 { control, target }
    }

    pub fn mcphase(controls: Vec<usize>, delta: f64) -> Self {
        GateOp::MultiControlledPhase { controls, delta }
    }

    pub fn hadamard(target: usize) -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        GateOp::SingleQubit { matrix: [[h, h], [h, -h]], target }
    }

    pub fn pauli_x(target: usize) -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        GateOp::SingleQubit { matrix: [[o, l], [l, o]], target }
    }

    /// Every qubit the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::SingleQubit { target, .. } => vec![*target],
            GateOp::Cnot0 { control, target } => vec![*control, *target],
            GateOp::MultiControlledPhase { controls, .. } => controls.clone(),
        }
    }

    pub(crate) fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        if qubits.is_empty() {
            return Err(Error::InvalidQubits("gate acts on no qubits".into()));
        }
        crate::state::check_register(&qubits, n_qubits)?;
        if let GateOp::SingleQubit { matrix, .. } = self {
            let dev = unitarity_deviation(matrix);
            if dev > 1e-12 {
                return Err(Error::NonUnitary(dev));
            }
        }
        Ok(())
    }
}

/// max |(M†M − I)_ij|
pub fn unitarity_deviation(m: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                acc += m[k][i].conj() * m[k][j];
            }
            if i == j {
                acc -= 1.0;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}
