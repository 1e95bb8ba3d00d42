//! Statevector simulation of a programmable phase-transformation protocol.
//!
//! The protocol turns |ψ⟩ = Σ ψ(x)|x⟩ into Σ ψ(x)·e^{iα|φ(x)|²}|x⟩ by
//! consuming copies of a *software state* |φ⟩, one per cycle, each cycle
//! contributing a small phase step Δ = α/m.
//!
//! Module map:
//! - [`state`], [`gate`], [`density`], [`layout`]: dense statevector engine.
//! - [`partial_phase`]: the two-register operator U(Δ) and its gate circuit.
//! - [`initializer`]: unitary completions U_φ with U_φ|0⟩ = |φ⟩.
//! - [`protocol`]: cycle simulation, closed-form outcome laws, iteration.
//! - [`hamiltonian`]: Trotterized evolution with protocol-applied phases.
//! - [`fitting`]: Levenberg–Marquardt fit of the success-probability curve.
//! - [`rng`], [`io`]: seeded streams and text formats.
//!
//! Composite states of two n-qubit registers store |x⟩|y⟩ at basis index
//! `x·2ⁿ + y` (primary register on the high-order qubits).

pub mod density;
pub mod error;
pub mod fitting;
pub mod gate;
pub mod hamiltonian;
pub mod initializer;
pub mod io;
pub mod layout;
pub mod partial_phase;
pub mod protocol;
pub mod rng;
pub mod state;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use fitting::{fit_success_curve, model_eval, FitParams};
pub use gate::GateOp;
pub use hamiltonian::{HamiltonianSpec, PhaseMode, PhaseProfile};
pub use initializer::{Completion, InitializerUnitary};
pub use layout::RegisterLayout;
pub use num_complex::Complex64;
pub use partial_phase::{DenseOperator, OperatorSource, PartialPhaseCircuit};
pub use protocol::{
    CycleOutcome, OutcomeDistribution, ProtocolConfig, ProtocolMode, ProtocolResult,
};
pub use state::{Measurement, StateVector};
