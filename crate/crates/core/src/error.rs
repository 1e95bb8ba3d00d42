use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("amplitude vector length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("amplitude vector has zero norm")]
    ZeroVector,

    #[error("vector is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid qubit set: {0}")]
    InvalidQubits(String),

    #[error("gate matrix is not unitary (deviation {0:e})")]
    NonUnitary(f64),

    #[error("branch with outcome {outcome} has vanishing probability {probability:e}")]
    ImpossibleBranch { outcome: usize, probability: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mixed-sign phase profile cannot be encoded in a single software state")]
    MixedSignProfile,

    #[error("phase profile is identically zero")]
    ZeroProfile,

    #[error("too few data points for fit: {0} (need at least 4)")]
    TooFewPoints(usize),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
