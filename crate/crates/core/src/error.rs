use thiserror::Error;

use crate::quaternion::Quaternion;

#[derive(Debug, Error)]
pub enum QqmError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },

    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at grid index {index}")]
    NonFinite { index: usize },

    #[error("malformed operator: {0}")]
    MalformedOperator(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("NaN or Inf detected in state at step {step}")]
    NanDetected { step: usize },

    #[error("too few trajectory samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e} in {context}")]
    ImaginaryResidue {
        context: &'static str,
        residue: f64,
        tolerance: f64,
    },

    #[error("Hamiltonian is not hermitian: measured defect {defect} (relative {relative:e}, tolerance {tolerance:e})")]
    NonHermitian {
        defect: Quaternion,
        relative: f64,
        tolerance: f64,
    },

    #[error("potential not allowed here: {0}")]
    PotentialNotAllowed(String),

    #[error("degenerate variation: {0}")]
    DegenerateVariation(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, QqmError>;
