use thiserror::Error;

/// Errors surfaced by the algebra and solver layers.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("scalar error: {0}")]
    Scalar(String),

    #[error("multi-index error: {0}")]
    MultiIndex(String),

    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigenvalue outside the scalar field, needs field extension: {0}")]
    NeedsFieldExtension(String),

    #[error("not a subalgebra: bracket of basis elements {0} and {1} leaves the span")]
    NotSubalgebra(usize, usize),

    #[error("not an ideal: [h_{0}, u_{1}] leaves the span of the ideal candidate")]
    NotIdeal(usize, usize),

    #[error("resonant frequency {0:?}: every symbol vanishes but the coefficient is nonzero")]
    Resonance(Vec<i64>),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
