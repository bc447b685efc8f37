use thiserror::Error;

/// Errors raised by the algebraic layers. Every variant names the
/// invariant or precondition that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input where a nonzero value is required: {0}")]
    Zero(&'static str),

    #[error("input too large: {0}")]
    SizeLimit(String),

    #[error("degenerate form: determinant is zero")]
    Degenerate,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not in the Clifford group: x e_{witness} x^-1 is not a vector")]
    NotCliffordGroup { witness: usize },

    #[error("matrix does not preserve the form")]
    NotOrthogonal,

    #[error("unsupported spinor-norm regime: {0}")]
    UnsupportedSpinorNormRegime(String),

    #[error("not a Galois torsor: {0}")]
    NotGalois(String),

    #[error("broken torsor or representation input: {0}")]
    BrokenInput(String),

    #[error("invalid lagrangian: {0}")]
    InvalidLagrangian(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("inconsistent configuration: {0}")]
    InconsistentConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
