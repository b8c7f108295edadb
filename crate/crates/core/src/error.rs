use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not invertible over the integers")]
    NotUnimodular,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("modulus {0} is not squarefree")]
    NotSquarefree(u64),

    #[error("element cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("exponent multiset is not integral: {0}")]
    NotIntegral(String),

    #[error("parameters are not primitive: {0}")]
    NotPrimitive(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("quadratic form has signature ({pos}, {neg}, {zero}), expected ({expected_pos}, 1, 0)")]
    WrongSignature {
        pos: usize,
        neg: usize,
        zero: usize,
        expected_pos: usize,
    },

    #[error("vector is not a Cartan root: B(v, v) = {0}")]
    NotARoot(i64),

    #[error("rotation matrix check failed: {0}")]
    NotARotation(String),

    #[error("quadruple {0:?} does not satisfy the Descartes relation")]
    NotDescartes([i64; 4]),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
