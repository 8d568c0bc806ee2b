use thiserror::Error;

/// Errors raised by the algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not divisible by u^{0}")]
    NotDivisible(usize),
    #[error("vector does not lie in the filtration")]
    NotInFiltration,
    #[error("vector lies in uM")]
    InUM,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("parameter mismatch between objects")]
    ParamsMismatch,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("object failed validation: {0}")]
    Invalid(String),
    #[error("field degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
    #[error("no simple subobject is rational over the current coefficient field")]
    NoRationalSimple,
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
    #[error("{0}")]
    Domain(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}
