use thiserror::Error;

use crate::symkernel::Mode;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operands mix lattice and continuum variables")]
    ModeMismatch,
    #[error("operation requires {expected:?} mode")]
    WrongMode { expected: Mode },
    #[error("density term has a non-monomial denominator; expand before canonicalizing")]
    NonMonomialDenominator,
    #[error("log terms are not allowed here: {0}")]
    UnexpectedLog(&'static str),
    #[error("expression is not invertible: {0}")]
    NotInvertible(String),
    #[error("variable {0} has no assigned value")]
    Unassigned(String),
    #[error("division by zero at the sample point")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("Lambda-series window error: {0}")]
    Window(String),
    #[error("operator is not of invertible triangular shape: {0}")]
    NotTriangular(String),
    #[error("operator is not antisymmetric")]
    NotAntisymmetric,
    #[error("expression is not an exact x-derivative")]
    NotExact,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("identity violated: {0}")]
    Identity(String),
    #[error("degenerate sample point: {0}")]
    Degenerate(String),
    #[error("non-finite value at step {step}")]
    NonFinite { step: usize },
    #[error("invalid lattice state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
