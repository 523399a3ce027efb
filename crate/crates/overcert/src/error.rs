//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the certification toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation produced a non-finite float value")]
    NonFiniteResult,

    #[error("non-finite float in input")]
    NonFiniteFloat,

    #[error("system is not square ({npolys} polynomials in {nvars} variables)")]
    NotSquare { npolys: usize, nvars: usize },

    #[error("Jacobian is singular at the evaluation point")]
    SingularJacobian,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("refinement budget of {budget} steps exhausted")]
    BudgetExhausted { budget: u32 },

    #[error("input candidates are not pairwise distinct (pair {i}, {j})")]
    InputNotDistinct { i: usize, j: usize },

    #[error("squaring-up matrix has rank below {expected}")]
    RankDeficientMatrix { expected: usize },

    #[error("the zero polynomial has no lead valuation")]
    ZeroPolynomial,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("Newton-Okounkov bodies are only supported for n <= 3 variables, got n = {0}")]
    DimensionTooHigh(usize),

    #[error("value lattice has rank {rank} < {nvars}; the index is infinite")]
    RankDeficient { rank: usize, nvars: usize },

    #[error("root-count formula returned the non-integer value {0}")]
    NonIntegerResult(String),

    #[error("exact arithmetic required: {0}")]
    ExactRequired(&'static str),

    #[error("arithmetic mode mismatch")]
    ModeMismatch,

    #[error("Khovanskii verification failed at level {level}, missing exponent {exponent:?}")]
    KhovanskiiUnverified { level: u32, exponent: Vec<u32> },

    #[error("root count {d_l} with deg_psi = 1 already exceeds the Bezout cap {cap}; inputs are inconsistent")]
    InconsistentRootCount { d_l: String, cap: u64 },

    #[error("degenerate fixture data after {0} redraws")]
    DegenerateData(u32),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
