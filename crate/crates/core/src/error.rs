use thiserror::Error;

/// Errors surfaced by the toolkit. Numerical "failures" that the underlying
/// analysis treats as data (infinite norms, inequality violations) are *not*
/// errors; they travel inside reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a Young function: {0}")]
    NotYoung(String),

    #[error("class-P spec rejected: {0}")]
    ClassP(String),

    #[error("conjugate supremum unbounded at s = {0}; the base function is not superlinear")]
    UnboundedConjugate(f64),

    #[error("rho has no complex evaluation: {0}")]
    NonHolomorphicRho(String),

    #[error("unsupported function kind for this operation: {0}")]
    UnsupportedKind(String),

    #[error("unsupported pair: {0}")]
    UnsupportedPair(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("counterexample construction stalled: {0}")]
    ConstructionStalled(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
