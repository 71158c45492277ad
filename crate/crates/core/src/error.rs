use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("small divisor {divisor:.3e} at k={k:?}, m1={m1:?}, m2={m2:?}")]
    SmallDivisor {
        divisor: f64,
        k: Vec<i32>,
        m1: Vec<i32>,
        m2: Vec<i32>,
    },
    #[error("resonance condition violated: residual {0:.3e}")]
    ResonanceViolated(f64),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("energy drift {drift:.3e} exceeds {limit:.3e}")]
    EnergyDrift { drift: f64, limit: f64 },
    #[error("Newton iteration failed: {0}")]
    Newton(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("spectra not separable: {0}")]
    NotSeparable(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
