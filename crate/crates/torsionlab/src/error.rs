//! Crate error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension must be positive and finite, got {0}")]
    NonPositiveDimension(f64),

    #[error("scale factor must be positive and finite, got {0}")]
    NonPositiveScale(f64),

    #[error("region must contain at least one shape")]
    EmptyRegion,

    #[error("no exact representation: {0}")]
    NoExactRepresentation(String),

    #[error("mode indices must be positive, got ({j}, {k})")]
    ZeroModeIndex { j: u32, k: u32 },

    #[error("triangle modes require j < k, got ({j}, {k})")]
    ModeOrder { j: u32, k: u32 },

    #[error("point ({x}, {y}) lies outside the domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("spectral bound must be positive")]
    NonPositiveBound,

    #[error("series argument out of range: {0}")]
    ArgumentOutOfRange(String),

    #[error("grid must have at least {min} subdivisions per unit, got {n}")]
    GridTooCoarse { min: u32, n: u32 },

    #[error("mesh does not align with the shape: {0}")]
    MeshMisaligned(String),

    #[error("linear solver did not converge: relative residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("grid budget exhausted at N={n}: best estimate {value} with error {error:e}")]
    GridBudgetExhausted { n: u32, value: f64, error: f64 },

    #[error("cannot parse region literal: bad token `{0}`")]
    BadRegionToken(String),

    #[error("cannot parse rational `{0}`")]
    BadRational(String),

    #[error("cannot parse time list `{0}`")]
    BadTimeList(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code for the CLI: 1 for usage errors, 2 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. } | Error::GridBudgetExhausted { .. } => 2,
            _ => 1,
        }
    }
}
