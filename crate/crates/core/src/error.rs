use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite multiplier value at xi = {xi}")]
    NonFiniteMultiplier { xi: f64 },

    #[error("window [{lo}, {hi}] contains no grid point")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("grids do not match")]
    GridMismatch,

    #[error("coefficient bound violated at x = {x}: a = {value} outside [{c1}, {c2}]")]
    BoundsViolation { x: f64, value: f64, c1: f64, c2: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the model or the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_)
                | Error::BoundsViolation { .. }
                | Error::InsufficientData(_)
                | Error::NonFiniteMultiplier { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
