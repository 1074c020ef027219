use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One failed density-matrix check together with the measured violation.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityViolation {
    /// Largest entrywise |m - m†|.
    NotHermitian(f64),
    /// Measured trace.
    Trace(f64),
    /// Smallest eigenvalue.
    NegativeEigenvalue(f64),
}

impl fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityViolation::NotHermitian(d) => write!(f, "not Hermitian (max |m - m†| = {d:e})"),
            DensityViolation::Trace(t) => {
                write!(f, "trace is {t} (|trace - 1| = {:e})", (t - 1.0).abs())
            }
            DensityViolation::NegativeEigenvalue(l) => write!(f, "negative eigenvalue {l:e}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes that do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: max |m - m†| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {}", join(.0))]
    InvalidDensity(Vec<DensityViolation>),

    #[error("basis is not orthonormal: max |G - I| = {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("observable is degenerate (eigenvalue gap {gap:e}); supply explicit bases instead")]
    Degenerate { gap: f64 },

    /// Caller supplied an argument outside its domain.
    #[error("{0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A computation produced a result that violates a guaranteed property.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    /// True for errors caused by the numbers themselves rather than by bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }
}

fn join(v: &[DensityViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
