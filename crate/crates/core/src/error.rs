use thiserror::Error;

use crate::units::Dimension;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected [{expected}], found [{found}]")]
    DimensionMismatch { expected: Dimension, found: Dimension },

    #[error("unknown unit `{0}`")]
    UnknownUnit(String),

    #[error("refractive index {0} does not support an evanescent field (need n > 1)")]
    NonEvanescent(f64),

    #[error("mode frequency formula applies to strings only, got a sheet")]
    NotAString,

    #[error("oscillator kind {kind} cannot be placed in {orientation} orientation")]
    GeometryMismatch {
        kind: &'static str,
        orientation: &'static str,
    },

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("position {y} m outside string domain |y| <= {half_length} m")]
    OutOfDomain { y: f64, half_length: f64 },

    #[error("effective mass diverges: overlap {overlap:e} below threshold {threshold:e} (mode {mode_index})")]
    DivergentMass {
        mode_index: u32,
        overlap: f64,
        threshold: f64,
    },

    #[error("input power is zero")]
    ZeroPower,

    #[error("no resonance in window: {0}")]
    NoResonanceInWindow(String),

    #[error("spectral grids do not match: {0}")]
    GridMismatch(String),

    #[error("unsupported cavity coupling regime `{0}`; only critical coupling is modeled")]
    UnsupportedCoupling(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("malformed spectral density: {0}")]
    MalformedSpectrum(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if let csv::ErrorKind::Io(io) = e.kind() {
            return Error::Io(io.to_string());
        }
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
