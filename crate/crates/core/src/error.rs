use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate triangle: sides ({a}, {b}, 1) give gamma = {gamma}")]
    DegenerateTriangle { a: f64, b: f64, gamma: f64 },

    #[error("resource cap exceeded for {what}: requested {requested}, cap {cap}")]
    ResourceCap { what: &'static str, requested: u128, cap: u128 },

    #[error("atoms {first} and {second} coincide")]
    CoincidentAtoms { first: usize, second: usize },

    #[error("point set of size {n} is not adaptable: energy {energy} exceeds cap {cap}")]
    NotAdaptable { n: usize, energy: f64, cap: f64 },

    #[error("exponent fit needs at least 3 samples with distinct positive sizes and values, got {0}")]
    InsufficientSamples(usize),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn cap(what: &'static str, requested: usize, cap: usize) -> Self {
        Error::ResourceCap { what, requested: requested as u128, cap: cap as u128 }
    }
}
