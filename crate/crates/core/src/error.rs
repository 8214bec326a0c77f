use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("spectrum sums to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("multiplet weight F = {0} outside [0, 1]")]
    WeightOutOfRange(f64),

    #[error("spin label 2j = {0} is not allowed here (need 2j >= 1)")]
    InvalidSpin(u32),

    #[error("magnetic number 2m = {two_m} invalid for 2j = {two_j} on the {branch} branch")]
    InvalidMagneticNumber {
        two_j: u32,
        two_m: i32,
        branch: &'static str,
    },

    #[error("quaternion norm {0} deviates from 1")]
    NotUnitQuaternion(f64),

    #[error("direction norm {0} deviates from 1")]
    NotUnitVector(f64),

    #[error("outcome probability {0:e} vanishes")]
    VanishingProbability(f64),

    #[error("dimension {dim} exceeds the oracle bound {max}; use the closed forms")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
