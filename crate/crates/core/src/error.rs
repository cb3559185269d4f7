use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent overflow in extended-range arithmetic")]
    Overflow,

    #[error("pole: denominator vanishes at {z}")]
    Pole { z: Complex64 },

    #[error("root finding did not converge after {iterations} iterations")]
    RootFinding { iterations: usize },

    #[error("critical relation: orbit index {index} lands on critical point {critical_point}")]
    CriticalRelation { index: usize, critical_point: Complex64 },

    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),

    #[error("critical orbit is not summable ({0})")]
    NotSummable(String),

    #[error("vector field pole at {pole} is within {distance:e} of orbit point {index}")]
    PoleProximity { pole: Complex64, index: usize, distance: f64 },

    #[error("functional vanishes on all supplied moments")]
    NoWitness,

    #[error("parabolic cycle: |1 - multiplier| = {gap:e}")]
    ParabolicCycle { gap: f64 },

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("degenerate map: {0}")]
    DegenerateMap(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than by the
    /// mathematics of the requested computation.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::InvalidInput(_) | Error::Shape(_))
    }
}
