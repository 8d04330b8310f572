use thiserror::Error;

use crate::frft::AngleClass;

pub type Result<T> = std::result::Result<T, FrftError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrftError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("invalid exponent p = {0}")]
    InvalidExponent(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("kernel undefined for angle class {0:?}")]
    KernelUndefined(AngleClass),

    /// Oscillation resolution bound `step * (bandwidth + T|cot| + X|csc|)` reached 1/2.
    #[error("aliasing risk: resolution bound {bound:.6} >= 0.5")]
    AliasingRisk { bound: f64 },

    #[error("order {alpha} is within {delta_sing} rad of a multiple of pi; transform refused")]
    NearSingular { alpha: f64, delta_sing: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series did not reach accuracy {target:e} within {terms} terms")]
    SeriesNotConverged { terms: usize, target: f64 },

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("multiplier exceeds declared sup bound {bound} at x = {x} (|m| = {value})")]
    SupBoundViolated { x: f64, value: f64, bound: f64 },

    #[error("empty epsilon schedule")]
    EmptySchedule,

    #[error("i/o: {0}")]
    Io(String),

    #[error("checks failed: {0}")]
    ChecksFailed(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl FrftError {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            FrftError::Io(_) => 4,
            FrftError::Parse(_) | FrftError::InvalidGrid(_) | FrftError::InvalidExponent(_) => 2,
            FrftError::InvalidParameter(_) | FrftError::EmptySchedule => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for FrftError {
    fn from(e: std::io::Error) -> Self {
        FrftError::Io(e.to_string())
    }
}
