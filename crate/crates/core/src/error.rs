use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("resolution must be in 1..={max}, got {got}")]
    InvalidResolution { got: u32, max: u32 },
    #[error("resolution mismatch: {left} vs {right}")]
    ResolutionMismatch { left: u32, right: u32 },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("coordinate {k} is not represented at resolution {n_bits}")]
    CoordinateOutOfRange { k: u32, n_bits: u32 },
    #[error("level {level} out of range 0..={n_bits}")]
    LevelOutOfRange { level: u32, n_bits: u32 },
    #[error("exponent p must be positive, got {0}")]
    NonPositiveExponent(f64),
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("|n| is undefined for n = 0")]
    ZeroMsb,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at position {0}")]
    NonFinite(usize),
    #[error("Q_{n} = 0: mean of order {n} is undefined")]
    ZeroNormalizer { n: usize },
    #[error("weight sequence '{label}' covers {available} terms, {needed} needed")]
    WeightHorizon {
        label: String,
        available: usize,
        needed: usize,
    },
    #[error("negative weight q_{index} = {value}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("declared monotonicity {declared} violated at k = {index}")]
    MonotonicityViolated { declared: String, index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
