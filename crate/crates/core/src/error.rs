use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: requested {requested}, limit {limit}")]
    Capacity { requested: u64, limit: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("residue {a} is not coprime to modulus {q}")]
    InvalidResidue { a: u64, q: u64 },

    #[error("pole at s = 1")]
    Pole,

    #[error("accuracy not attainable: {0}")]
    Accuracy(String),

    #[error("missed zeros up to T = {gamma_max}: located {found}, counting formula gives {expected:.3}")]
    MissedZeros {
        gamma_max: f64,
        found: usize,
        expected: f64,
    },

    #[error("degenerate zero at gamma = {gamma}: |derivative| = {deriv:e}")]
    DegenerateZero { gamma: f64, deriv: f64 },

    #[error("L(1/2, chi) vanishes numerically for character {char_id} mod {q} (|L| = {value:e})")]
    CentralZero { q: u64, char_id: usize, value: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: ordinate {gamma} does not exceed previous {prev}")]
    Monotonicity { line: usize, prev: f64, gamma: f64 },

    #[error("dataset is not coefficient-ready (missing derivative magnitudes)")]
    NotCoefficientReady,

    #[error("dataset lacks zeta(2 rho) values")]
    MissingAux,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate range: all samples equal")]
    DegenerateRange,

    #[error("arity mismatch: predicate expects {expected} components, samples have {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("tail bound not in the quadratic regime: {0}")]
    TailBound(String),

    #[error("characteristic function does not decay: {0}")]
    InsufficientDecay(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// A numerical-quality check failed.
    Numeric,
    /// Bad input: arguments, files, formats.
    Usage,
    Capacity,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Capacity { .. } => ErrorClass::Capacity,
            Error::Pole
            | Error::Accuracy(_)
            | Error::MissedZeros { .. }
            | Error::DegenerateZero { .. }
            | Error::CentralZero { .. }
            | Error::DegenerateRange
            | Error::TailBound(_)
            | Error::InsufficientDecay(_) => ErrorClass::Numeric,
            _ => ErrorClass::Usage,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
