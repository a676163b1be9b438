use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| entry = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("generator is not anti-Hermitian (max |M + M^dagger| entry = {deviation:e})")]
    NotAntiHermitian { deviation: f64 },

    #[error("generator is not traceless (|Tr M| = {trace:e})")]
    NotTraceless { trace: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("{num_qubits} qubits exceeds the dense cap of {max_qubits}")]
    TooManyQubits {
        num_qubits: usize,
        max_qubits: usize,
    },

    #[error("Pauli convention mismatch: {0}")]
    ConventionMismatch(&'static str),

    #[error("basis index {index} is outside the sample space ({reason})")]
    IndexOutOfRange { index: usize, reason: String },

    #[error("imaginary time evolution annihilated the state (unnormalized norm {norm:e} at beta = {beta})")]
    DegenerateEvolution { norm: f64, beta: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("ensemble statistics need at least {needed} samples, got {found}")]
    NotEnoughSamples { needed: usize, found: usize },

    #[error("config error: {0}")]
    Config(String),
}
