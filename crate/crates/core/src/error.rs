use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("number of qubits must be at least {min}, got {got}")]
    TooFewQubits { min: usize, got: usize },

    #[error("dense oracle supports 1..={max} qubits, got {got}")]
    OracleSize { max: usize, got: usize },

    #[error("site {site} out of range 1..={n_qubits}")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("repeated index {site} in {gate}")]
    RepeatedIndex { site: usize, gate: String },

    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("stabilizer set is not valid: {0}")]
    InvalidStabilizers(String),

    #[error("{0}")]
    InvalidConfig(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("series analysis failed: {0}")]
    Analysis(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
