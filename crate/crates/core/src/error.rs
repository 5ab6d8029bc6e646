use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice basis is singular (|det| = {det_abs:e}, threshold {threshold:e})")]
    SingularBasis { det_abs: f64, threshold: f64 },

    #[error("fine lattice is not contained in the coarse lattice")]
    NotNested,

    #[error("covolume ratio {ratio} is not an integer >= 1")]
    NonIntegerIndex { ratio: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("envelope tail cannot be certified below {eps_tail:e}: {reason}")]
    TailBoundUnattainable { eps_tail: f64, reason: String },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NonHermitianInput { asymmetry: f64 },

    #[error("Gramian field has no nodes")]
    EmptyField,

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("mode unsupported: {0}")]
    ModeUnsupported(String),

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("kernel ratio is undefined at the zero frequency")]
    ZeroFrequency,

    #[error("invalid config at `{path}`: {message}")]
    ConfigInvalid { path: String, message: String },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("i/o failure: {0}")]
    IoFailure(String),
}

impl Error {
    /// Stable machine-readable code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularBasis { .. } => "SingularBasis",
            Error::NotNested => "NotNested",
            Error::NonIntegerIndex { .. } => "NonIntegerIndex",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInput(_) => "InvalidInput",
            Error::TailBoundUnattainable { .. } => "TailBoundUnattainable",
            Error::NonHermitianInput { .. } => "NonHermitianInput",
            Error::EmptyField => "EmptyField",
            Error::PreconditionUnmet(_) => "PreconditionUnmet",
            Error::ModeUnsupported(_) => "ModeUnsupported",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::ZeroFrequency => "ZeroFrequency",
            Error::ConfigInvalid { .. } => "ConfigInvalid",
            Error::UnknownExample(_) => "UnknownExample",
            Error::IoFailure(_) => "IoFailure",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}
