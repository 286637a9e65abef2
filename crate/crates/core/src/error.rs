use thiserror::Error;

pub type Result<T> = std::result::Result<T, PidError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PidError {
    #[error("alphabet must contain at least one label")]
    EmptyAlphabet,

    #[error("duplicate label {0:?} in alphabet")]
    DuplicateLabel(String),

    #[error("probability {value} at index {index} is negative")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probability {value} at index {index} is not finite")]
    NonFiniteProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1 within {tolerance}")]
    NotNormalized { sum: f64, tolerance: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("cannot condition on {var}={label}: event has zero probability")]
    DegenerateCondition { var: char, label: String },

    #[error("target marginal puts mass {mass} on z={label:?} where Pr(Z=z)=0")]
    SupportMismatch { label: String, mass: f64 },

    #[error("no observations and zero smoothing")]
    EmptyInput,

    #[error("label {label:?} is not in the {var} alphabet")]
    UnknownLabel { var: char, label: String },

    #[error("entry for ({x:?}, {y:?}, {z:?}) listed more than once")]
    DuplicateEntry { x: String, y: String, z: String },

    #[error("noise requires a binary Z alphabet, gate has {z_size} outputs")]
    NoiseUnsupported { z_size: usize },

    #[error("{0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl PidError {
    /// Stable variant name, used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            PidError::EmptyAlphabet => "EmptyAlphabet",
            PidError::DuplicateLabel(_) => "DuplicateLabel",
            PidError::NegativeProbability { .. } => "NegativeProbability",
            PidError::NonFiniteProbability { .. } => "NonFiniteProbability",
            PidError::NotNormalized { .. } => "NotNormalized",
            PidError::ShapeMismatch { .. } => "ShapeMismatch",
            PidError::DegenerateCondition { .. } => "DegenerateCondition",
            PidError::SupportMismatch { .. } => "SupportMismatch",
            PidError::EmptyInput => "EmptyInput",
            PidError::UnknownLabel { .. } => "UnknownLabel",
            PidError::DuplicateEntry { .. } => "DuplicateEntry",
            PidError::NoiseUnsupported { .. } => "NoiseUnsupported",
            PidError::InvalidParameter(_) => "InvalidParameter",
            PidError::Parse(_) => "ParseError",
            PidError::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for PidError {
    fn from(e: std::io::Error) -> Self {
        PidError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for PidError {
    fn from(e: serde_json::Error) -> Self {
        PidError::Parse(e.to_string())
    }
}

impl From<csv::Error> for PidError {
    fn from(e: csv::Error) -> Self {
        PidError::Parse(e.to_string())
    }
}
