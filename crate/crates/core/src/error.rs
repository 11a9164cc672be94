use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied inconsistent or malformed arguments.
    #[error("usage error: {0}")]
    Usage(String),

    /// Operands belong to different fields.
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: usize, right: usize },

    #[error("division by zero in GF({0})")]
    DivisionByZero(usize),

    #[error("unsupported dimension {0}: {1}")]
    UnsupportedDimension(usize, String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    /// Power iteration did not settle; carries the last Rayleigh estimate of sigma_1.
    #[error("power iteration did not converge after {iterations} iterations (last sigma_1 = {last_sigma})")]
    NonConvergence { iterations: usize, last_sigma: f64 },

    /// Bell-basis decoding found no state with overlap close to one.
    #[error("ambiguous decoding: best overlap {best:.6}")]
    Ambiguous { best: f64, overlaps: Vec<f64> },

    /// A structural identity that should hold numerically was violated.
    #[error("structure check failed: {0}")]
    Structure(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
