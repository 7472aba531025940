use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatError {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("point outside support: {0}")]
    Support(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("moment undefined: {0}")]
    UndefinedMoment(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("mapping undefined at {0}")]
    Mapping(String),

    #[error("invalid piece specification: {0}")]
    Specification(String),

    #[error("conditioning on zero-probability event: {0}")]
    Conditioning(String),

    #[error("evidence is zero; posterior undefined")]
    DegenerateEvidence,

    #[error("family is not regular: {0}")]
    NonRegular(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("design matrix is rank deficient at column `{column}`")]
    SingularDesign { column: String },

    #[error("design matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("kernel specification error: {0}")]
    KernelSpec(String),

    #[error("ingestion error at row {row}, column {column}: {message}")]
    Ingestion {
        row: usize,
        column: String,
        message: String,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = StatError> = std::result::Result<T, E>;

impl From<std::io::Error> for StatError {
    fn from(e: std::io::Error) -> Self {
        StatError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for StatError {
    fn from(e: serde_json::Error) -> Self {
        StatError::Io(format!("json: {e}"))
    }
}
