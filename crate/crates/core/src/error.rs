use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {what} (saturated at {saturated:e})")]
    Range { what: String, saturated: f64 },
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("solve failed: residual {residual:e} ({context})")]
    Solve { residual: f64, context: String },
    #[error("excluded wavenumber suspected: {0}")]
    ExcludedWavenumber(String),
    #[error("normalization error: {0}")]
    Normalization(String),
    #[error("divisor too small at entry ({row}, {col}): |value| = {magnitude:e}")]
    Divisor { row: usize, col: usize, magnitude: f64 },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), message: err.to_string() }
    }

    /// Prefix the message with a stage name, keeping the variant.
    pub fn context(self, stage: &str) -> Self {
        match self {
            Error::Domain(m) => Error::Domain(format!("{stage}: {m}")),
            Error::Singularity(m) => Error::Singularity(format!("{stage}: {m}")),
            Error::Geometry(m) => Error::Geometry(format!("{stage}: {m}")),
            Error::Contract(m) => Error::Contract(format!("{stage}: {m}")),
            Error::Solve { residual, context } => {
                Error::Solve { residual, context: format!("{stage}: {context}") }
            }
            Error::ExcludedWavenumber(m) => Error::ExcludedWavenumber(format!("{stage}: {m}")),
            Error::Normalization(m) => Error::Normalization(format!("{stage}: {m}")),
            Error::Config(m) => Error::Config(format!("{stage}: {m}")),
            other => other,
        }
    }
}
