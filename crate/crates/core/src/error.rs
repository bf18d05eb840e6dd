use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid too small: {what} needs cutoff {required} on axis {axis}, grid provides {available}")]
    GridTooSmall {
        what: String,
        axis: usize,
        required: i64,
        available: i64,
    },

    #[error("malformed field: {0}")]
    MalformedField(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible parameters: {constraint} ({detail})")]
    Infeasible { constraint: String, detail: String },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("inconsistent bilinear estimate: {0}")]
    Inconsistent(String),

    #[error("blow-up guard triggered at t = {t}: sup norm {norm} exceeds cap {cap}")]
    BlowUp { t: f64, norm: f64, cap: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
