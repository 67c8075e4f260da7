use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Invalid { field: String, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("classical trajectory diverged at t = {t}")]
    Diverged { t: f64 },

    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("non-normalizable thawed Gaussian: Re(zeta) = {0}")]
    NonNormalizable(f64),

    #[error("wavefunction reached the grid edge at t = {t} (|psi|^2 = {density:e})")]
    DomainExhausted { t: f64, density: f64 },

    #[error("{what} drifted by {drift:e} (limit {limit:e})")]
    Drift { what: &'static str, drift: f64, limit: f64 },

    #[error("comparison needs quantum columns")]
    MissingQuantum,

    #[error("series `{0}` is monotonic over the window, no turning point")]
    NoTurningPoint(&'static str),

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid_config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::invalid(field, message)
    }

    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Invalid { .. } | Error::UnknownPreset(_) => 2,
            Error::Io(_) => 4,
            Error::Csv(_) | Error::Json(_) | Error::MissingQuantum => 2,
            _ => 3,
        }
    }
}
