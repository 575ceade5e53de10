use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its valid domain. `field` names the offending key.
    #[error("invalid value for `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("config file line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("trace format error: {0}")]
    Trace(String),
}

impl Error {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by user-supplied configuration rather than the environment.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, field: &str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::config(field, reason))
    }
}

pub(crate) fn require_positive(value: f64, field: &str) -> Result<()> {
    require(
        value.is_finite() && value > 0.0,
        field,
        "must be finite and > 0",
    )
}

pub(crate) fn require_non_negative(value: f64, field: &str) -> Result<()> {
    require(
        value.is_finite() && value >= 0.0,
        field,
        "must be finite and >= 0",
    )
}

pub(crate) fn require_finite(value: f64, field: &str) -> Result<()> {
    require(value.is_finite(), field, "must be finite")
}
