use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain of a map family, noise family or formula.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A path violates the exit-path constraints.
    #[error("path constraint violated at index {index}: y = {value} (half-width {half_width})")]
    ConstraintViolation {
        index: usize,
        value: f64,
        half_width: f64,
    },

    /// The map sends a point of the open interval outside it, so exits are
    /// no longer optimal exactly at the boundary.
    #[error("map is not contained in the interval: |f({x})| = {fx} >= {half_width}")]
    MapNotContained { x: f64, fx: f64, half_width: f64 },

    #[error("all {trials} Monte Carlo trials were censored at max_steps = {max_steps}")]
    AllCensored { trials: u64, max_steps: u64 },

    #[error("{0} noise has no closed-form constant; use the action-based bound")]
    NotAConstant(&'static str),

    #[error("closed form unavailable for the {0} family; pass --numeric")]
    NoClosedForm(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code: 2 for domain/config errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::AllCensored { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
