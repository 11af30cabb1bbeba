use thiserror::Error;

/// Errors raised by schedule construction, the solvers and the experiment layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time {t} outside schedule range [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: achieved error {achieved:e}, wanted {wanted:e}")]
    QuadratureNonConvergence { a: f64, b: f64, achieved: f64, wanted: f64 },

    #[error("Fock truncation too small: {detail}")]
    TruncationOverflow { detail: String },

    #[error("integrator failed to converge: dt {dt:e} vs dt/2 differ by {achieved:e} (tolerance {tolerance:e})")]
    ConvergenceFailure { dt: f64, achieved: f64, tolerance: f64 },

    #[error("numerical consistency violated: {0}")]
    NumericalConsistency(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unsupported schedule: {0}")]
    UnsupportedSchedule(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cross-validation breach: {0}")]
    CrossValidation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Stable short identifier used in CSV error cells.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::TimeOutOfRange { .. } => "time_out_of_range",
            Error::QuadratureNonConvergence { .. } => "quadrature_nonconvergence",
            Error::TruncationOverflow { .. } => "truncation_overflow",
            Error::ConvergenceFailure { .. } => "convergence_failure",
            Error::NumericalConsistency(_) => "numerical_consistency",
            Error::InvalidState(_) => "invalid_state",
            Error::UnsupportedSchedule(_) => "unsupported_schedule",
            Error::Config(_) => "config",
            Error::CrossValidation(_) => "cross_validation",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
