use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument violates its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A function was evaluated outside of its domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot classify spectrum: {0}")]
    Classification(String),

    #[error("profile is not square-integrable: {0}")]
    Integrability(String),

    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (error estimate {estimate:.3e}, target {target:.3e})"
    )]
    Convergence {
        evaluations: usize,
        estimate: f64,
        target: f64,
    },

    #[error("cat state normalisation {norm:.3e} is degenerate")]
    DegenerateCat { norm: f64 },

    #[error("exponent {exponent:.3e} exceeds the saturation guard of +/-700")]
    Saturation { exponent: f64 },

    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),

    #[error("eigenvalue iteration failed to converge after {sweeps} sweeps")]
    EigenFailure { sweeps: usize },

    /// Input data (a dephasing value, a matrix) fails validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown {kind} `{name}` (registered: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    /// A configuration field has the wrong shape or type.
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("table {path}: {message}")]
    Table { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for errors raised by the numerical engines rather than by input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::Saturation { .. } | Error::EigenFailure { .. }
        )
    }
}
