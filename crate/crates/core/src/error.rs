use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// A quadrature did not reach its tolerance. The best estimate is kept so
    /// callers can decide whether it is usable.
    #[error("{what} did not converge: estimate {estimate:e} with error {error:e}{}", at_str(.at))]
    NotConverged {
        what: String,
        estimate: f64,
        error: f64,
        at: Option<(&'static str, f64)>,
    },

    /// The root of a scalar balance could not be bracketed.
    #[error("root not bracketed in [{lo:e}, {hi:e}]: {reason}")]
    NotBracketed { lo: f64, hi: f64, reason: String },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid quadrature settings: {0}")]
    Settings(String),
}

fn at_str(at: &Option<(&'static str, f64)>) -> String {
    match at {
        Some((name, v)) => format!(" (at {name} = {v:e})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    /// Tag a convergence failure with the abscissa at which it happened.
    pub fn at(self, name: &'static str, value: f64) -> Self {
        match self {
            Error::NotConverged {
                what,
                estimate,
                error,
                at: None,
            } => Error::NotConverged {
                what,
                estimate,
                error,
                at: Some((name, value)),
            },
            other => other,
        }
    }

    /// Best available estimate, if the error carries one.
    pub fn best_estimate(&self) -> Option<f64> {
        match self {
            Error::NotConverged { estimate, .. } => Some(*estimate),
            _ => None,
        }
    }
}
