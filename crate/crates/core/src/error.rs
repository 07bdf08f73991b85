use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative procedure stopped before meeting its tolerance.
    #[error("{what} did not converge (best estimate {best:e}, error estimate {err_estimate:e})")]
    NonConvergence {
        what: &'static str,
        best: f64,
        err_estimate: f64,
    },

    /// The requested quantity is infinite or the defining integral diverges.
    #[error("divergent: {0}")]
    Divergence(String),

    /// The result is finite in exact arithmetic but overflows the scalar type.
    #[error("overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
