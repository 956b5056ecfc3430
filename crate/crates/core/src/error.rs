use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The momentum is too small for an operator that depends on the direction `p/|p|`.
    #[error("momentum |p| = {norm:e} is below the degenerate-momentum cutoff {cutoff:e}")]
    DegenerateMomentum { norm: f64, cutoff: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside the domain of {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error(
        "wave packet does not fit the grid: boundary density ratio {ratio:e} exceeds {limit:e}"
    )]
    PacketTooWide { ratio: f64, limit: f64 },

    #[error("probability {probability:e} reached the grid boundary shell at t = {t:e}")]
    BoundaryLeak { probability: f64, t: f64 },

    #[error("time step too large: norm changed by {change:e} in a single step at t = {t:e}")]
    StepTooLarge { change: f64, t: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}
