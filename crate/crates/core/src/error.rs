use thiserror::Error;

/// Failures raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where a formula or solver applies.
    #[error("domain error: {0}")]
    Domain(String),

    /// The bilinear form `a*x^2 + b*y^2 + c*x*y` is not positive definite.
    #[error("degenerate microstate: {0}")]
    DegenerateMicrostate(String),

    #[error("quadrature failed to reach tolerance {tolerance:e} (estimated error {estimate:e} after {subintervals} subintervals)")]
    QuadratureFailure {
        tolerance: f64,
        estimate: f64,
        subintervals: usize,
    },

    /// Energy finite-difference stencil left the open interval (0, U).
    #[error("finite-difference step leaves the sub-barrier interval: E = {energy}, h = {step}, U = {height}")]
    StepUnderflow { energy: f64, step: f64, height: f64 },

    #[error("optimization failed: {0}")]
    OptimizationFailure(String),

    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
