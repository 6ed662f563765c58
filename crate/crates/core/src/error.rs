use thiserror::Error;

/// Errors raised anywhere in the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// Bound states only exist for attractive Coulomb coupling.
    #[error("no bound states for repulsive coupling (coulomb = {coulomb})")]
    NoBoundStates { coulomb: f64 },

    /// A KS point with vanishing norm has no well-defined Jacobian.
    #[error("degenerate KS point: |u|^2 = 0")]
    DegeneratePoint,

    /// The AB one-form is singular on the flux line (x = y = 0).
    #[error("singular configuration: {0}")]
    SingularConfiguration(String),

    /// An endpoint sits on the flux axis (theta = 0 or pi).
    #[error("endpoint on flux axis: {0}")]
    EndpointOnAxis(&'static str),

    /// Energy too close to a bound-state pole for either evaluator.
    #[error(
        "energy {energy} within guard band of level E = {level} (m = {m}, n = {n}, n' = {nprime})"
    )]
    IllConditionedEnergy { energy: f64, level: f64, m: i64, n: u32, nprime: u32 },

    /// A series or quadrature did not reach the requested accuracy.
    #[error("accuracy not reached in {context}: estimate {estimate:e} with error {error:e}")]
    Accuracy { context: &'static str, estimate: f64, error: f64 },

    /// Radial grid cannot resolve the requested eigenstates.
    #[error("insufficient radial grid: {0}")]
    Resolution(String),

    /// Invalid user-supplied parameter.
    #[error("invalid parameter {name}: {detail}")]
    InvalidParameter { name: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { func, detail: detail.into() }
}

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter { name, detail: detail.into() }
}
