use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("domain error in {op}: {name} = {value} ({reason})")]
    Domain { op: &'static str, name: &'static str, value: f64, reason: &'static str },

    /// A model parameter violates its invariant.
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },

    /// A hypergeometric series did not meet its truncation tolerance.
    #[error("series did not converge within {terms} terms (a={a}, b={b}, c={c}, t={t})")]
    NoConvergence { a: f64, b: f64, c: f64, t: f64, terms: usize },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not reach tolerance: estimated error {estimated_error:e} after {intervals} intervals")]
    QuadratureFailure { estimated_error: f64, intervals: usize },

    /// The shooting equation has no positive root. For k > 1 this means the
    /// horizon is at least the zero-speed depletion time.
    #[error("no terminal speed solves the shooting equation: T = {horizon} is not below the zero-speed boundary time {boundary_time}")]
    NoRoot { horizon: f64, boundary_time: f64 },

    #[error("could not bracket the terminal speed: searched [{lo:e}, {hi:e}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("could not invert the implicit solution at t = {t}: residual {residual:e}")]
    InversionFailure { t: f64, residual: f64 },

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("integration produced a non-finite state at step {step}")]
    StepFailure { step: usize },
}

impl Error {
    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::NoConvergence { .. } => "no-convergence",
            Error::QuadratureFailure { .. } => "quadrature-failure",
            Error::NoRoot { .. } => "no-root",
            Error::BracketFailure { .. } => "bracket-failure",
            Error::InversionFailure { .. } => "inversion-failure",
            Error::InsufficientSamples { .. } => "insufficient-samples",
            Error::StepFailure { .. } => "step-failure",
        }
    }
}
