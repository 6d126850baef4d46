//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, EpError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EpError {
    /// A formula was evaluated outside its real-validity region
    /// (negative radicand, argument past a branch point, ...).
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// Division by a vanishing amplitude (v = 0 in a v⁻³ or v⁻² term).
    #[error("singularity in {what} at v = {value}")]
    Singularity { what: &'static str, value: f64 },

    /// Parameters violate a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A series failed to reach its tolerance within the iteration cap.
    #[error("series for {what} did not converge within {iterations} terms")]
    NonConvergence { what: &'static str, iterations: usize },

    /// ₂F₁ hit the logarithmic connection case c−a−b ∈ ℤ; callers fall
    /// back to quadrature.
    #[error("degenerate hypergeometric parameters: c-a-b = {value} is integral")]
    DegenerateHypergeometric { value: f64 },

    /// The ₂F₁ series diverges (z ≥ 1).
    #[error("hypergeometric series diverges for z = {z} >= 1")]
    HypergeometricDivergence { z: f64 },

    /// The integrator's step size underflowed (stiffness or a singularity);
    /// carries the abscissa that was reached.
    #[error("integration step underflow at zeta = {reached}")]
    StepUnderflow { reached: f64 },

    /// The IVP right-hand side returned a non-finite value.
    #[error("non-finite right-hand side at zeta = {zeta}")]
    RhsDomain { zeta: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate})")]
    QuadratureFailure { a: f64, b: f64, estimate: f64 },

    /// The integrand is singular inside the requested interval.
    #[error("singular integrand near zeta = {zeta}")]
    SingularIntegrand { zeta: f64 },

    /// Every sample of a residual scan fell in a guard band.
    #[error("all {skipped} residual samples were guard-banded")]
    AllSamplesSkipped { skipped: usize },

    /// A solution-map constraint (e.g. the Pinney α-constraint) fails.
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
}
