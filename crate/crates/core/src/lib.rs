//! Closed-form solution families of the constant-frequency Ermakov-Pinney
//! equation with Chiellini-integrable nonlinear dissipation, plus the
//! independent numerical machinery (adaptive integration, quadrature,
//! differentiation, residual scanning) used to certify every formula.
//!
//! The crate is organised around the objects it evaluates:
//!
//! - [`linear_core`] — constant-coefficient linear bases and the classical
//!   Pinney superposition for the non-dissipative equation.
//! - [`chiellini`] — the dissipation function `g(v)`, its integrability
//!   condition, the Abel-equation quadrature route and the closed-form
//!   general solutions of the dissipative equation.
//! - [`invariant`] — the Ermakov invariant, the Milne phase, the θ-equation
//!   and the amplitude-phase composition of general solutions.
//! - [`reid`] — higher-order (2m−1 negative power) nonlinearities: m-th root
//!   superpositions, hypergeometric phases, dissipative composites.
//! - [`abel_factor`] — the second-order-ODE ↔ Abel-equation correspondence
//!   and the factorization functions Φ₁, Φ₂.
//! - [`specfun`] — the Gauss hypergeometric function ₂F₁ for the real
//!   argument patterns required by the phases.
//! - [`oracle`] — the trust anchor: embedded Runge-Kutta integration with
//!   dense output, adaptive Gauss-Kronrod quadrature, Richardson
//!   differentiation and residual scanning.
//! - [`series`], [`figures`], [`validate`] — CSV/SVG emission, the figure
//!   preset table and the validation suites behind the CLI.

pub mod abel_factor;
pub mod chiellini;
pub mod complex;
pub mod error;
pub mod figures;
pub mod invariant;
pub mod linear_core;
pub mod oracle;
pub mod reid;
pub mod series;
pub mod specfun;
pub mod validate;

pub use complex::ComplexValue;
pub use error::{EpError, Result};
