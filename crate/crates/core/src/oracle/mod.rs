//! Independent numerical machinery: adaptive IVP integration, adaptive
//! quadrature, Richardson-extrapolated differentiation and residual
//! scanning. Every closed form in the crate is certified against these
//! routines, so they deliberately share nothing with the formula code.

mod diff;
mod ivp;
mod quad;
mod scan;

pub use diff::derivative;
pub use ivp::{integrate_ivp, IvpProblem, Trajectory};
pub use quad::adaptive_quadrature;
pub use scan::{residual_scan, ScanOptions, ValidationReport};

/// Residual samples with |v| below this are skipped: the v⁻³ term amplifies
/// floating error near zeros of the amplitude.
pub const AMPLITUDE_GUARD: f64 = 1e-3;

/// Residual samples where the Chiellini radicand falls below
/// `RADICAND_GUARD_SCALE * max(1, c₁²)` are skipped: the square-root
/// singularity at turning points is genuine, not an implementation defect.
pub const RADICAND_GUARD_SCALE: f64 = 1e-6;
