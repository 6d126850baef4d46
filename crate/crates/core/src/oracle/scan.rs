//! Residual scanning: evaluate an ODE residual along a claimed solution on a
//! sample grid, differentiating the solution numerically, with guard bands
//! around amplitude zeros and radicand turning points.

use super::{derivative, AMPLITUDE_GUARD};
use crate::error::{EpError, Result};

/// Outcome of one validation check.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub check: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Location of the worst residual (absent when every sample was skipped).
    pub worst_zeta: Option<f64>,
    pub samples: usize,
    pub skipped: usize,
}

impl ValidationReport {
    pub fn skipped_fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.skipped as f64 / self.samples as f64
        }
    }

    /// One line of the machine-readable report format:
    /// `suite,case,max_residual,tolerance,PASS|FAIL`.
    pub fn report_line(&self, suite: &str) -> String {
        format!(
            "{},{},{:.3e},{:.3e},{}",
            suite,
            self.check,
            self.max_residual,
            self.tolerance,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

pub struct ScanOptions<'a> {
    pub tolerance: f64,
    /// Samples with |v| below this are guard-banded.
    pub amplitude_guard: f64,
    /// Extra problem-specific guard (e.g. Chiellini radicand threshold).
    #[allow(clippy::type_complexity)]
    pub skip: Option<Box<dyn Fn(f64, f64) -> bool + 'a>>,
}

impl Default for ScanOptions<'_> {
    fn default() -> Self {
        ScanOptions {
            tolerance: 1e-8,
            amplitude_guard: AMPLITUDE_GUARD,
            skip: None,
        }
    }
}

/// Scan `ode_residual(ζ, v, v', v'')` along `sol` over `window` at `samples`
/// equispaced points. Derivatives of `sol` come from [`derivative`], so the
/// check is independent of any closed-form derivative. The reduction is
/// deterministic: max by |residual|, ties resolved toward smaller ζ.
pub fn residual_scan<S, R>(
    check: &str,
    sol: S,
    ode_residual: R,
    window: (f64, f64),
    samples: usize,
    opts: &ScanOptions,
) -> Result<ValidationReport>
where
    S: Fn(f64) -> f64,
    R: Fn(f64, f64, f64, f64) -> f64,
{
    assert!(samples >= 2, "need at least two samples");
    let (a, b) = window;
    let step = (b - a) / (samples - 1) as f64;

    let mut max_res = 0.0f64;
    let mut worst = None;
    let mut skipped = 0usize;

    for i in 0..samples {
        let z = a + step * i as f64;
        let v = sol(z);
        if !v.is_finite() || v.abs() < opts.amplitude_guard {
            skipped += 1;
            continue;
        }
        if let Some(skip) = &opts.skip {
            if skip(z, v) {
                skipped += 1;
                continue;
            }
        }
        let vp = match derivative(&sol, z, 1) {
            Ok(d) => d,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let vpp = match derivative(&sol, z, 2) {
            Ok(d) => d,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let r = ode_residual(z, v, vp, vpp).abs();
        if !r.is_finite() {
            skipped += 1;
            continue;
        }
        if r > max_res {
            max_res = r;
            worst = Some(z);
        } else if worst.is_none() {
            worst = Some(z);
        }
    }

    if skipped == samples {
        return Err(EpError::AllSamplesSkipped { skipped });
    }

    Ok(ValidationReport {
        check: check.to_string(),
        max_residual: max_res,
        tolerance: opts.tolerance,
        passed: max_res <= opts.tolerance,
        worst_zeta: worst,
        samples,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_harmonic_solution_passes() {
        let rep = residual_scan(
            "harmonic",
            f64::sin,
            |_, v, _, vpp| vpp + v,
            (0.2, 3.0),
            101,
            &ScanOptions {
                tolerance: 1e-7,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rep.passed, "max residual {}", rep.max_residual);
    }

    #[test]
    fn perturbed_amplitude_fails() {
        let rep = residual_scan(
            "harmonic-off",
            |z| 1.01 * z.sin() + 0.01,
            |_, v, _, vpp| vpp + v,
            (0.2, 3.0),
            101,
            &ScanOptions {
                tolerance: 1e-7,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!rep.passed);
        assert!(rep.max_residual > 1e-3);
    }

    #[test]
    fn guard_band_skips_zeros() {
        let rep = residual_scan(
            "guard",
            f64::sin,
            |_, v, _, vpp| vpp + v,
            (-0.0005, 0.0005),
            11,
            &ScanOptions::default(),
        );
        assert!(matches!(rep, Err(EpError::AllSamplesSkipped { .. })));
    }
}
