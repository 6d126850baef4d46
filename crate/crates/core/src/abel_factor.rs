//! The second-order-ODE ↔ Abel-equation correspondence and the
//! factorization functions Φ₁, Φ₂ of the dissipative equation, with the
//! identities h = Φ₁Φ₂·v and g = −(Φ₁ + Φ₂ + v·dΦ₁/dv).

use crate::chiellini::{abel_eta, g_lambda, radicand, EpParams};
use crate::error::{EpError, Result};
use crate::oracle::{adaptive_quadrature, integrate_ivp, IvpProblem, Trajectory};

/// Coefficients of the general second-order form
/// u″ + f₂(u)u′ + f₃(u) + f₁(u)u′² + f₀(u)u′³ = 0.
pub struct GeneralOdeCoeffs {
    pub f0: Box<dyn Fn(f64) -> f64>,
    pub f1: Box<dyn Fn(f64) -> f64>,
    pub f2: Box<dyn Fn(f64) -> f64>,
    pub f3: Box<dyn Fn(f64) -> f64>,
}

impl GeneralOdeCoeffs {
    /// The dissipative family's coefficients: f₂ = g, f₃ = h, f₀ = f₁ = 0.
    pub fn dissipative(p: EpParams) -> Self {
        GeneralOdeCoeffs {
            f0: Box::new(|_| 0.0),
            f1: Box::new(|_| 0.0),
            f2: Box::new(move |u| g_lambda(u, &p).unwrap_or(f64::NAN)),
            f3: Box::new(move |u| crate::chiellini::h_lambda(u, &p).unwrap_or(f64::NAN)),
        }
    }
}

/// The first-kind Abel right-hand side obtained through y = 1/u′:
/// dy/du = f₀ + f₁y + f₂y² + f₃y³.
pub fn to_abel_rhs(coeffs: &GeneralOdeCoeffs) -> impl Fn(f64, f64) -> f64 + '_ {
    move |u, y| {
        (coeffs.f0)(u) + (coeffs.f1)(u) * y + (coeffs.f2)(u) * y * y + (coeffs.f3)(u) * y * y * y
    }
}

/// The transformed Abel equation without the linear term:
/// dŷ/du = f₀e^{−∫f₁} + f₂e^{∫f₁}ŷ² + f₃e^{2∫f₁}ŷ³. The substitution that
/// produces this right-hand side is ŷ = y·e^{−∫f₁du} (the exponent's sign
/// follows from requiring the f₁ terms to cancel). The integral runs from
/// `u_ref`, evaluated by adaptive quadrature.
pub struct ShiftedAbel<'a> {
    coeffs: &'a GeneralOdeCoeffs,
    u_ref: f64,
    tol: f64,
}

pub fn remove_linear_term(coeffs: &GeneralOdeCoeffs, u_ref: f64) -> ShiftedAbel<'_> {
    ShiftedAbel {
        coeffs,
        u_ref,
        tol: 1e-12,
    }
}

impl ShiftedAbel<'_> {
    /// e^{∫_{u_ref}^{u} f₁}.
    pub fn multiplier(&self, u: f64) -> Result<f64> {
        let f1 = &self.coeffs.f1;
        let i = adaptive_quadrature(|t| f1(t), self.u_ref, u, self.tol)?;
        Ok(i.exp())
    }

    /// Right-hand side for ŷ.
    pub fn rhs(&self, u: f64, y_hat: f64) -> Result<f64> {
        let e = self.multiplier(u)?;
        Ok((self.coeffs.f0)(u) / e
            + (self.coeffs.f2)(u) * e * y_hat * y_hat
            + (self.coeffs.f3)(u) * e * e * y_hat * y_hat * y_hat)
    }

    /// Map a solution of the transformed equation back: y = ŷ·e^{∫f₁}.
    pub fn unmap(&self, u: f64, y_hat: f64) -> Result<f64> {
        Ok(y_hat * self.multiplier(u)?)
    }
}

/// The factoring pair: Φ₁ = √(−2λ²v⁴ + c₁v² + 2c)/v² and Φ₂ = g(v)
/// (requires k = −2 and a positive radicand).
pub fn phi_functions(v: f64, p: &EpParams) -> Result<(f64, f64)> {
    let phi2 = g_lambda(v, p)?;
    let eta = abel_eta(v, p)?;
    Ok((eta / v, phi2))
}

/// Analytic dΦ₁/dv = X′/v² − 2X/v³ with X = √radicand; authoritative over
/// the finite-difference audit in the identity tests.
pub fn phi1_derivative(v: f64, p: &EpParams) -> Result<f64> {
    let rad = radicand(v, p);
    if rad <= 0.0 {
        return Err(EpError::Domain {
            what: "phi1_derivative",
            detail: format!("radicand {rad} <= 0 at v = {v}"),
        });
    }
    let x = rad.sqrt();
    // k = −2 radicand: d(rad)/dv = −8λ²v³ + 2c₁v
    let xp = (-8.0 * p.lambda2 * v.powi(3) + 2.0 * p.c1 * v) / (2.0 * x);
    Ok(xp / (v * v) - 2.0 * x / (v * v * v))
}

/// Outcome of integrating the first-factor flow u̇ = Φ₁(u)·u: the
/// trajectory up to the end of the span, or up to the turning point where
/// the radicand vanishes (reported, not a crash).
pub struct FirstFactorOutcome {
    pub trajectory: Trajectory,
    /// ζ where integration halted at a domain boundary, if it did.
    pub halted_at: Option<f64>,
}

/// Integrate the first-factor flow u̇ = Φ₁(u)·u (= η(u)) from `v_init`
/// over `span`. The result satisfies the full dissipative equation on the
/// traversed window (the first factor annihilates the flow solutions).
pub fn first_factor_solution(p: EpParams, v_init: f64, span: (f64, f64)) -> Result<FirstFactorOutcome> {
    let guard = p.radicand_guard();
    let rhs = move |_z: f64, y: &[f64]| {
        let v = y[0];
        let rad = radicand(v, &p);
        if rad < guard {
            vec![f64::NAN] // domain boundary: the integrator retreats
        } else {
            vec![rad.sqrt() / v]
        }
    };
    let problem = IvpProblem::new(rhs, vec![v_init], span).with_tolerances(1e-11, 1e-12);
    match integrate_ivp(&problem) {
        Ok(trajectory) => Ok(FirstFactorOutcome {
            trajectory,
            halted_at: None,
        }),
        Err(EpError::StepUnderflow { reached }) => {
            // re-run up to just before the boundary to hand back the
            // traversed part
            let margin = 1e-6 * (span.1 - span.0).abs();
            let stop = reached - margin * (span.1 - span.0).signum();
            let problem =
                IvpProblem::new(rhs, vec![v_init], (span.0, stop)).with_tolerances(1e-11, 1e-12);
            Ok(FirstFactorOutcome {
                trajectory: integrate_ivp(&problem)?,
                halted_at: Some(reached),
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chiellini::{dissipative_rhs, general_solution_v, h_lambda};
    use approx::assert_relative_eq;

    #[test]
    fn zero_coefficients_give_zero_rhs() {
        let coeffs = GeneralOdeCoeffs {
            f0: Box::new(|_| 0.0),
            f1: Box::new(|_| 0.0),
            f2: Box::new(|_| 0.0),
            f3: Box::new(|_| 0.0),
        };
        let rhs = to_abel_rhs(&coeffs);
        assert_eq!(rhs(1.3, -0.7), 0.0);
    }

    #[test]
    fn dissipative_coefficients_at_unity() {
        // f₂ = g, f₃ = h at (u, y) = (1, 1), λ² = c = c₁ = 1, k = −2 → 2 + 2
        let p = EpParams::new(1.0, 1.0, 1.0);
        let coeffs = GeneralOdeCoeffs::dissipative(p);
        let rhs = to_abel_rhs(&coeffs);
        assert_relative_eq!(rhs(1.0, 1.0), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn chain_rule_roundtrip() {
        // du/dζ = η(u) alongside the second-order system: same trajectory
        let p = EpParams::new(0.25, 1.0, 1.0);
        let v = general_solution_v(p).unwrap();
        let z0 = 0.1;
        let v0 = v.value(z0).re;
        let flow = first_factor_solution(p, v0, (z0, 0.9)).unwrap();
        assert!(flow.halted_at.is_none());
        let second = IvpProblem::new(
            dissipative_rhs(p),
            vec![v0, v.derivative(z0).re],
            (z0, 0.9),
        )
        .with_tolerances(1e-11, 1e-12);
        let tr2 = integrate_ivp(&second).unwrap();
        for i in 0..=20 {
            let z = z0 + (0.9 - z0) * i as f64 / 20.0;
            let a = flow.trajectory.at(z).unwrap()[0];
            let b = tr2.at(z).unwrap()[0];
            assert!((a - b).abs() <= 1e-6, "z={z}: flow {a} vs second-order {b}");
        }
    }

    #[test]
    fn identity_transformation_when_linear_term_absent() {
        let coeffs = GeneralOdeCoeffs {
            f0: Box::new(|u| 0.3 * u),
            f1: Box::new(|_| 0.0),
            f2: Box::new(|_| -0.4),
            f3: Box::new(|_| 0.05),
        };
        let shifted = remove_linear_term(&coeffs, 0.0);
        assert_relative_eq!(shifted.multiplier(1.7).unwrap(), 1.0);
        let rhs = to_abel_rhs(&coeffs);
        assert_relative_eq!(
            shifted.rhs(0.8, 0.5).unwrap(),
            rhs(0.8, 0.5),
            epsilon = 1e-12
        );
    }

    #[test]
    fn constant_linear_term_multiplier() {
        // f₁ ≡ 1 → multiplier e^u; f₂ term carries e^u, f₃ term e^{2u}
        let coeffs = GeneralOdeCoeffs {
            f0: Box::new(|_| 0.0),
            f1: Box::new(|_| 1.0),
            f2: Box::new(|_| 1.0),
            f3: Box::new(|_| 1.0),
        };
        let shifted = remove_linear_term(&coeffs, 0.0);
        let u = 0.9;
        assert_relative_eq!(shifted.multiplier(u).unwrap(), u.exp(), epsilon = 1e-11);
        let y_hat = 0.4;
        let expect = u.exp() * y_hat * y_hat + (2.0 * u).exp() * y_hat.powi(3);
        assert_relative_eq!(shifted.rhs(u, y_hat).unwrap(), expect, epsilon = 1e-10);
    }

    #[test]
    fn transformed_equation_maps_solutions_back() {
        // integrate both Abel equations and map: y(u) = ŷ(u)·e^{−∫f₁}
        let coeffs = GeneralOdeCoeffs {
            f0: Box::new(|u| 0.3 + 0.1 * u),
            f1: Box::new(|u| 0.2 * u),
            f2: Box::new(|_| -0.4),
            f3: Box::new(|u| 0.05 * u),
        };
        let (u0, u1, y0) = (0.0, 1.0, 0.2);
        let rhs = to_abel_rhs(&coeffs);
        let direct = IvpProblem::new(move |u, y| vec![rhs(u, y[0])], vec![y0], (u0, u1))
            .with_tolerances(1e-11, 1e-12);
        let y_direct = integrate_ivp(&direct).unwrap().nodes.last().unwrap().1[0];
        let shifted = remove_linear_term(&coeffs, u0);
        let transformed = IvpProblem::new(
            |u, y| vec![shifted.rhs(u, y[0]).unwrap_or(f64::NAN)],
            vec![y0], // ŷ(u0) = y0·e^0
            (u0, u1),
        )
        .with_tolerances(1e-11, 1e-12);
        let yh = integrate_ivp(&transformed).unwrap().nodes.last().unwrap().1[0];
        let y_mapped = shifted.unmap(u1, yh).unwrap();
        assert!(
            (y_direct - y_mapped).abs() <= 1e-7,
            "direct {y_direct} vs mapped {y_mapped}"
        );
    }

    #[test]
    fn second_factor_is_the_dissipation() {
        let p = EpParams::new(0.25, 1.0, 1.0);
        for v in [0.6, 1.0, 1.4] {
            let (_, phi2) = phi_functions(v, &p).unwrap();
            assert_eq!(phi2, g_lambda(v, &p).unwrap()); // shared code path
        }
    }

    #[test]
    fn phi_values_degenerate_case() {
        // (v = 1, λ² = 0, c₁ = 1, c = 0) → Φ₁ = 1, Φ₂ = 0
        let p = EpParams::new(0.0, 0.0, 1.0);
        let (phi1, phi2) = phi_functions(1.0, &p).unwrap();
        assert_relative_eq!(phi1, 1.0);
        assert_relative_eq!(phi2, 0.0);
    }

    #[test]
    fn phi_domain_error_on_negative_radicand() {
        let p = EpParams::new(1.0, 1.0, -4.0);
        assert!(matches!(
            phi_functions(1.0, &p),
            Err(EpError::Domain { .. })
        ));
    }

    #[test]
    fn factorization_identities() {
        // h − Φ₁Φ₂v ≈ 0 and g + (Φ₁ + Φ₂ + v·dΦ₁/dv) ≈ 0, with dΦ₁/dv by
        // finite differences auditing the analytic form
        // radicand positive for v² < 1 + √5, so stay below v ≈ 1.8
        let p = EpParams::new(0.25, 1.0, 1.0);
        for i in 0..=30 {
            let v = 0.5 + 1.2 * i as f64 / 30.0;
            let (phi1, phi2) = phi_functions(v, &p).unwrap();
            let h = h_lambda(v, &p).unwrap();
            assert!((h - phi1 * phi2 * v).abs() <= 1e-8 * h.abs().max(1.0));

            let dphi1 = phi1_derivative(v, &p).unwrap();
            let fd = {
                let hstep = 1e-5 * v;
                let up = phi_functions(v + hstep, &p).unwrap().0;
                let dn = phi_functions(v - hstep, &p).unwrap().0;
                (up - dn) / (2.0 * hstep)
            };
            assert!((dphi1 - fd).abs() <= 1e-6 * dphi1.abs().max(1.0), "v={v}");
            let g = g_lambda(v, &p).unwrap();
            assert!(
                (g + phi1 + phi2 + v * dphi1).abs() <= 1e-8 * g.abs().max(1.0),
                "v={v}: identity residual {}",
                g + phi1 + phi2 + v * dphi1
            );
        }
    }

    #[test]
    fn factorization_identities_across_parameter_sets() {
        let sets = [
            (0.25, 1.0, 1.0),
            (0.25, 0.5, 2.0),
            (-0.25, 1.0, 1.0),
            (-0.5, 2.0, 1.0),
            (0.0, 1.0, 1.0),
            (0.0, 0.3, 2.0),
            (0.5, 0.2, 3.0),
            (1.0, 1.0, 3.0),
            (-1.0, 0.7, 0.5),
            (0.1, 2.0, 0.7),
        ];
        for (lambda2, c, c1) in sets {
            let p = EpParams::new(lambda2, c, c1);
            for i in 0..=20 {
                let v = 0.5 + 1.5 * i as f64 / 20.0;
                if radicand(v, &p) < 0.05 {
                    continue;
                }
                let (phi1, phi2) = phi_functions(v, &p).unwrap();
                let h = h_lambda(v, &p).unwrap();
                let g = g_lambda(v, &p).unwrap();
                let dphi1 = phi1_derivative(v, &p).unwrap();
                assert!((h - phi1 * phi2 * v).abs() <= 1e-8 * h.abs().max(1.0));
                assert!((g + phi1 + phi2 + v * dphi1).abs() <= 1e-8 * g.abs().max(1.0));
            }
        }
    }

    #[test]
    fn flow_matches_closed_form_on_monotone_segment() {
        let p = EpParams::new(0.25, 1.0, 1.0);
        let v = general_solution_v(p).unwrap();
        let z0 = 0.1;
        let out = first_factor_solution(p, v.value(z0).re, (z0, 0.9)).unwrap();
        for i in 0..=16 {
            let z = z0 + (0.9 - z0) * i as f64 / 16.0;
            let got = out.trajectory.at(z).unwrap()[0];
            let want = v.value(z).re;
            assert!((got - want).abs() <= 1e-6, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn constant_phi1_gives_exponential() {
        // λ² = −κ²/2, c = c₁ = 0 makes Φ₁ ≡ κ and the flow u = v₀e^{κζ}
        let kappa = 0.8;
        let p = EpParams::new(-kappa * kappa / 2.0, 0.0, 0.0);
        let out = first_factor_solution(p, 1.0, (0.0, 2.0)).unwrap();
        assert!(out.halted_at.is_none());
        for i in 0..=10 {
            let z = 0.2 * i as f64;
            let got = out.trajectory.at(z).unwrap()[0];
            assert_relative_eq!(got, (kappa * z).exp(), epsilon = 1e-8);
        }
    }

    #[test]
    fn turning_point_halts_with_report() {
        // the λ² > 0 flow folds at the turning point; integration must stop
        // there with a report rather than crash
        let p = EpParams::new(0.25, 1.0, 1.0);
        let v = general_solution_v(p).unwrap();
        let out = first_factor_solution(p, v.value(0.1).re, (0.1, 3.0)).unwrap();
        let halted = out.halted_at.expect("expected a domain-boundary halt");
        // W′ = 0 at 2√2·λ·ζ = π/2, i.e. ζ = π/(2√2) ≈ 1.11
        let turn = std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2);
        assert!(
            (halted - turn).abs() < 0.05,
            "halted at {halted}, turning point at {turn}"
        );
    }
}
