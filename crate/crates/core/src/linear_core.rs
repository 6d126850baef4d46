//! Basis solutions of the constant-coefficient linear oscillator and the
//! classical Pinney superposition for the non-dissipative equation
//! v″ + λ²v + c v⁻³ = 0 (with h = λ², 0 or −λ² per branch).

use crate::complex::{sqrt_principal, ComplexValue};
use crate::error::{EpError, Result};

/// Sign of the linear coefficient h: Negative ↦ −λ², Zero ↦ 0, Positive ↦ λ².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Negative,
    Zero,
    Positive,
}

/// Two independent solutions of u″ + h u = 0 with constant h, together with
/// their (ζ-independent) Wronskian u₁u₂′ − u₂u₁′.
#[derive(Debug, Clone, Copy)]
pub struct LinearBasis {
    pub branch: Branch,
    pub lambda: f64,
    pub wronskian: f64,
}

impl LinearBasis {
    pub fn u1(&self, z: f64) -> f64 {
        match self.branch {
            Branch::Positive => (self.lambda * z).cos(),
            Branch::Zero => 1.0,
            Branch::Negative => (self.lambda * z).cosh(),
        }
    }

    pub fn u1_prime(&self, z: f64) -> f64 {
        match self.branch {
            Branch::Positive => -self.lambda * (self.lambda * z).sin(),
            Branch::Zero => 0.0,
            Branch::Negative => self.lambda * (self.lambda * z).sinh(),
        }
    }

    pub fn u2(&self, z: f64) -> f64 {
        match self.branch {
            Branch::Positive => (self.lambda * z).sin(),
            Branch::Zero => z,
            Branch::Negative => (self.lambda * z).sinh(),
        }
    }

    pub fn u2_prime(&self, z: f64) -> f64 {
        match self.branch {
            Branch::Positive => self.lambda * (self.lambda * z).cos(),
            Branch::Zero => 1.0,
            Branch::Negative => self.lambda * (self.lambda * z).cosh(),
        }
    }

    /// The linear coefficient h of u″ + h u = 0.
    pub fn h_coefficient(&self) -> f64 {
        match self.branch {
            Branch::Positive => self.lambda * self.lambda,
            Branch::Zero => 0.0,
            Branch::Negative => -self.lambda * self.lambda,
        }
    }
}

/// Positive ↦ (cos λζ, sin λζ), W = λ; Zero ↦ (1, ζ), W = 1;
/// Negative ↦ (cosh λζ, sinh λζ), W = λ.
pub fn make_basis(branch: Branch, lambda: f64) -> Result<LinearBasis> {
    let lambda = match branch {
        Branch::Zero => 0.0,
        _ if lambda > 0.0 => lambda,
        _ => {
            return Err(EpError::InvalidParameter(format!(
                "lambda must be positive on a nonzero branch, got {lambda}"
            )))
        }
    };
    let wronskian = if branch == Branch::Zero { 1.0 } else { lambda };
    Ok(LinearBasis {
        branch,
        lambda,
        wronskian,
    })
}

/// Superposition coefficients for the general Pinney solution
/// v = (α₁u₁² + α₂u₂² + 2α₃u₁u₂)^½ with the determinant constraint
/// α₁α₂ − α₃² = c.
#[derive(Debug, Clone, Copy)]
pub struct PinneyCoeffs {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub c: f64,
}

impl PinneyCoeffs {
    pub fn validate(&self) -> Result<()> {
        let det = self.alpha1 * self.alpha2 - self.alpha3 * self.alpha3;
        if (det - self.c).abs() > 1e-12 * det.abs().max(self.c.abs()).max(1.0) {
            return Err(EpError::ConstraintViolation(format!(
                "alpha1*alpha2 - alpha3^2 = {det} != c = {}",
                self.c
            )));
        }
        Ok(())
    }

    /// Inverse-cubic strength of the equation the superposition satisfies:
    /// by the Lagrange identity, v″ + h v − (α₁α₂−α₃²)W² v⁻³ = 0, so the
    /// strength in v″ + h v + c_eff v⁻³ = 0 is c_eff = −c·W².
    pub fn effective_strength(&self, basis: &LinearBasis) -> f64 {
        -self.c * basis.wronskian * basis.wronskian
    }
}

/// Particular Pinney solution √(u₁² − c·u₂²/W²); principal complex square
/// root where the radicand turns negative.
pub fn pinney_particular(basis: LinearBasis, c: f64) -> impl Fn(f64) -> ComplexValue {
    move |z| {
        let u1 = basis.u1(z);
        let u2 = basis.u2(z);
        let w2 = basis.wronskian * basis.wronskian;
        sqrt_principal(u1 * u1 - c * u2 * u2 / w2)
    }
}

/// General Pinney superposition for validated coefficients; satisfies the
/// equation with strength [`PinneyCoeffs::effective_strength`].
pub fn pinney_general(
    basis: LinearBasis,
    coeffs: PinneyCoeffs,
) -> Result<impl Fn(f64) -> ComplexValue> {
    coeffs.validate()?;
    Ok(move |z: f64| {
        let u1 = basis.u1(z);
        let u2 = basis.u2(z);
        sqrt_principal(coeffs.alpha1 * u1 * u1 + coeffs.alpha2 * u2 * u2 + 2.0 * coeffs.alpha3 * u1 * u2)
    })
}

/// The three printed closed forms of the constant-frequency family, with
/// implied initial conditions v(0) = 1, v′(0) = 0:
///
/// - Positive: √(1 − (1 + c/λ²) sin²λζ)
/// - Zero:     √(1 − cζ²)
/// - Negative: √(1 + (1 − c/λ̃²) sinh²λ̃ζ), λ̃ = |λ| (hyperbolic basis)
pub fn sep_solutions(branch: Branch, lambda: f64, c: f64) -> Result<impl Fn(f64) -> ComplexValue> {
    let basis = make_basis(branch, lambda)?;
    Ok(move |z: f64| {
        let l2 = basis.lambda * basis.lambda;
        let rad = match basis.branch {
            Branch::Positive => {
                let s = (basis.lambda * z).sin();
                1.0 - (1.0 + c / l2) * s * s
            }
            Branch::Zero => 1.0 - c * z * z,
            Branch::Negative => {
                let s = (basis.lambda * z).sinh();
                1.0 + (1.0 - c / l2) * s * s
            }
        };
        sqrt_principal(rad)
    })
}

/// Residual of v″ + h v + c v⁻³ = 0 for use with the residual scanner.
pub fn sep_residual(h: f64, c: f64) -> impl Fn(f64, f64, f64, f64) -> f64 {
    move |_z, v, _vp, vpp| vpp + h * v + c / (v * v * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::is_effectively_real;
    use crate::oracle::{residual_scan, ScanOptions};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Treat a complex evaluator as real where it is, NaN elsewhere so the
    /// scanner guard-bands non-real samples.
    fn realize<F: Fn(f64) -> ComplexValue>(f: F) -> impl Fn(f64) -> f64 {
        move |z| {
            let v = f(z);
            if is_effectively_real(v, 1e-12) {
                v.re
            } else {
                f64::NAN
            }
        }
    }

    #[test]
    fn positive_basis_at_origin() {
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        assert_eq!(b.u1(0.0), 1.0);
        assert_eq!(b.u2(0.0), 0.0);
        assert_eq!(b.wronskian, 1.0);
    }

    #[test]
    fn zero_branch_identity_basis() {
        let b = make_basis(Branch::Zero, f64::NAN).unwrap();
        assert_eq!(b.u2(3.0), 3.0);
        assert_eq!(b.wronskian, 1.0);
    }

    #[test]
    fn negative_basis_wronskian_is_lambda() {
        let b = make_basis(Branch::Negative, 2.0).unwrap();
        for z in [-1.3, 0.0, 0.7, 2.4] {
            let w = b.u1(z) * b.u2_prime(z) - b.u2(z) * b.u1_prime(z);
            assert_relative_eq!(w, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn nonpositive_lambda_rejected() {
        assert!(make_basis(Branch::Positive, 0.0).is_err());
        assert!(make_basis(Branch::Negative, -1.0).is_err());
    }

    #[test]
    fn wronskian_constant_across_thousand_samples() {
        for (branch, lam) in [(Branch::Positive, 0.7), (Branch::Negative, 1.3), (Branch::Zero, 0.0)] {
            let b = make_basis(branch, lam).unwrap();
            for i in 0..1000 {
                let z = -5.0 + 0.01 * i as f64;
                let t1 = b.u1(z) * b.u2_prime(z);
                let t2 = b.u2(z) * b.u1_prime(z);
                // tolerance scaled by the size of the cancelling terms
                // (cosh²−sinh² loses digits at large |λζ|)
                let scale = (t1.abs() + t2.abs()).max(1.0);
                assert!(((t1 - t2) - b.wronskian).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn particular_with_zero_strength_is_abs_u1() {
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        let v = pinney_particular(b, 0.0);
        let z = std::f64::consts::PI / 3.0;
        assert_relative_eq!(v(z).re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn particular_pythagorean_case() {
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        let v = pinney_particular(b, -1.0);
        for z in [0.0, 0.4, 1.9, 5.0] {
            assert_relative_eq!(v(z).re, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn particular_satisfies_pinney_equation() {
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        let v = pinney_particular(b, 1.0);
        let rep = residual_scan(
            "pinney-particular",
            realize(v),
            sep_residual(1.0, 1.0),
            (0.0, 10.0),
            301,
            &ScanOptions {
                tolerance: 1e-8,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rep.passed, "max residual {}", rep.max_residual);
    }

    #[test]
    fn general_reproduces_particular() {
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        let c_part = 0.7;
        let w2 = b.wronskian * b.wronskian;
        let coeffs = PinneyCoeffs {
            alpha1: 1.0,
            alpha2: -c_part / w2,
            alpha3: 0.0,
            c: -c_part / w2,
        };
        let vg = pinney_general(b, coeffs).unwrap();
        let vp = pinney_particular(b, c_part);
        assert_relative_eq!(coeffs.effective_strength(&b), c_part, epsilon = 1e-14);
        for i in 0..50 {
            let z = 0.2 * i as f64;
            let a = vg(z);
            let p = vp(z);
            assert_relative_eq!(a.re, p.re, epsilon = 1e-13);
            assert_relative_eq!(a.im, p.im, epsilon = 1e-13);
        }
    }

    #[test]
    fn identity_superposition_is_constant_one() {
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        let coeffs = PinneyCoeffs {
            alpha1: 1.0,
            alpha2: 1.0,
            alpha3: 0.0,
            c: 1.0,
        };
        let vg = pinney_general(b, coeffs).unwrap();
        for z in [0.0, 0.3, 2.2] {
            assert_relative_eq!(vg(z).re, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn general_superposition_residual() {
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        let coeffs = PinneyCoeffs {
            alpha1: 2.0,
            alpha2: 1.0,
            alpha3: 1.0,
            c: 1.0,
        };
        let vg = pinney_general(b, coeffs).unwrap();
        let c_eff = coeffs.effective_strength(&b);
        let rep = residual_scan(
            "pinney-general",
            realize(vg),
            sep_residual(1.0, c_eff),
            (0.0, 10.0),
            301,
            &ScanOptions {
                tolerance: 1e-8,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rep.passed, "max residual {}", rep.max_residual);
    }

    #[test]
    fn constraint_violation_is_rejected() {
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        let coeffs = PinneyCoeffs {
            alpha1: 2.0,
            alpha2: 1.0,
            alpha3: 1.0,
            c: 0.5,
        };
        assert!(matches!(
            pinney_general(b, coeffs),
            Err(EpError::ConstraintViolation(_))
        ));
    }

    #[test]
    fn sep_positive_at_origin_is_one() {
        for (lam, c) in [(1.0, 0.5), (0.5, 2.0), (2.0, -1.0)] {
            let v = sep_solutions(Branch::Positive, lam, c).unwrap();
            assert_relative_eq!(v(0.0).re, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn sep_zero_turns_imaginary() {
        let v = sep_solutions(Branch::Zero, 0.0, 1.0).unwrap();
        let z = v(2.0);
        assert_eq!(z.re, 0.0);
        assert_relative_eq!(z.im, 3.0_f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn sep_positive_equals_particular() {
        let v = sep_solutions(Branch::Positive, 1.0, 1.0).unwrap();
        let b = make_basis(Branch::Positive, 1.0).unwrap();
        let p = pinney_particular(b, 1.0);
        for i in 0..100 {
            let z = 0.07 * i as f64;
            let a = v(z);
            let q = p(z);
            assert!((a - q).norm() <= 1e-12 * q.norm().max(1.0));
        }
    }

    #[test]
    fn sep_residuals_all_branches() {
        for (branch, lam, c) in [
            (Branch::Positive, 1.0, 1.0),
            (Branch::Positive, 0.5, -0.3),
            (Branch::Zero, 0.0, -0.4),
            (Branch::Negative, 1.0, 0.5),
        ] {
            let basis = make_basis(branch, lam).unwrap();
            let h = basis.h_coefficient();
            let v = sep_solutions(branch, lam, c).unwrap();
            let rep = residual_scan(
                "sep",
                realize(v),
                sep_residual(h, c),
                (0.05, 3.0),
                201,
                &ScanOptions {
                    tolerance: 1e-8,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(
                rep.passed,
                "branch {branch:?}: max residual {}",
                rep.max_residual
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        /// Random constrained superpositions satisfy the equation with the
        /// effective strength.
        #[test]
        fn random_constrained_superpositions(
            alpha1 in 0.5f64..3.0,
            alpha2 in 0.5f64..3.0,
            alpha3f in -0.7f64..0.7,
            lam in 0.5f64..1.5,
        ) {
            // keep the quadratic form positive definite: α₃² < α₁α₂
            let alpha3 = alpha3f * (alpha1 * alpha2).sqrt();
            let c = alpha1 * alpha2 - alpha3 * alpha3;
            let b = make_basis(Branch::Positive, lam).unwrap();
            let coeffs = PinneyCoeffs { alpha1, alpha2, alpha3, c };
            let vg = pinney_general(b, coeffs).unwrap();
            let c_eff = coeffs.effective_strength(&b);
            // the v⁻³ term amplifies differencing error like |c_eff|/v⁴, so
            // a 1e-8 absolute check needs samples bounded away from zeros
            let rep = residual_scan(
                "pinney-prop",
                realize(vg),
                sep_residual(b.h_coefficient(), c_eff),
                (0.0, 4.0),
                41,
                &ScanOptions { tolerance: 1e-8, amplitude_guard: 0.25, ..Default::default() },
            ).unwrap();
            prop_assert!(rep.passed, "max residual {}", rep.max_residual);
        }
    }
}
