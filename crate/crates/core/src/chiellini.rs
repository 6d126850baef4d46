//! The Chiellini dissipation function, its integrability condition, the
//! Abel-equation quadrature route and the closed-form general solutions of
//! the dissipative equation
//!
//! ```text
//! v″ + g(v)·v′ + λ²v + c v⁻³ = 0,      g(v) = (λ²v² + c v⁻²)/√(kλ²v⁴ + c₁v² − kc)
//! ```
//!
//! Sign convention: the closed forms parametrize the Abel flow v′ = η(v),
//! so along a trajectory the radical carries the direction of motion. The
//! dissipative term evaluated along any of the closed forms is therefore
//! `g(v)·sign(v)·sign(v′)·v′ = h(v)`, and residual checks and IVP
//! right-hand sides use that signed coefficient ([`g_along`]); the printed
//! state function with the principal root is [`g_lambda`].

use crate::complex::{sqrt_principal, ComplexValue};
use crate::error::{EpError, Result};
use crate::oracle::RADICAND_GUARD_SCALE;

/// Which of the stacked ∓/± symbols a closed form uses; `Plus` selects the
/// upper symbol as printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignBranch {
    #[default]
    Plus,
    Minus,
}

/// Constant-frequency parameter bundle of the dissipative family.
#[derive(Debug, Clone, Copy)]
pub struct EpParams {
    /// λ², any sign; the closed-form branch follows sign(λ²).
    pub lambda2: f64,
    /// Inverse-cubic strength c.
    pub c: f64,
    /// Integration constant c₁ (γ for the particular solutions).
    pub c1: f64,
    /// Chiellini constant; the closed forms require k = −2.
    pub k: f64,
    /// Time shift ζ₀.
    pub zeta0: f64,
    pub sign: SignBranch,
}

impl EpParams {
    pub fn new(lambda2: f64, c: f64, c1: f64) -> Self {
        EpParams {
            lambda2,
            c,
            c1,
            k: -2.0,
            zeta0: 0.0,
            sign: SignBranch::Plus,
        }
    }

    pub fn with_sign(mut self, sign: SignBranch) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_zeta0(mut self, zeta0: f64) -> Self {
        self.zeta0 = zeta0;
        self
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    fn require_k_minus_two(&self, what: &'static str) -> Result<()> {
        if (self.k + 2.0).abs() > 1e-12 {
            return Err(EpError::InvalidParameter(format!(
                "{what} is only available at k = -2 (got k = {})",
                self.k
            )));
        }
        Ok(())
    }

    /// Guard threshold under which the radicand counts as a turning point.
    pub fn radicand_guard(&self) -> f64 {
        RADICAND_GUARD_SCALE * self.c1.mul_add(self.c1, 0.0).max(1.0)
    }
}

/// Restoring force h(v) = λ²v + c v⁻³.
pub fn h_lambda(v: f64, p: &EpParams) -> Result<f64> {
    if v == 0.0 {
        return Err(EpError::Singularity {
            what: "h_lambda",
            value: v,
        });
    }
    Ok(p.lambda2 * v + p.c / (v * v * v))
}

/// General-k radicand kλ²v⁴ + c₁v² − kc.
pub fn radicand(v: f64, p: &EpParams) -> f64 {
    p.k * p.lambda2 * v.powi(4) + p.c1 * v * v - p.k * p.c
}

/// The Chiellini dissipation function with the principal (non-negative)
/// root. For c = 0 the algebraically simplified form λ²v/√(kλ²v² + c₁) is
/// used, which removes the 0·v⁻² indeterminacy at v = 0.
pub fn g_lambda(v: f64, p: &EpParams) -> Result<f64> {
    if p.c == 0.0 {
        let rad = p.k * p.lambda2 * v * v + p.c1;
        if rad <= 0.0 {
            return Err(EpError::Domain {
                what: "g_lambda",
                detail: format!("reduced radicand {rad} <= 0 at v = {v}"),
            });
        }
        return Ok(p.lambda2 * v / rad.sqrt());
    }
    if v == 0.0 {
        return Err(EpError::Singularity {
            what: "g_lambda",
            value: v,
        });
    }
    let rad = radicand(v, p);
    if rad <= 0.0 {
        return Err(EpError::Domain {
            what: "g_lambda",
            detail: format!("radicand {rad} <= 0 at v = {v}"),
        });
    }
    Ok((p.lambda2 * v * v + p.c / (v * v)) / rad.sqrt())
}

/// Dissipation coefficient along a trajectory: the radical carries the
/// direction of motion, g_along = g(v)·sign(v)·sign(v′). For c = 0 the
/// simplified [`g_lambda`] already absorbs sign(v).
pub fn g_along(v: f64, v_dot: f64, p: &EpParams) -> Result<f64> {
    let g = g_lambda(v, p)?;
    let s = if p.c == 0.0 {
        v_dot.signum()
    } else {
        v.signum() * v_dot.signum()
    };
    Ok(g * s)
}

/// Chiellini integrability residual d/dv(h/g) − k·g by 5-point central
/// differencing of h/g; ≈ 0 for the closed-form g.
pub fn chiellini_residual(v: f64, p: &EpParams) -> Result<f64> {
    let phi = |w: f64| -> Result<f64> { Ok(h_lambda(w, p)? / g_lambda(w, p)?) };
    let h = 1e-3 * v.abs().max(1.0);
    let d = (-phi(v + 2.0 * h)? + 8.0 * phi(v + h)? - 8.0 * phi(v - h)? + phi(v - 2.0 * h)?)
        / (12.0 * h);
    Ok(d - p.k * g_lambda(v, p)?)
}

/// η(v) = √(−2λ²v⁴ + c₁v² + 2c)/v, the inverse of the Abel-route solution
/// at k = −2; equals dv/dζ along the flow.
pub fn abel_eta(v: f64, p: &EpParams) -> Result<f64> {
    p.require_k_minus_two("abel_eta")?;
    if v == 0.0 {
        return Err(EpError::Singularity {
            what: "abel_eta",
            value: v,
        });
    }
    let rad = radicand(v, p);
    if rad < 0.0 {
        return Err(EpError::Domain {
            what: "abel_eta",
            detail: format!("radicand {rad} < 0 at v = {v}"),
        });
    }
    Ok(rad.sqrt() / v)
}

/// A closed-form solution of the dissipative equation, with analytic
/// derivative and squared-amplitude accessors shared by the residual tests
/// and the figure presets.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormV {
    p: EpParams,
}

impl ClosedFormV {
    pub fn params(&self) -> &EpParams {
        &self.p
    }

    /// Squared amplitude W(ζ) = v²(ζ) (complex when the inner radical of
    /// the λ² < 0 branch turns imaginary).
    pub fn squared(&self, z: f64) -> ComplexValue {
        let p = &self.p;
        let dz = z - p.zeta0;
        let s = match p.sign {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        };
        if p.lambda2 > 0.0 {
            let l2 = p.lambda2;
            let lam = l2.sqrt();
            let amp = sqrt_principal(16.0 * l2 * p.c + p.c1 * p.c1);
            let osc = (2.0 * std::f64::consts::SQRT_2 * lam * dz).sin();
            // printed ±: Plus is the upper (+) symbol
            (ComplexValue::new(p.c1, 0.0) + amp * s * osc) / (4.0 * l2)
        } else if p.lambda2 < 0.0 {
            let lt2 = -p.lambda2;
            let lt = lt2.sqrt();
            let amp = sqrt_principal(16.0 * lt2 * p.c - p.c1 * p.c1);
            let osc = (2.0 * std::f64::consts::SQRT_2 * lt * dz).sinh();
            // printed ∓: Plus is the upper (−) symbol
            (ComplexValue::new(-p.c1, 0.0) - amp * s * osc) / (4.0 * lt2)
        } else {
            ComplexValue::new(p.c1 * dz * dz - 2.0 * p.c / p.c1, 0.0)
        }
    }

    fn squared_prime(&self, z: f64) -> ComplexValue {
        let p = &self.p;
        let dz = z - p.zeta0;
        let s = match p.sign {
            SignBranch::Plus => 1.0,
            SignBranch::Minus => -1.0,
        };
        if p.lambda2 > 0.0 {
            let l2 = p.lambda2;
            let om = 2.0 * std::f64::consts::SQRT_2 * l2.sqrt();
            let amp = sqrt_principal(16.0 * l2 * p.c + p.c1 * p.c1);
            amp * s * om * (om * dz).cos() / (4.0 * l2)
        } else if p.lambda2 < 0.0 {
            let lt2 = -p.lambda2;
            let om = 2.0 * std::f64::consts::SQRT_2 * lt2.sqrt();
            let amp = sqrt_principal(16.0 * lt2 * p.c - p.c1 * p.c1);
            -amp * s * om * (om * dz).cosh() / (4.0 * lt2)
        } else {
            ComplexValue::new(2.0 * p.c1 * dz, 0.0)
        }
    }

    /// v(ζ) with the principal complex square root.
    pub fn value(&self, z: f64) -> ComplexValue {
        self.squared(z).sqrt()
    }

    /// Analytic dv/dζ = W′/(2v).
    pub fn derivative(&self, z: f64) -> ComplexValue {
        self.squared_prime(z) / (2.0 * self.value(z))
    }

    /// Dissipation profile along the solution, g(ζ) = h(v)/v′ — the signed
    /// coefficient the trajectory actually feels (±g_lambda on monotone
    /// segments; poles at turning points are genuine).
    pub fn dissipation_profile(&self, z: f64) -> ComplexValue {
        let v = self.value(z);
        let vp = self.derivative(z);
        let h = self.p.lambda2 * v + self.p.c / (v * v * v);
        h / vp
    }

    /// Shared pair frequency ω²(ζ) = λ² + h(v)/v = 2λ² + c/v⁴: along the
    /// flow the dissipative term equals h(v), so the dissipative equation
    /// is the time-dependent frequency Pinney equation with this ω².
    pub fn pair_frequency(&self, z: f64) -> ComplexValue {
        let w = self.squared(z);
        2.0 * self.p.lambda2 + self.p.c / (w * w)
    }

    /// Real value where the solution is real, NaN elsewhere; feeds the
    /// residual scanner, which guard-bands non-finite samples.
    pub fn real_value(&self, z: f64) -> f64 {
        let v = self.value(z);
        if crate::complex::is_effectively_real(v, 1e-10) {
            v.re
        } else {
            f64::NAN
        }
    }
}

/// The three branches of the closed-form general solution, selected by
/// sign(λ²); requires k = −2 and, on the λ² = 0 branch, c₁ ≠ 0.
pub fn general_solution_v(p: EpParams) -> Result<ClosedFormV> {
    p.require_k_minus_two("general_solution_v")?;
    if p.lambda2 == 0.0 && p.c1 == 0.0 {
        return Err(EpError::InvalidParameter(
            "the lambda^2 = 0 branch requires c1 != 0".into(),
        ));
    }
    Ok(ClosedFormV { p })
}

/// The particular solution: ζ₀ = 0 and c₁ = γ.
pub fn particular_vgamma(gamma: f64, p: EpParams) -> Result<ClosedFormV> {
    let mut q = p;
    q.zeta0 = 0.0;
    q.c1 = gamma;
    general_solution_v(q)
}

/// Harmonic modes of the reduced (c = 0) equation:
/// v₁ᵣ = (√c₁/(√2λ))·sin √2λζ and v₂ᵣ = (√c₁/(√2λ))·cos √2λζ.
pub fn reduced_harmonic(
    c1: f64,
    lambda: f64,
) -> Result<(impl Fn(f64) -> f64, impl Fn(f64) -> f64)> {
    if lambda <= 0.0 || c1 <= 0.0 {
        return Err(EpError::InvalidParameter(format!(
            "reduced_harmonic needs lambda > 0 and c1 > 0, got ({lambda}, {c1})"
        )));
    }
    let om = std::f64::consts::SQRT_2 * lambda;
    let amp = c1.sqrt() / om;
    Ok((move |z: f64| amp * (om * z).sin(), move |z: f64| amp * (om * z).cos()))
}

/// Residual of v″ + g·v′ + λ²v + c v⁻³ with the trajectory-signed
/// dissipation coefficient, for the scanner. Samples inside the radicand
/// guard band are reported as 0 through the scanner's skip hook — callers
/// pass [`radicand_skip`] alongside.
pub fn dissipative_residual(p: EpParams) -> impl Fn(f64, f64, f64, f64) -> f64 {
    move |_z, v, vp, vpp| match g_along(v, vp, &p) {
        Ok(g) => vpp + g * vp + p.lambda2 * v + p.c / (v * v * v),
        Err(_) => f64::NAN,
    }
}

/// Skip hook excluding samples where the Chiellini radicand is inside the
/// turning-point guard band.
pub fn radicand_skip(p: EpParams) -> impl Fn(f64, f64) -> bool {
    move |_z, v| radicand(v, &p) < p.radicand_guard()
}

/// Right-hand side of the dissipative equation as a first-order system for
/// the IVP oracle. Inside the radicand guard band the dissipative term uses
/// its on-flow continuous extension h(v); elsewhere it is
/// h(v)·|v|·|v′|/√radicand, the signed-coefficient product.
pub fn dissipative_rhs(p: EpParams) -> impl Fn(f64, &[f64]) -> Vec<f64> {
    move |_z, y| {
        let (v, vp) = (y[0], y[1]);
        let h = p.lambda2 * v + if p.c == 0.0 { 0.0 } else { p.c / (v * v * v) };
        let rad = radicand(v, &p);
        let diss = if rad < p.radicand_guard() {
            h
        } else {
            h * v.abs() * vp.abs() / rad.sqrt()
        };
        vec![vp, -diss - h]
    }
}
