//! Complex value type and the principal-branch roots used by the solution
//! formulas, whose amplitudes turn pure imaginary on parts of their domains.

use num_complex::Complex64;

/// Solution values are complex: the square/m-th roots of sign-indefinite
/// radicands are taken on the principal branch.
pub type ComplexValue = Complex64;

/// Principal square root of a real radicand: non-negative real result for
/// `x >= 0`, `i·sqrt(-x)` (non-negative imaginary part) for `x < 0`.
pub fn sqrt_principal(x: f64) -> ComplexValue {
    if x >= 0.0 {
        ComplexValue::new(x.sqrt(), 0.0)
    } else {
        ComplexValue::new(0.0, (-x).sqrt())
    }
}

/// Principal m-th root of a real radicand via polar form (argument in
/// (−π, π]); for negative radicands the result has argument π/m.
pub fn nth_root_principal(x: f64, m: u32) -> ComplexValue {
    debug_assert!(m >= 1);
    if x >= 0.0 {
        ComplexValue::new(x.powf(1.0 / f64::from(m)), 0.0)
    } else {
        let r = (-x).powf(1.0 / f64::from(m));
        let arg = std::f64::consts::PI / f64::from(m);
        ComplexValue::new(r * arg.cos(), r * arg.sin())
    }
}

/// True when the imaginary part is negligible against `tol` and the value
/// can be treated as real.
pub fn is_effectively_real(z: ComplexValue, tol: f64) -> bool {
    z.im.abs() <= tol * z.re.abs().max(1.0)
}
