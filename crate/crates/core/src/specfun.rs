//! Gauss hypergeometric function ₂F₁ for real parameters and real argument
//! z < 1, which is all the phase formulas need. Region switching:
//!
//! - |z| ≤ 1/2 — direct series with a term-ratio stopping rule;
//! - z < −1/2 — Pfaff transformation z → z/(z−1) into the unit half-disk,
//!   recursing once when the image still lands in (1/2, 1);
//! - 1/2 < z < 1 — the z → 1−z connection formula, rejecting the
//!   logarithmic case c−a−b ∈ ℤ with an explicit error (callers fall back
//!   to quadrature there).

use crate::error::{EpError, Result};

const SERIES_TOL: f64 = 1e-15;
const SERIES_CAP: usize = 100_000;
/// c−a−b closer than this to an integer counts as the logarithmic case.
const DEGENERACY_TOL: f64 = 1e-8;

/// Argument bundle for [`hyp2f1`]: `c` must not be a non-positive integer
/// and `z < 1` (the real-valued regime of the phase formulas; `z` may be
/// arbitrarily negative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Args {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Hyp2F1Args { a, b, c, z }
    }

    fn validate(&self) -> Result<()> {
        if is_nonpositive_integer(self.c) {
            return Err(EpError::InvalidParameter(format!(
                "2F1 parameter c = {} is a non-positive integer",
                self.c
            )));
        }
        if self.z >= 1.0 {
            return Err(EpError::HypergeometricDivergence { z: self.z });
        }
        Ok(())
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= DEGENERACY_TOL && (x - x.round()).abs() < DEGENERACY_TOL
}

/// Lanczos approximation (g = 7, 9 coefficients), reflection for x < 1/2.
/// Returns ±inf at the poles, which the connection formula exploits:
/// 1/Γ(non-positive integer) = 0.
pub fn gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π/sin(πx)
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = G[0];
        for (i, g) in G.iter().enumerate().skip(1) {
            acc += g / (x + i as f64);
        }
        let t = x + 7.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Plain Gauss series Σ (a)ₙ(b)ₙ/(c)ₙ · zⁿ/n!, stopping once the term has
/// been below `SERIES_TOL`·|sum| three times in a row. Terminates exactly
/// when a or b is a non-positive integer.
fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut quiet = 0u8;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / (c + nf) * z / (nf + 1.0);
        if term == 0.0 {
            return Ok(sum); // terminating (polynomial) case
        }
        sum += term;
        if term.abs() < SERIES_TOL * sum.abs().max(f64::MIN_POSITIVE) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(EpError::NonConvergence {
        what: "2F1 series",
        iterations: SERIES_CAP,
    })
}

/// z → 1−z connection formula for 1/2 < z < 1, both inner arguments landing
/// in (0, 1/2).
fn connection_1mz(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let cab = c - a - b;
    if (cab - cab.round()).abs() < DEGENERACY_TOL {
        return Err(EpError::DegenerateHypergeometric { value: cab });
    }
    let s = 1.0 - z;
    let t1 = gamma(c) * gamma(cab) / (gamma(c - a) * gamma(c - b)) * series(a, b, 1.0 - cab, s)?;
    let t2 = s.powf(cab) * gamma(c) * gamma(-cab) / (gamma(a) * gamma(b))
        * series(c - a, c - b, 1.0 + cab, s)?;
    Ok(t1 + t2)
}

fn eval(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    // terminating series work for any z < 1
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return series(a, b, c, z);
    }
    if z.abs() <= 0.5 {
        series(a, b, c, z)
    } else if z > 0.5 {
        connection_1mz(a, b, c, z)
    } else {
        // Pfaff: F(a,b;c;z) = (1−z)^(−a) F(a, c−b; c; z/(z−1)); the image
        // lies in (1/3, 1), so recurse through the other regions once.
        let w = z / (z - 1.0);
        let inner = if w <= 0.5 {
            series(a, c - b, c, w)?
        } else {
            connection_1mz(a, c - b, c, w)?
        };
        Ok((1.0 - z).powf(-a) * inner)
    }
}

/// ₂F₁(a, b; c; z) for real arguments, z < 1.
pub fn hyp2f1(args: Hyp2F1Args) -> Result<f64> {
    args.validate()?;
    eval(args.a, args.b, args.c, args.z)
}
