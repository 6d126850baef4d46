//! Central-difference differentiation with Richardson extrapolation.

use crate::error::{EpError, Result};

/// First or second derivative of `f` at `z` by Ridders' scheme: central
/// stencils on a geometrically shrinking step with a Neville table, stopping
/// once roundoff starts to dominate. Relative error is typically
/// 1e-9..1e-11 for well-scaled smooth integrands.
pub fn derivative<F: Fn(f64) -> f64>(f: F, z: f64, order: u8) -> Result<f64> {
    assert!(order == 1 || order == 2, "order must be 1 or 2");
    // Absolute initial step: the integrands here have O(1) length scales,
    // and scaling with |z| would let the stencil straddle domain gaps of
    // windowed solutions far from the origin.
    let h0 = if order == 1 { 0.05 } else { 0.1 };

    const NTAB: usize = 12;
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;

    let stencil = |h: f64| -> Result<f64> {
        let v = if order == 1 {
            (f(z + h) - f(z - h)) / (2.0 * h)
        } else {
            (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h)
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EpError::Domain {
                what: "derivative",
                detail: format!("non-finite sample near z = {z}"),
            })
        }
    };

    let mut tab = [[0.0f64; NTAB]; NTAB];
    tab[0][0] = stencil(h0)?;
    let mut best = tab[0][0];
    let mut best_err = f64::INFINITY;
    let mut h = h0;

    for i in 1..NTAB {
        h /= CON;
        tab[0][i] = stencil(h)?;
        let mut fac = CON2;
        for j in 1..=i {
            tab[j][i] = (tab[j - 1][i] * fac - tab[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let errt = (tab[j][i] - tab[j - 1][i])
                .abs()
                .max((tab[j][i] - tab[j - 1][i - 1]).abs());
            if errt <= best_err {
                best_err = errt;
                best = tab[j][i];
            }
        }
        // no early abort: entries ruined by roundoff carry large error
        // estimates and simply never get selected
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(EpError::Domain {
            what: "derivative",
            detail: format!("extrapolation failed at z = {z}"),
        })
    }
}
