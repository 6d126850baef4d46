//! Embedded Dormand-Prince 5(4) integration with the standard fourth-order
//! continuous extension for dense output.

use crate::error::{EpError, Result};

/// An initial value problem `y' = rhs(ζ, y)` on `span`, integrated forward
/// or backward depending on the ordering of the endpoints.
pub struct IvpProblem<F>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    pub rhs: F,
    pub y0: Vec<f64>,
    pub span: (f64, f64),
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl<F: Fn(f64, &[f64]) -> Vec<f64>> IvpProblem<F> {
    pub fn new(rhs: F, y0: Vec<f64>, span: (f64, f64)) -> Self {
        IvpProblem {
            rhs,
            y0,
            span,
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_step: f64::INFINITY,
        }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }
}

#[derive(Debug)]
struct DenseSegment {
    t0: f64,
    h: f64,
    // Hairer's contd5 coefficients, one vector per state component
    rcont: [Vec<f64>; 5],
}

/// Accepted nodes plus a piecewise-quartic dense evaluator between them.
#[derive(Debug)]
pub struct Trajectory {
    pub nodes: Vec<(f64, Vec<f64>)>,
    segments: Vec<DenseSegment>,
    forward: bool,
}

impl Trajectory {
    pub fn start(&self) -> f64 {
        self.nodes.first().expect("non-empty trajectory").0
    }

    pub fn end(&self) -> f64 {
        self.nodes.last().expect("non-empty trajectory").0
    }

    /// Dense-output state at `zeta`; exact at nodes.
    pub fn at(&self, zeta: f64) -> Result<Vec<f64>> {
        let (lo, hi) = if self.forward {
            (self.start(), self.end())
        } else {
            (self.end(), self.start())
        };
        let tol = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if zeta < lo - tol || zeta > hi + tol {
            return Err(EpError::Domain {
                what: "trajectory",
                detail: format!("zeta = {zeta} outside integrated span [{lo}, {hi}]"),
            });
        }
        let idx = self
            .segments
            .partition_point(|s| {
                if self.forward {
                    s.t0 + s.h < zeta
                } else {
                    s.t0 + s.h > zeta
                }
            })
            .min(self.segments.len() - 1);
        let seg = &self.segments[idx];
        let theta = ((zeta - seg.t0) / seg.h).clamp(0.0, 1.0);
        let n = seg.rcont[0].len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let c = [
                seg.rcont[0][i],
                seg.rcont[1][i],
                seg.rcont[2][i],
                seg.rcont[3][i],
                seg.rcont[4][i],
            ];
            out.push(c[0] + theta * (c[1] + (1.0 - theta) * (c[2] + theta * (c[3] + (1.0 - theta) * c[4]))));
        }
        Ok(out)
    }
}

// Dormand-Prince coefficients.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// difference between the 5th- and 4th-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// dense-output coefficients (Hairer's dopri5)
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Adaptive Dormand-Prince 5(4) over the problem span.
pub fn integrate_ivp<F: Fn(f64, &[f64]) -> Vec<f64>>(p: &IvpProblem<F>) -> Result<Trajectory> {
    assert!(p.rel_tol > 0.0 && p.abs_tol > 0.0, "tolerances must be positive");
    let (ta, tb) = p.span;
    assert!(ta != tb, "span endpoints must differ");
    let forward = tb > ta;
    let dir = if forward { 1.0 } else { -1.0 };
    let n = p.y0.len();

    let eval = |t: f64, y: &[f64]| -> Result<Vec<f64>> {
        let dy = (p.rhs)(t, y);
        debug_assert_eq!(dy.len(), n);
        if dy.iter().all(|v| v.is_finite()) {
            Ok(dy)
        } else {
            Err(EpError::RhsDomain { zeta: t })
        }
    };

    let mut t = ta;
    let mut y = p.y0.clone();
    let mut k1 = eval(t, &y)?;
    let mut h = dir * ((tb - ta).abs() / 100.0).min(p.max_step).max(1e-8);

    let mut nodes = vec![(t, y.clone())];
    let mut segments = Vec::new();
    const MAX_STEPS: usize = 2_000_000;
    let mut steps = 0usize;

    while (tb - t) * dir > 0.0 {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(EpError::StepUnderflow { reached: t });
        }
        if (t + h - tb) * dir > 0.0 {
            h = tb - t;
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(EpError::StepUnderflow { reached: t });
        }

        // stages
        let mut k = vec![k1.clone()];
        let mut failed = false;
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..n {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            match eval(t + C[s] * h, &ys) {
                Ok(ks) => k.push(ks),
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            // retreat from the bad region
            h *= 0.25;
            continue;
        }

        // 5th-order solution is the A[6] stage combination; the stage loop
        // already produced k[6] = f(t+h, y1), the FSAL stage.
        let mut y1 = y.clone();
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[6][j];
            if a != 0.0 {
                for i in 0..n {
                    y1[i] += h * a * kj[i];
                }
            }
        }

        // scaled error norm
        let mut err2 = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let sc = p.abs_tol + p.rel_tol * y[i].abs().max(y1[i].abs());
            err2 += (e / sc) * (e / sc);
        }
        let err = (err2 / n as f64).sqrt();

        if err <= 1.0 {
            // accept: build the dense segment
            let mut rcont: [Vec<f64>; 5] = [
                Vec::with_capacity(n),
                Vec::with_capacity(n),
                Vec::with_capacity(n),
                Vec::with_capacity(n),
                Vec::with_capacity(n),
            ];
            for i in 0..n {
                let ydiff = y1[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                let mut r5 = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    r5 += D[j] * kj[i];
                }
                rcont[0].push(y[i]);
                rcont[1].push(ydiff);
                rcont[2].push(bspl);
                rcont[3].push(ydiff - h * k[6][i] - bspl);
                rcont[4].push(h * r5);
            }
            segments.push(DenseSegment { t0: t, h, rcont });
            t += h;
            y = y1;
            k1 = k.pop().unwrap(); // FSAL
            nodes.push((t, y.clone()));
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
            h = dir * (h.abs() * fac).min(p.max_step);
        } else {
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
        }
    }

    Ok(Trajectory {
        nodes,
        segments,
        forward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{E as EULER, PI};

    #[test]
    fn exponential_growth() {
        let p = IvpProblem::new(|_, y| vec![y[0]], vec![1.0], (0.0, 1.0))
            .with_tolerances(1e-10, 1e-12);
        let tr = integrate_ivp(&p).unwrap();
        assert_relative_eq!(tr.nodes.last().unwrap().1[0], EULER, epsilon = 1e-9);
    }

    #[test]
    fn harmonic_full_turn() {
        let p = IvpProblem::new(
            |_, y| vec![y[1], -y[0]],
            vec![1.0, 0.0],
            (0.0, 2.0 * PI),
        )
        .with_tolerances(1e-11, 1e-12);
        let tr = integrate_ivp(&p).unwrap();
        assert_relative_eq!(tr.nodes.last().unwrap().1[0], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn dense_output_matches_nodes_and_interior() {
        let p = IvpProblem::new(|_, y| vec![y[1], -y[0]], vec![0.0, 1.0], (0.0, 3.0))
            .with_tolerances(1e-10, 1e-12);
        let tr = integrate_ivp(&p).unwrap();
        for (t, y) in &tr.nodes {
            let d = tr.at(*t).unwrap();
            assert_relative_eq!(d[0], y[0], epsilon = 1e-12);
        }
        for i in 0..=30 {
            let t = 0.1 * i as f64;
            let d = tr.at(t).unwrap();
            assert_relative_eq!(d[0], t.sin(), epsilon = 1e-8);
        }
    }

    #[test]
    fn backward_integration() {
        let p = IvpProblem::new(|_, y| vec![y[0]], vec![1.0], (1.0, 0.0))
            .with_tolerances(1e-10, 1e-12);
        let tr = integrate_ivp(&p).unwrap();
        assert_relative_eq!(tr.nodes.last().unwrap().1[0], 1.0 / EULER, epsilon = 1e-9);
        let mid = tr.at(0.5).unwrap();
        assert_relative_eq!(mid[0], (-0.5f64).exp(), epsilon = 1e-8);
    }

    #[test]
    fn tolerance_scaling_shows_high_order() {
        // endpoint error should drop by far more than 2x when tolerances halve
        let run = |tol: f64| {
            let p = IvpProblem::new(
                |_, y| vec![y[1], -y[0]],
                vec![1.0, 0.0],
                (0.0, 2.0 * PI),
            )
            .with_tolerances(tol, tol * 1e-2);
            let tr = integrate_ivp(&p).unwrap();
            (tr.nodes.last().unwrap().1[0] - 1.0).abs()
        };
        let coarse = run(1e-6);
        let fine = run(1e-8);
        assert!(fine < coarse / 10.0, "coarse {coarse}, fine {fine}");
    }

    #[test]
    fn singular_rhs_reports_underflow() {
        // blow-up at t = 1: y' = y^2, y(0) = 1
        let p = IvpProblem::new(|_, y| vec![y[0] * y[0]], vec![1.0], (0.0, 2.0))
            .with_tolerances(1e-8, 1e-10);
        let err = integrate_ivp(&p).unwrap_err();
        match err {
            EpError::StepUnderflow { reached } => assert!((reached - 1.0).abs() < 0.05),
            other => panic!("expected step underflow, got {other:?}"),
        }
    }
}
