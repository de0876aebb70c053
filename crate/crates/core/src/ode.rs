//! Adaptive Dormand–Prince 5(4) integration of scalar ODEs.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_steps: 10_000_000,
        }
    }
}

/// Integrate `y' = f(t, y)` from `(t0, y0)` and report `y` at each of
/// `times` (non-decreasing, all `≥ t0`).
pub fn solve<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    t0: f64,
    y0: f64,
    times: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(times.len());
    let mut t = t0;
    let mut y = y0;
    let mut h = 0.0f64;
    let mut steps = 0usize;
    for &target in times {
        if target < t {
            return Err(Error::Invalid(format!(
                "output times must be non-decreasing and start at or after {t0}"
            )));
        }
        if h == 0.0 {
            h = initial_step(&mut f, t, y, target - t, opts);
        }
        while t < target {
            let span = target - t;
            let last = h >= span;
            let step = if last { span } else { h };
            let mut k = [0.0; 7];
            k[0] = f(t, y);
            for s in 1..7 {
                let mut acc = y;
                for j in 0..s {
                    acc += step * A[s][j] * k[j];
                }
                k[s] = f(t + C[s] * step, acc);
            }
            let y_new = y + step * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
            let err_abs = step * (0..7).map(|j| E[j] * k[j]).sum::<f64>();
            let scale = opts.abs_tol + opts.rel_tol * y.abs().max(y_new.abs());
            let err = (err_abs / scale).abs();
            if !y_new.is_finite() || !err.is_finite() {
                h = 0.2 * step;
            } else if err <= 1.0 {
                t = if last { target } else { t + step };
                y = y_new;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    h = step * grow;
                } else {
                    h = h.max(step * grow);
                }
            } else {
                h = step * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            }
            steps += 1;
            if !y.is_finite() || y.abs() > 1e200 || h <= 1e-14 * t.abs().max(1e-300) {
                return Err(Error::BlowUp { t });
            }
            if steps > opts.max_steps {
                return Err(Error::NonConvergence {
                    what: format!("ODE step budget exhausted at t = {t}"),
                    est_error: f64::NAN,
                });
            }
        }
        out.push(y);
    }
    Ok(out)
}

fn initial_step<F: FnMut(f64, f64) -> f64>(f: &mut F, t: f64, y: f64, span: f64, opts: &OdeOptions) -> f64 {
    let d0 = y.abs();
    let d1 = f(t, y).abs();
    let tol = opts.abs_tol + opts.rel_tol * d0;
    let h = if d1 <= tol || d0 == 0.0 && d1 == 0.0 {
        1e-6
    } else {
        0.01 * (tol / d1).powf(0.2).max(1e-6) * (1.0 + d0 / d1)
    };
    if span > 0.0 {
        h.min(span)
    } else {
        h
    }
}
