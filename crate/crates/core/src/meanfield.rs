//! Tree-level densities: Model I closed form, Model II Riccati dynamics and
//! steady state, and the loop-corrected Model II equation of state.
//!
//! Two sign conventions are available. [`SignConvention::Physical`] (the
//! default) has annihilation removing particles, `dX/dt = DB − τX − RX²`
//! with `τ = D(M − Q)`, so the active phase is `τ < 0`.
//! [`SignConvention::Flipped`] reverses the sign of the quadratic term,
//! `dX/dt = DB + RX² − τX` with steady state `DB = X(τ − RX)`.

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::ode::{self, OdeOptions};
use crate::specialfns::gamma;
use crate::trace::DensityTrace;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    #[default]
    Physical,
    Flipped,
}

/// Parameters of Models I and II.
///
/// `death` and `birth` are the D-scaled coefficients `M`, `B` (physical rates
/// `D·M`, `D·B`). `qk.rate` is the physical branching rate `D·Q`; `rk.rate` is
/// the annihilation rate `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub diffusion: f64,
    pub rk: Kernel,
    pub qk: Kernel,
    #[serde(rename = "M_over_D", alias = "death")]
    pub death: f64,
    #[serde(rename = "B_over_D", alias = "birth")]
    pub birth: f64,
    pub n0: f64,
    pub dim: f64,
}

impl ModelParams {
    /// Pure annihilation (Model I).
    pub fn model1(diffusion: f64, rk: Kernel, n0: f64) -> Self {
        Self {
            diffusion,
            rk,
            qk: rk.with_rate(0.0),
            death: 0.0,
            birth: 0.0,
            n0,
            dim: rk.dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.diffusion > 0.0 && self.diffusion.is_finite()) {
            return Err(Error::Invalid(format!("D must be > 0, got {}", self.diffusion)));
        }
        for (name, v) in [("M", self.death), ("B", self.birth), ("n0", self.n0)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Invalid(format!("{name} must be >= 0, got {v}")));
            }
        }
        self.rk.validate()?;
        self.qk.validate()?;
        if self.rk.dim != self.dim || self.qk.dim != self.dim {
            return Err(Error::Invalid("kernel dimensions must match the model dimension".into()));
        }
        Ok(())
    }

    /// D-scaled branching coefficient `Q`.
    pub fn branching(&self) -> f64 {
        self.qk.rate / self.diffusion
    }

    /// `τ = D(M − Q)`.
    pub fn tau(&self) -> f64 {
        self.diffusion * self.death - self.qk.rate
    }
}

/// `n0/(1 + R n0 t)`.
pub fn density_model1(n0: f64, r: f64, t: f64) -> f64 {
    n0 / (1.0 + r * n0 * t)
}

/// Right-hand side of the Model II Riccati equation.
pub fn model2_rhs(params: &ModelParams, convention: SignConvention, x: f64) -> f64 {
    let db = params.diffusion * params.birth;
    let tau = params.tau();
    let r = params.rk.rate;
    match convention {
        SignConvention::Physical => db - tau * x - r * x * x,
        SignConvention::Flipped => db + r * x * x - tau * x,
    }
}

/// Integrate the Model II Riccati equation from `X(0) = n0` over `t_grid`.
pub fn density_model2_ode(
    params: &ModelParams,
    t_grid: &[f64],
    convention: SignConvention,
) -> Result<DensityTrace> {
    params.validate()?;
    if t_grid.first() != Some(&0.0) {
        return Err(Error::Invalid("t_grid must start at 0".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid("t_grid must be strictly increasing".into()));
    }
    let xs = ode::solve(
        |_, x| model2_rhs(params, convention, x),
        0.0,
        params.n0,
        t_grid,
        &OdeOptions::default(),
    )?;
    Ok(DensityTrace::deterministic(t_grid.to_vec(), xs))
}

/// Steady-state Model II density.
///
/// Physical convention: the non-negative root of `DB = X(τ + RX)`, which is
/// `max(0, −τ/R)` without birth. Flipped convention: the branch of
/// `DB = X(τ − RX)`, i.e. `τ/R` for `τ ≥ 0` (else 0) without birth and the
/// larger root with birth.
pub fn steady_state_model2(params: &ModelParams, convention: SignConvention) -> Result<f64> {
    params.validate()?;
    let db = params.diffusion * params.birth;
    let tau = params.tau();
    let r = params.rk.rate;
    if r == 0.0 && tau == 0.0 {
        return Err(Error::Invalid("steady state needs R > 0 or tau != 0".into()));
    }
    match convention {
        SignConvention::Physical => {
            if r == 0.0 {
                // DB = τX
                return if db == 0.0 {
                    Ok(0.0)
                } else if tau > 0.0 {
                    Ok(db / tau)
                } else {
                    Err(Error::NoRoot(format!("tau = {tau} <= 0 with R = 0 and B > 0")))
                };
            }
            if db == 0.0 {
                return Ok((-tau / r).max(0.0));
            }
            // R X² + τ X − DB = 0, positive root in a cancellation-free form.
            let disc = (tau * tau + 4.0 * r * db).sqrt();
            Ok(if tau >= 0.0 {
                2.0 * db / (tau + disc)
            } else {
                (-tau + disc) / (2.0 * r)
            })
        }
        SignConvention::Flipped => {
            if r == 0.0 {
                return if tau != 0.0 && db / tau >= 0.0 {
                    Ok(db / tau)
                } else {
                    Err(Error::NoRoot(format!("DB = tau X has no non-negative root at tau = {tau}")))
                };
            }
            if db == 0.0 {
                return Ok(if tau >= 0.0 { tau / r } else { 0.0 });
            }
            let disc = tau * tau - 4.0 * r * db;
            if disc < 0.0 || tau < 0.0 {
                return Err(Error::NoRoot(format!(
                    "DB = X(tau - R X) has no non-negative root at tau = {tau}, DB = {db}"
                )));
            }
            Ok((tau + disc.sqrt()) / (2.0 * r))
        }
    }
}

/// One-loop contribution `4g² τ̄^{1−ε/2} Γ(1+ε/2) / ((4π)^{d/2} ε(2−ε))`,
/// `d = 4 − ε`. Poles at `ε = 0` and `ε = 2` are genuine UV divergences.
pub fn eos_one_loop_term(g: f64, tau_bar: f64, eps: f64) -> Result<f64> {
    if eps == 0.0 || eps == 2.0 {
        return Err(Error::Pole {
            func: "equation_of_state one-loop term",
            at: eps,
        });
    }
    if g == 0.0 {
        return Ok(0.0);
    }
    let d = 4.0 - eps;
    Ok(4.0 * g * g * tau_bar.powf(1.0 - 0.5 * eps) * gamma(1.0 + 0.5 * eps)?
        / ((4.0 * PI).powf(0.5 * d) * eps * (2.0 - eps)))
}

/// Two-loop contribution `(2g⁴/3) τ̄^{−ε} (gX(1−ε) I₁ + (2I₁ + 3I₂) τ̄)`.
pub fn eos_two_loop_term(x: f64, g: f64, tau_bar: f64, eps: f64, i1: f64, i2: f64) -> f64 {
    if g == 0.0 {
        return 0.0;
    }
    2.0 * g.powi(4) / 3.0
        * tau_bar.powf(-eps)
        * (g * x * (1.0 - eps) * i1 + (2.0 * i1 + 3.0 * i2) * tau_bar)
}

/// Loop-corrected Model II equation of state `b(X, τ)` with
/// `τ̄ = τ + 2gX`; `I₁`, `I₂` are required inputs.
pub fn equation_of_state(x: f64, tau: f64, g: f64, eps: f64, i1: f64, i2: f64) -> Result<f64> {
    let tau_bar = tau + 2.0 * g * x;
    if !(tau_bar > 0.0) {
        return Err(Error::CriticalPoint(format!("tau_bar = {tau_bar} <= 0")));
    }
    if g == 0.0 {
        return Ok(x * tau);
    }
    let one = eos_one_loop_term(g, tau_bar, eps)?;
    let two = eos_two_loop_term(x, g, tau_bar, eps, i1, i2);
    Ok(x * (tau_bar - g * x - one + two))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model2(d_coef: f64, r: f64, q: f64, m: f64, b: f64, n0: f64) -> ModelParams {
        ModelParams {
            diffusion: d_coef,
            rk: Kernel::normal(r, 1.0, 3.0),
            qk: Kernel::normal(d_coef * q, 1.0, 3.0),
            death: m,
            birth: b,
            n0,
            dim: 3.0,
        }
    }

    #[test]
    fn model1_examples() {
        assert_eq!(density_model1(2.5, 3.0, 0.0), 2.5);
        assert_eq!(density_model1(1.0, 1.0, 1.0), 0.5);
    }

    #[test]
    fn ode_fixed_point_and_reduction() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let p = model2(1.0, 2.0, 0.0, 0.0, 0.0, 0.0);
        let tr = density_model2_ode(&p, &grid, SignConvention::Physical).unwrap();
        assert!(tr.densities.iter().all(|&x| x == 0.0));
        // τ = 0 reduces to Model I
        let p = model2(1.0, 2.0, 0.3, 0.3, 0.0, 1.5);
        let tr = density_model2_ode(&p, &grid, SignConvention::Physical).unwrap();
        for (t, x) in tr.times.iter().zip(&tr.densities) {
            let want = density_model1(1.5, 2.0, *t);
            assert!((x - want).abs() < 1e-9 * want);
        }
    }

    #[test]
    fn steady_state_examples() {
        let dead = model2(1.0, 2.0, 0.1, 0.3, 0.0, 1.0);
        assert_eq!(steady_state_model2(&dead, SignConvention::Physical).unwrap(), 0.0);
        let active = model2(1.0, 2.0, 0.3, 0.1, 0.0, 1.0);
        let x = steady_state_model2(&active, SignConvention::Physical).unwrap();
        assert!((x - 0.1).abs() < 1e-15);
        // the flipped convention mirrors the branch
        assert!((steady_state_model2(&dead, SignConvention::Flipped).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(steady_state_model2(&active, SignConvention::Flipped).unwrap(), 0.0);
    }

    #[test]
    fn flipped_sign_blows_up_above_branch() {
        // X(0) above τ/R grows without bound under dX/dt = RX² − τX.
        let p = model2(1.0, 1.0, 0.0, 0.5, 0.0, 2.0);
        let err = density_model2_ode(&p, &[0.0, 50.0], SignConvention::Flipped).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }

    #[test]
    fn eos_free_theory() {
        assert_eq!(equation_of_state(0.7, 0.3, 0.0, 1.0, 1.0, 1.0).unwrap(), 0.7 * 0.3);
        assert!(matches!(
            equation_of_state(0.5, -2.0, 1.0, 1.0, 0.0, 0.0),
            Err(Error::CriticalPoint(_))
        ));
    }

    #[test]
    fn one_loop_term_at_three_dimensions() {
        // 4Γ(3/2)/(4π)^{3/2} = 1/(4π)
        let v = eos_one_loop_term(1.0, 1.0, 1.0).unwrap();
        assert!((v - 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn one_loop_pole_residue_is_two_sided() {
        let term = |e: f64| eos_one_loop_term(0.8, 0.4, e).unwrap();
        let at_four = |e: f64| e * term(e);
        let at_two = |e: f64| (2.0 - e) * term(e);
        let (lo, hi) = (at_four(-1e-6), at_four(1e-6));
        assert!(((lo - hi) / hi).abs() < 1e-4, "{lo} vs {hi}");
        let (lo, hi) = (at_two(2.0 - 1e-6), at_two(2.0 + 1e-6));
        assert!(((lo - hi) / hi).abs() < 1e-4, "{lo} vs {hi}");
        assert!(matches!(eos_one_loop_term(1.0, 1.0, 0.0), Err(Error::Pole { .. })));
    }
}
