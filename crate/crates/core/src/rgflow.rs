//! Space-time-field rescaling, renormalized couplings and their flows.
//!
//! Flows are parameterised by the space scale `γ` (with time scaling as `γ²`),
//! so `γ → 0` is the large-time, long-wavelength limit.

use crate::error::{Error, Result};
use crate::specialfns::{gamma as gamma_fn, rgamma, EULER_GAMMA};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Scale factors `p' = γp`, `t' = ηt`, `ψ' = αψ`, `ψ̄' = βψ̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaleFactors {
    pub gamma: f64,
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl RescaleFactors {
    /// Model I: `η = γ²`, `β = 1`, `α = γ^{−d}`.
    pub fn model1(gamma: f64, d: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            gamma,
            eta: gamma * gamma,
            alpha: gamma.powf(-d),
            beta: 1.0,
        })
    }

    /// Model II with the symmetric field scaling that equalises both cubic
    /// couplings.
    pub fn model2(gamma: f64, d: f64, r3: f64, q3: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if !(r3 > 0.0 && q3 > 0.0) {
            return Err(Error::Invalid(format!(
                "symmetric field scaling needs R3, Q3 > 0, got {r3}, {q3}"
            )));
        }
        let ratio = (r3 / q3).sqrt();
        Ok(Self {
            gamma,
            eta: gamma * gamma,
            alpha: gamma.powf(-d / 2.0) * ratio,
            beta: gamma.powf(-d / 2.0) / ratio,
        })
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            func: "rescale",
            value: gamma,
            expected: "gamma > 0",
        })
    }
}

/// Bare Model I parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model1Params {
    pub diffusion: f64,
    pub r: f64,
    pub lambda: f64,
    pub n0: f64,
    pub dim: f64,
}

pub fn rescale_model1(p: &Model1Params, gamma: f64) -> Result<Model1Params> {
    check_gamma(gamma)?;
    let d = p.dim;
    Ok(Model1Params {
        diffusion: p.diffusion,
        r: gamma.powf(d - 2.0) * p.r,
        lambda: p.lambda / gamma,
        n0: gamma.powf(-d) * p.n0,
        dim: d,
    })
}

/// Bare Model II parameters, with the cubic and quartic couplings kept
/// separate since rescaling does not preserve their equality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model2Params {
    pub diffusion: f64,
    pub q2: f64,
    pub q3: f64,
    pub death: f64,
    pub birth: f64,
    pub r3: f64,
    pub r4: f64,
    pub lambda_r: f64,
    pub lambda_q: f64,
    pub dim: f64,
}

impl Model2Params {
    /// `g = √(R⁽³⁾Q⁽³⁾)`.
    pub fn g(&self) -> f64 {
        (self.r3 * self.q3).sqrt()
    }

    /// `b = √(R⁽³⁾/Q⁽³⁾) B`.
    pub fn b(&self) -> f64 {
        (self.r3 / self.q3).sqrt() * self.birth
    }
}

pub fn rescale_model2(p: &Model2Params, gamma: f64) -> Result<Model2Params> {
    let f = RescaleFactors::model2(gamma, p.dim, p.r3, p.q3)?;
    let d = p.dim;
    let cubic = gamma.powf(d / 2.0 - 2.0) * p.g();
    Ok(Model2Params {
        diffusion: p.diffusion,
        q2: p.q2 / (gamma * gamma),
        q3: cubic,
        death: p.death / (gamma * gamma),
        birth: gamma.powf(-2.0 - d) / f.beta * p.birth,
        r3: cubic,
        r4: gamma.powf(d - 2.0) * p.r4,
        lambda_r: p.lambda_r / gamma,
        lambda_q: p.lambda_q / gamma,
        dim: d,
    })
}

/// Model I fixed-point coupling `g* = (4π)^{1−ε/2}/Γ(ε/2)`.
pub fn gstar(eps: f64) -> Result<f64> {
    let a = eps / 2.0;
    if a <= 0.0 && a.fract() == 0.0 {
        return Err(Error::Pole { func: "gstar", at: eps });
    }
    Ok((4.0 * PI).powf(1.0 - a) * rgamma(a))
}

/// `g_r = g/(1 + g/g*)`.
pub fn renormalize_g(g: f64, eps: f64) -> Result<f64> {
    let gs = gstar(eps)?;
    if g.is_infinite() {
        return Ok(gs);
    }
    Ok(gs * g / (gs + g))
}

/// Inverse of [`renormalize_g`].
pub fn bare_g(g_r: f64, eps: f64) -> Result<f64> {
    let gs = gstar(eps)?;
    Ok(gs * g_r / (gs - g_r))
}

/// Solve `g*/g_r' − 1 = γ^{ε}(g*/g_r − 1)` for `g_r'`.
pub fn flow_g_r(g_r: f64, gamma: f64, eps: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let gs = gstar(eps)?;
    Ok(gs * g_r / (g_r + gamma.powf(eps) * (gs - g_r)))
}

/// `Γ^{(1,2)}(k, s) = R/(1 + R (s + k²/2)^{d/2−1}/g*)` for local annihilation.
pub fn vertex_gamma12(k: f64, s: f64, r: f64, d: f64) -> Result<f64> {
    let w = s + 0.5 * k * k;
    if !(w > 0.0) {
        return Err(Error::Domain {
            func: "vertex_gamma12",
            value: w,
            expected: "s + k^2/2 > 0",
        });
    }
    let gs = gstar(2.0 - d)?;
    Ok(r / (1.0 + r / gs * w.powf(d / 2.0 - 1.0)))
}

/// Leading large-time Model I density.
pub fn asymptotic_density_model1(t: f64, d: f64, r: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain {
            func: "asymptotic_density_model1",
            value: t,
            expected: "t > 0",
        });
    }
    if d < 2.0 {
        let amp = 1.0 / gstar(2.0 - d)? - (2.0 * EULER_GAMMA + 5.0) / (16.0 * PI);
        Ok(t.powf(-d / 2.0) * amp)
    } else if d > 2.0 {
        Ok(1.0 / (r * t))
    } else {
        Err(Error::Domain {
            func: "asymptotic_density_model1",
            value: d,
            expected: "d != 2 (logarithmic corrections not computed)",
        })
    }
}

/// Model II renormalization factors to `O(u²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZFactors {
    pub z: f64,
    pub z_d: f64,
    pub z_tau: f64,
    pub z_g: f64,
}

pub fn z_factors(u: f64, eps: f64) -> Result<ZFactors> {
    if eps == 0.0 {
        return Err(Error::Pole { func: "z_factors", at: 0.0 });
    }
    let l = (4.0f64 / 3.0).ln();
    let u2 = u * u;
    Ok(ZFactors {
        z: 1.0 + u / eps + (7.0 / eps - 3.0 + 4.5 * l) * u2 / (2.0 * eps),
        z_d: 1.0 + u / (2.0 * eps) + (13.0 / eps - 31.0 / 4.0 + 17.5 * l) * u2 / (8.0 * eps),
        z_tau: 1.0 + 2.0 * u / eps + (1.0 / eps - 5.0 / 16.0) * 8.0 * u2 / eps,
        z_g: 1.0 + 4.0 * u / eps + (5.0 / eps - 1.75) * 4.0 * u2 / eps,
    })
}

/// `G_ε = Γ(1 + ε/2)/(4π)^{d/2}` with `d = 4 − ε`.
pub fn g_eps(eps: f64) -> Result<f64> {
    Ok(gamma_fn(1.0 + eps / 2.0)? / (4.0 * PI).powf((4.0 - eps) / 2.0))
}

/// `u = G_ε g² μ^{−ε}`.
pub fn dimensionless_u(g: f64, mu: f64, eps: f64) -> Result<f64> {
    Ok(g_eps(eps)? * g * g * mu.powf(-eps))
}

/// `u(γ) = uεγ^{−ε}/(ε − 6u + 6uγ^{−ε})`.
///
/// Evaluated as `uγ^{−ε}/(1 + 6u(γ^{−ε} − 1)/ε)`, which stays finite as
/// `ε → 0` (where it becomes `u/(1 − 6u ln γ)`).
pub fn u_flow(u: f64, gamma: f64, eps: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let lg = gamma.ln();
    let ratio = if eps == 0.0 { -lg } else { (-eps * lg).exp_m1() / eps };
    let den = 1.0 + 6.0 * u * ratio;
    if !(den > 0.0) {
        return Err(Error::Divergence(format!(
            "u flow leaves the perturbative domain at gamma = {gamma} (u = {u}, eps = {eps})"
        )));
    }
    Ok(u * (-eps * lg).exp() / den)
}

/// `β(u) = −εu + 6u²`.
pub fn beta_u(u: f64, eps: f64) -> f64 {
    -eps * u + 6.0 * u * u
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalExponents {
    pub tau_exp: f64,
    pub x_exp: f64,
    pub b_exp: f64,
}

/// Small-`γ` power laws of `τ(γ)`, `X(γ)` and the `b` prefactor at `d = 4 − ε`.
pub fn critical_exponents_model2(eps: f64) -> CriticalExponents {
    let d = 4.0 - eps;
    CriticalExponents {
        tau_exp: -2.0 + eps / 4.0,
        x_exp: -d / 2.0 + eps / 12.0,
        b_exp: b_exponent(eps),
    }
}

fn b_exponent(eps: f64) -> f64 {
    let d = 4.0 - eps;
    2.0 + d / 2.0 - eps * eps / 144.0 * (1.75 - 8.5 * (4.0f64 / 3.0).ln())
}

/// Order-`ε` density onset exponent `β = 1 − ε/6`.
pub fn mean_field_beta_exponent(eps: f64) -> f64 {
    1.0 - eps / 6.0
}

/// Model I renormalized state at momentum scale `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RGStateI {
    pub g: f64,
    pub g_r: f64,
    pub lambda: f64,
    pub n0: f64,
    pub d: f64,
    pub kappa: f64,
}

impl RGStateI {
    pub fn new(r: f64, lambda: f64, n0: f64, d: f64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::Invalid(format!("kappa must be > 0, got {kappa}")));
        }
        let g = r * kappa.powf(d - 2.0);
        Ok(Self {
            g,
            g_r: renormalize_g(g, 2.0 - d)?,
            lambda,
            n0,
            d,
            kappa,
        })
    }

    pub fn eps(&self) -> f64 {
        2.0 - self.d
    }

    pub fn rescaled(&self, gamma: f64) -> Result<Self> {
        Ok(Self {
            g: gamma.powf(self.d - 2.0) * self.g,
            g_r: flow_g_r(self.g_r, gamma, self.eps())?,
            lambda: self.lambda / gamma,
            n0: gamma.powf(-self.d) * self.n0,
            ..*self
        })
    }
}

/// Model II renormalized state at momentum scale `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RGStateII {
    pub u: f64,
    pub tau: f64,
    #[serde(rename = "X", alias = "x")]
    pub x: f64,
    pub b: f64,
    pub lambda_r: f64,
    pub lambda_q: f64,
    pub mu: f64,
    pub eps: f64,
}

impl RGStateII {
    pub fn d(&self) -> f64 {
        4.0 - self.eps
    }

    /// Move along the flow using the full `Z`-factor ratios, e.g.
    /// `τ(γ) = γ^{−2} τ Z_D(u(γ)) Z_τ(u) / (Z_D(u) Z_τ(u(γ)))`.
    ///
    /// Once `u` sits at a fixed point these ratios are constant, so the
    /// anomalous parts of [`critical_exponents_model2`] do not show up here.
    pub fn rescaled(&self, gamma: f64) -> Result<Self> {
        let ug = u_flow(self.u, gamma, self.eps)?;
        let z0 = z_factors(self.u, self.eps)?;
        let z1 = z_factors(ug, self.eps)?;
        let d = self.d();
        let g2 = gamma * gamma;
        Ok(Self {
            u: ug,
            tau: self.tau / g2 * (z1.z_d / z0.z_d) * (z0.z_tau / z1.z_tau),
            x: self.x * gamma.powf(-d / 2.0) * (z0.z / z1.z).powf(-0.5),
            b: self.b * gamma.powf(-d / 2.0 - 2.0) * (z0.z / z1.z).sqrt() * (z1.z_d / z0.z_d),
            lambda_r: self.lambda_r / gamma,
            lambda_q: self.lambda_q / gamma,
            ..*self
        })
    }
}

/// Arguments of the Model I density `X(p, t; g_r, λ, n₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsArgsModel1 {
    pub p: f64,
    pub t: f64,
    pub g_r: f64,
    pub lambda: f64,
    pub n0: f64,
    pub d: f64,
}

/// `X(args) = prefactor · X(rescaled args)` along the Model I characteristic.
pub fn cs_rescaled_args_model1(a: &CsArgsModel1, gamma: f64) -> Result<(f64, CsArgsModel1)> {
    check_gamma(gamma)?;
    let d = a.d;
    let out = CsArgsModel1 {
        p: a.p * gamma,
        t: a.t * gamma * gamma,
        g_r: flow_g_r(a.g_r, gamma, 2.0 - d)?,
        lambda: a.lambda / gamma,
        n0: a.n0 * gamma.powf(-d),
        d,
    };
    Ok((gamma.powf(d), out))
}

/// Arguments of the Model II source function `b(τ, X, u, λ; μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsArgsModel2 {
    pub tau: f64,
    #[serde(rename = "X", alias = "x")]
    pub x: f64,
    pub u: f64,
    pub lambda: f64,
    pub mu: f64,
    pub eps: f64,
}

/// Small-`γ` scaling form of `b`: returns the prefactor
/// `μ^{2+d/2} γ^{b_exp}` and the dimensionless arguments
/// `(μ^{−2}τ(γ), μ^{−d/2}X(γ), u(γ), λ/(μγ))` with `μ` reset to 1.
///
/// `τ(γ)` and `X(γ)` use the small-`γ` power laws of
/// [`critical_exponents_model2`], matching the prefactor.
pub fn cs_rescaled_args_model2(a: &CsArgsModel2, gamma: f64) -> Result<(f64, CsArgsModel2)> {
    let e = critical_exponents_model2(a.eps);
    let d = 4.0 - a.eps;
    let out = CsArgsModel2 {
        tau: a.tau * gamma.powf(e.tau_exp) / (a.mu * a.mu),
        x: a.x * gamma.powf(e.x_exp) * a.mu.powf(-d / 2.0),
        u: u_flow(a.u, gamma, a.eps)?,
        lambda: a.lambda / (a.mu * gamma),
        mu: 1.0,
        eps: a.eps,
    };
    Ok((a.mu.powf(2.0 + d / 2.0) * gamma.powf(e.b_exp), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gstar_examples() {
        assert!((gstar(2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gstar(1.0).unwrap() - 2.0).abs() < 1e-13);
        assert!(matches!(gstar(0.0), Err(Error::Pole { .. })));
        assert!(matches!(gstar(-4.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn z_factor_examples() {
        let z = z_factors(0.0, 1.3).unwrap();
        assert_eq!((z.z, z.z_d, z.z_tau, z.z_g), (1.0, 1.0, 1.0, 1.0));
        assert!((z_factors(0.1, 1.0).unwrap().z_tau - 1.255).abs() < 1e-14);
        let want = 1.0 + 0.05 + (3.5 - 3.0 + 4.5 * (4.0f64 / 3.0).ln()) * 0.01 / 4.0;
        assert!((z_factors(0.1, 2.0).unwrap().z - want).abs() < 1e-15);
    }

    #[test]
    fn beta_u_examples() {
        assert_eq!(beta_u(0.0, 1.0), 0.0);
        assert!(beta_u(1.0 / 6.0, 1.0).abs() < 1e-15);
        assert!((beta_u(1.0 / 3.0, 1.0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exponent_examples() {
        let e = critical_exponents_model2(0.0);
        assert_eq!((e.tau_exp, e.x_exp, e.b_exp), (-2.0, -2.0, 4.0));
        let e = critical_exponents_model2(1.0);
        assert_eq!(e.tau_exp, -1.75);
        let want = 3.5 - (1.75 - 8.5 * 0.287_682_072_451_780_9) / 144.0;
        assert!((e.b_exp - want).abs() < 1e-14);
        assert!((mean_field_beta_exponent(1.0) - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(mean_field_beta_exponent(3.0), 0.5);
    }
}
