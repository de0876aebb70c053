//! Two-point functions in momentum–time (and momentum–frequency) form.
//!
//! Model II quantities use the D-scaled coefficients `M`, `Q`, `g`, so the
//! propagator exponents are `D·F(k)` with
//! `F(k) = k² + M − Q Q̂(k) + gX R̂(k) + gX`.

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use serde::{Deserialize, Serialize};

/// Parameters of the mean-centred Model II propagators.
///
/// `qk.rate` is the physical branching rate `D·Q`; only the shape of `rk`
/// enters `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorParams {
    pub diffusion: f64,
    #[serde(rename = "M_over_D", alias = "death")]
    pub death: f64,
    pub qk: Kernel,
    pub rk: Kernel,
    pub g: f64,
    #[serde(rename = "X", alias = "x")]
    pub x: f64,
}

impl PropagatorParams {
    /// D-scaled branching coefficient `Q`.
    pub fn branching(&self) -> f64 {
        self.qk.rate / self.diffusion
    }

    /// `τ̄ = M − Q + 2gX`, the value of `F(0)` for normalized kernels.
    pub fn tau_bar(&self) -> f64 {
        self.death - self.branching() + 2.0 * self.g * self.x
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.diffusion > 0.0 && self.diffusion.is_finite()) {
            return Err(Error::Invalid(format!("D must be > 0, got {}", self.diffusion)));
        }
        if !(self.g.is_finite() && self.x.is_finite() && self.death.is_finite()) {
            return Err(Error::Invalid("g, X and M must be finite".into()));
        }
        self.qk.validate()?;
        self.rk.validate()
    }
}

/// `θ(t) e^{−t D (k² + M)}`.
pub fn bare_propagator(k: f64, t: f64, diffusion: f64, death: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    (-t * diffusion * (k * k + death)).exp()
}

/// `1/(−iω + D(k² + M))` as `(re, im)`.
pub fn bare_propagator_freq(k: f64, omega: f64, diffusion: f64, death: f64) -> (f64, f64) {
    let a = diffusion * (k * k + death);
    let den = a * a + omega * omega;
    (a / den, omega / den)
}

/// Branching-dressed propagator `θ(t) e^{−t(D(k² + M) − Q(k))}`.
pub fn dressed_propagator(k: f64, t: f64, diffusion: f64, death: f64, qk: &Kernel) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    (-t * (diffusion * (k * k + death) - qk.momentum_space(k))).exp()
}

/// Classical response functional
/// `e^{−Dk²(t₂−t₁)} ((1 + R n₀ t₁)/(1 + R n₀ t₂))^{1 + R̂(k)}`.
pub fn response_functional(k: f64, t1: f64, t2: f64, rk: &Kernel, n0: f64, diffusion: f64) -> Result<f64> {
    if t1 > t2 {
        return Err(Error::Ordering { t1, t2 });
    }
    Ok(response_functional_unchecked(k, t1, t2, rk, n0, diffusion))
}

pub(crate) fn response_functional_unchecked(
    k: f64,
    t1: f64,
    t2: f64,
    rk: &Kernel,
    n0: f64,
    diffusion: f64,
) -> f64 {
    let rn = rk.rate * n0;
    let ratio = (1.0 + rn * t1) / (1.0 + rn * t2);
    (-diffusion * k * k * (t2 - t1)).exp() * ratio.powf(1.0 + rk.momentum_shape(k))
}

/// `F(k) = k² + M − Q Q̂(k) + gX R̂(k) + gX`.
pub fn f_factor(k: f64, p: &PropagatorParams) -> f64 {
    let gx = p.g * p.x;
    k * k + p.death - p.branching() * p.qk.momentum_shape(k) + gx * p.rk.momentum_shape(k) + gx
}

/// `G_{φ̄φ}(k, t) = θ(t) e^{−D F(k) t}`.
pub fn phibar_phi(k: f64, t: f64, p: &PropagatorParams) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    (-p.diffusion * f_factor(k, p) * t).exp()
}

/// `G_{φφ}(k, t) = (gX Q̂(k)/F(k)) e^{−D F(k) |t|}`.
pub fn phi_phi(k: f64, t: f64, p: &PropagatorParams) -> Result<f64> {
    let f = f_factor(k, p);
    if f == 0.0 {
        return Err(Error::CriticalPoint(format!("F({k}) = 0")));
    }
    Ok(p.g * p.x * p.qk.momentum_shape(k) / f * (-p.diffusion * f * t.abs()).exp())
}

/// `G_{φφ}(k, ω) = 2 D g X Q̂(k) / (ω² + D² F(k)²)`.
pub fn phi_phi_freq(k: f64, omega: f64, p: &PropagatorParams) -> Result<f64> {
    let f = f_factor(k, p);
    if f == 0.0 {
        return Err(Error::CriticalPoint(format!("F({k}) = 0")));
    }
    let df = p.diffusion * f;
    Ok(2.0 * p.diffusion * p.g * p.x * p.qk.momentum_shape(k) / (omega * omega + df * df))
}
