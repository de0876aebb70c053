//! Interaction profiles: real-space and momentum-space forms, variances,
//! sampling, truncation and precision rescaling.
//!
//! Fourier convention: `f(p) = (2π)^{−d} ∫ e^{ipk} f(k) dk`, so the
//! momentum form is `R(k) = ∫ e^{−ik·r} R(r) d^d r` and `R(k=0)` equals the
//! overall rate.

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::specialfns::{bessel_j, bessel_j_reduced_series, bessel_k, gamma, sphere_surface};
use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Below this `k/λ` the spherical momentum form is summed as a series.
pub const SPHERICAL_SERIES_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", try_from = "String", into = "String")]
pub enum Profile {
    Local,
    Normal,
    ScreenedPoisson,
    Spherical,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Local => "local",
            Profile::Normal => "normal",
            Profile::ScreenedPoisson => "screened_poisson",
            Profile::Spherical => "spherical",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "local" | "delta" => Ok(Profile::Local),
            "normal" | "gaussian" => Ok(Profile::Normal),
            "screened_poisson" | "screenedpoisson" | "sp" => Ok(Profile::ScreenedPoisson),
            "spherical" | "ball" => Ok(Profile::Spherical),
            "riesz" => Err(Error::Invalid(
                "the Riesz potential profile is not supported".into(),
            )),
            other => Err(Error::Invalid(format!("unknown kernel profile `{other}`"))),
        }
    }
}

impl TryFrom<String> for Profile {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Profile> for String {
    fn from(p: Profile) -> String {
        p.name().to_string()
    }
}

/// An isotropic interaction kernel `R(r) = rate · R̂(r; λ)` in dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub profile: Profile,
    pub rate: f64,
    /// Precision λ (inverse length); ignored for `Local`.
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    pub dim: f64,
}

fn default_lambda() -> f64 {
    1.0
}

impl Kernel {
    pub fn new(profile: Profile, rate: f64, lambda: f64, dim: f64) -> Result<Self> {
        let k = Self {
            profile,
            rate,
            lambda,
            dim,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn local(rate: f64, dim: f64) -> Self {
        Self {
            profile: Profile::Local,
            rate,
            lambda: 0.0,
            dim,
        }
    }

    pub fn normal(rate: f64, lambda: f64, dim: f64) -> Self {
        Self { profile: Profile::Normal, rate, lambda, dim }
    }

    pub fn screened_poisson(rate: f64, lambda: f64, dim: f64) -> Self {
        Self { profile: Profile::ScreenedPoisson, rate, lambda, dim }
    }

    pub fn spherical(rate: f64, lambda: f64, dim: f64) -> Self {
        Self { profile: Profile::Spherical, rate, lambda, dim }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate.is_finite() && self.rate >= 0.0) {
            return Err(Error::Invalid(format!("kernel rate must be >= 0, got {}", self.rate)));
        }
        if !(self.dim.is_finite() && self.dim >= 1.0) {
            return Err(Error::Invalid(format!("kernel dim must be >= 1, got {}", self.dim)));
        }
        if !self.is_local() && !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Invalid(format!(
                "kernel precision must be positive and finite, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    pub fn is_local(&self) -> bool {
        self.profile == Profile::Local
    }

    pub fn with_rate(&self, rate: f64) -> Self {
        Self { rate, ..*self }
    }

    pub fn with_dim(&self, dim: f64) -> Self {
        Self { dim, ..*self }
    }

    /// `R(r) = rate · R̂(r)`.
    pub fn real_space(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain {
                func: "real_space",
                value: r,
                expected: "r >= 0",
            });
        }
        let d = self.dim;
        let l = self.lambda;
        let shape = match self.profile {
            Profile::Local => return Err(Error::DeltaProfile),
            Profile::Normal => (l * l / PI).powf(0.5 * d) * (-(l * r).powi(2)).exp(),
            Profile::ScreenedPoisson => {
                let nu = 0.5 * d - 1.0;
                if r == 0.0 {
                    if d < 2.0 {
                        // small-argument limit of (λ/r)^ν K_{−ν}(λr), ν < 0
                        (2.0 * PI).powf(-0.5 * d) * l.powf(d) * gamma(-nu)? * 2f64.powf(-0.5 * d)
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (2.0 * PI).powf(-0.5 * d)
                        * l
                        * l
                        * (l / r).powf(nu)
                        * bessel_k(nu.abs(), l * r)?
                }
            }
            Profile::Spherical => {
                if r * l <= 1.0 {
                    l.powf(d) / crate::specialfns::ball_volume(d)
                } else {
                    0.0
                }
            }
        };
        Ok(self.rate * shape)
    }

    /// Normalized momentum profile `R̂(k)`, with `R̂(0) = 1`.
    pub fn momentum_shape(&self, k: f64) -> f64 {
        let k = k.abs();
        let l = self.lambda;
        match self.profile {
            Profile::Local => 1.0,
            Profile::Normal => (-(k * k) / (4.0 * l * l)).exp(),
            Profile::ScreenedPoisson => {
                let q = k / l;
                1.0 / (1.0 + q * q)
            }
            Profile::Spherical => {
                let nu = 0.5 * self.dim;
                let x = k / l;
                let g = gamma(nu + 1.0).expect("nu + 1 > 0");
                if x <= SPHERICAL_SERIES_THRESHOLD {
                    g * bessel_j_reduced_series(nu, x)
                } else {
                    (2.0 / x).powf(nu) * g * bessel_j(nu, x).expect("valid Bessel arguments")
                }
            }
        }
    }

    /// `R(k) = rate · R̂(k)`.
    pub fn momentum_space(&self, k: f64) -> f64 {
        self.rate * self.momentum_shape(k)
    }

    /// Per-component second moment of `R̂(r)`.
    pub fn variance(&self) -> f64 {
        let l = self.lambda;
        match self.profile {
            Profile::Local => 0.0,
            Profile::Normal => 1.0 / (2.0 * l * l),
            Profile::ScreenedPoisson => 2.0 / (l * l),
            Profile::Spherical => 1.0 / (l * l * (self.dim + 2.0)),
        }
    }

    /// The kernel with precision `a·λ`.
    pub fn rescaled(&self, a: f64) -> Self {
        Self {
            lambda: self.lambda * a,
            ..*self
        }
    }

    /// Fraction of the kernel mass at separation larger than `r`.
    pub fn tail_mass(&self, r: f64) -> f64 {
        let d = self.dim;
        let y = self.lambda * r;
        match self.profile {
            Profile::Local => 0.0,
            Profile::Spherical => {
                if y >= 1.0 {
                    0.0
                } else {
                    1.0 - y.powf(d)
                }
            }
            Profile::Normal => {
                let a = 0.5 * d;
                crate::specialfns::upper_incomplete_gamma(a, y * y).expect("a > 0")
                    / gamma(a).expect("a > 0")
            }
            Profile::ScreenedPoisson => {
                if y == 0.0 {
                    return 1.0;
                }
                // ∫_y^∞ x^{d/2} K_{d/2−1}(x) dx = y^{d/2} K_{d/2}(y)
                sphere_surface(d)
                    * (2.0 * PI).powf(-0.5 * d)
                    * y.powf(0.5 * d)
                    * bessel_k(0.5 * d, y).expect("y > 0")
            }
        }
    }

    /// Radius beyond which at most `mass_tol` of the kernel mass lies.
    pub fn truncation_radius(&self, mass_tol: f64) -> Result<f64> {
        if !(mass_tol > 0.0 && mass_tol < 1.0) {
            return Err(Error::Invalid(format!(
                "mass tolerance must lie in (0, 1), got {mass_tol}"
            )));
        }
        match self.profile {
            Profile::Local => return Ok(0.0),
            Profile::Spherical => return Ok(1.0 / self.lambda),
            _ => {}
        }
        let mut lo = 0.0;
        let mut hi = 1.0 / self.lambda;
        while self.tail_mass(hi) > mass_tol {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.tail_mass(mid) > mass_tol {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(hi)
    }

    /// Numerical radial Fourier transform `∫ e^{−ik·r} R(r) dᵈr`, as a check on
    /// [`Kernel::momentum_space`]. Uses cosine/sine forms in d = 1, 3 and the
    /// Hankel form otherwise.
    pub fn radial_fourier(&self, k: f64, opts: &QuadOptions) -> Result<f64> {
        if self.is_local() {
            return Ok(self.rate);
        }
        let d = self.dim;
        let rmax = match self.profile {
            Profile::Spherical => 1.0 / self.lambda,
            _ => self.truncation_radius(1e-17)?,
        };
        let mut failure = None;
        let mut density = |r: f64| match self.real_space(r) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        };
        let q = if k == 0.0 {
            let s = sphere_surface(d);
            integrate(|r| s * r.powf(d - 1.0) * density(r), 0.0, rmax, opts)
        } else if d == 1.0 {
            let mut q = integrate(|r| (k * r).cos() * density(r), 0.0, rmax, opts);
            q.value *= 2.0;
            q
        } else if d == 3.0 {
            let mut q = integrate(|r| r * (k * r).sin() * density(r), 0.0, rmax, opts);
            q.value *= 4.0 * PI / k;
            q
        } else {
            let nu = 0.5 * d - 1.0;
            let mut q = integrate(
                |r| r.powf(0.5 * d) * bessel_j(nu, k * r).unwrap_or(0.0) * density(r),
                0.0,
                rmax,
                opts,
            );
            q.value *= (2.0 * PI).powf(0.5 * d) * k.powf(-nu);
            q
        };
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(q.value)
    }

    /// Draw a displacement with density `R̂` into `out` (length = dimension).
    pub fn sample_displacement_into<G: Rng + ?Sized>(&self, rng: &mut G, out: &mut [f64]) {
        let l = self.lambda;
        match self.profile {
            Profile::Local => out.iter_mut().for_each(|x| *x = 0.0),
            Profile::Normal => {
                let sd = 1.0 / (l * std::f64::consts::SQRT_2);
                for x in out.iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    *x = sd * z;
                }
            }
            Profile::ScreenedPoisson => {
                // λ²/(λ²+k²) = ∫ λ² e^{−s(λ²+k²)} ds: a Gaussian of variance
                // 2s per component with s ~ Exp(λ²).
                let s: f64 = Exp::new(l * l).expect("positive rate").sample(rng);
                let sd = (2.0 * s).sqrt();
                for x in out.iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    *x = sd * z;
                }
            }
            Profile::Spherical => {
                let mut norm2 = 0.0;
                for x in out.iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    *x = z;
                    norm2 += z * z;
                }
                let u: f64 = rng.random();
                let radius = u.powf(1.0 / out.len() as f64) / l;
                let scale = radius / norm2.sqrt();
                out.iter_mut().for_each(|x| *x *= scale);
            }
        }
    }

    /// Draw a displacement with density `R̂`; requires integer dimension.
    pub fn sample_displacement<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<f64> {
        let mut out = vec![0.0; self.dim.round() as usize];
        self.sample_displacement_into(rng, &mut out);
        out
    }
}
