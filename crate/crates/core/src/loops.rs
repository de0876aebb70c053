//! Loop integrals: the annihilation vertex diagrams I₁ and I₂, the one-loop
//! density correction, and the Model II tadpoles.

use crate::error::{Error, Result};
use crate::kernels::{Kernel, Profile};
use crate::meanfield::density_model1;
use crate::propagators::{f_factor, response_functional_unchecked, PropagatorParams};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::specialfns::{gamma, ln_gamma, sphere_surface, upper_incomplete_gamma_scaled};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopMethod {
    ClosedForm,
    Quadrature,
    Series,
}

impl LoopMethod {
    pub fn name(self) -> &'static str {
        match self {
            LoopMethod::ClosedForm => "closed_form",
            LoopMethod::Quadrature => "quadrature",
            LoopMethod::Series => "series",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopResult {
    pub value: f64,
    pub method: LoopMethod,
    pub est_error: f64,
}

impl LoopResult {
    fn exact(value: f64, method: LoopMethod) -> Self {
        Self {
            value,
            method,
            est_error: (value * f64::EPSILON * 16.0).abs(),
        }
    }
}

/// Angular treatment of `Q̂(k − l)` in the two-loop tadpole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularStrategy {
    /// `Q̂ ≡ 1` and `|k − l|` read as the difference of radial magnitudes.
    LocalQ,
    /// Exact average over the angle between `k` and `l`.
    MeanAngle,
}

impl AngularStrategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::LocalQ => "local_q",
            Self::MeanAngle => "mean_angle",
        }
    }
}

impl std::str::FromStr for AngularStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local_q" => Ok(Self::LocalQ),
            "mean_angle" => Ok(Self::MeanAngle),
            _ => Err(Error::Invalid(format!("unknown angular strategy {s:?}"))),
        }
    }
}

/// `∫_k = radial_measure(d) ∫ k^{d−1} dk`.
fn radial_measure(d: f64) -> f64 {
    sphere_surface(d) / (2.0 * PI).powf(d)
}

/// `(x^q − 1)/q`, continuous through `q = 0`.
fn pow_ratio(q: f64, x: f64) -> f64 {
    let l = x.ln();
    if (q * l).abs() < 1e-8 {
        l * (1.0 + 0.5 * q * l + q * q * l * l / 6.0)
    } else {
        (q * l).exp_m1() / q
    }
}

/// `∫₀ˣ (x − v)(1 + v)^{−p} dv`.
fn ramp_integral(p: f64, x: f64) -> f64 {
    if x <= 0.25 {
        // x² Σ (−p choose n) xⁿ / ((n+1)(n+2))
        let mut coef = 1.0;
        let mut sum = 0.0;
        for n in 0..80 {
            let nf = n as f64;
            let term = coef / ((nf + 1.0) * (nf + 2.0));
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
            coef *= -(p + nf) / (nf + 1.0) * x;
        }
        x * x * sum
    } else {
        let z = 1.0 + x;
        z * pow_ratio(1.0 - p, z) - pow_ratio(2.0 - p, z)
    }
}

/// `(y − 1 + e^{−y})/y²`.
fn time_kernel(y: f64) -> f64 {
    if y < 0.1 {
        let mut term = 0.5;
        let mut sum = 0.0;
        for n in 0..20 {
            sum += term;
            term *= -y / (n as f64 + 3.0);
        }
        sum
    } else {
        (y + (-y).exp_m1()) / (y * y)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain {
            func: "loops",
            value: t,
            expected: "finite t ≥ 0",
        });
    }
    Ok(())
}

/// Magnitude `R·t` of the first vertex diagram (the diagram itself is `−R t`).
pub fn i1(rate: f64, t: f64) -> f64 {
    rate * t
}

/// I₂ by radial quadrature for an arbitrary normalized kernel.
pub fn i2_quadrature(kernel: &Kernel, diffusion: f64, d: f64, t: f64, opts: &QuadOptions) -> Result<LoopResult> {
    check_time(t)?;
    if t == 0.0 || kernel.rate == 0.0 {
        return Ok(LoopResult::exact(0.0, LoopMethod::Quadrature));
    }
    let kern = kernel.with_dim(d);
    let pref = 2.0 * kernel.rate * kernel.rate / ((4.0 * PI).powf(0.5 * d) * gamma(0.5 * d)?);
    let diff_scale = 1.0 / (2.0 * diffusion * t).sqrt();
    let scale = if kern.is_local() { diff_scale } else { diff_scale.min(kern.lambda) };
    let f = |k: f64| {
        let r = kern.momentum_shape(k);
        k.powf(d - 1.0) * r * r * time_kernel(2.0 * diffusion * k * k * t)
    };
    let q = integrate_to_infinity(f, 0.0, 0.25 * scale, opts)?.into_result("I2 radial quadrature")?;
    let pref = pref * t * t;
    Ok(LoopResult {
        value: pref * q.value,
        method: LoopMethod::Quadrature,
        est_error: pref * q.error,
    })
}

/// Local-kernel I₂, `R² t^{2−d/2} / ((8πD)^{d/2}(1−d/2)(2−d/2))`; UV divergent for `d ≥ 2`.
pub fn i2_local_closed(rate: f64, diffusion: f64, d: f64, t: f64) -> Result<LoopResult> {
    check_time(t)?;
    if d >= 2.0 {
        return Err(Error::Divergence(format!("local I2 is UV divergent in d = {d} ≥ 2")));
    }
    let v = rate * rate * t.powf(2.0 - 0.5 * d) / ((8.0 * PI * diffusion).powf(0.5 * d) * (1.0 - 0.5 * d) * (2.0 - 0.5 * d));
    Ok(LoopResult::exact(v, LoopMethod::ClosedForm))
}

/// Normal-kernel I₂ in closed form, finite in every dimension.
pub fn i2_normal_closed(rate: f64, lambda: f64, diffusion: f64, d: f64, t: f64) -> Result<LoopResult> {
    check_time(t)?;
    if !(lambda > 0.0) {
        return Err(Error::Domain {
            func: "i2_normal_closed",
            value: lambda,
            expected: "λ > 0",
        });
    }
    let x = 4.0 * diffusion * t * lambda * lambda;
    let v = rate * rate * lambda.powf(d - 4.0) / ((2.0 * PI).powf(0.5 * d) * 16.0 * diffusion * diffusion)
        * ramp_integral(0.5 * d, x);
    let method = if x <= 0.25 { LoopMethod::Series } else { LoopMethod::ClosedForm };
    Ok(LoopResult::exact(v, method))
}

/// Screened-Poisson I₂ via upper incomplete gamma functions.
///
/// Near the removable singularities `d = 2, 4` the value is Richardson
/// extrapolated from neighbouring dimensions; for `2Dtλ² < 10⁻³` the
/// cancellation is avoided by radial quadrature.
pub fn i2_screened_closed(rate: f64, lambda: f64, diffusion: f64, d: f64, t: f64) -> Result<LoopResult> {
    check_time(t)?;
    if !(lambda > 0.0) {
        return Err(Error::Domain {
            func: "i2_screened_closed",
            value: lambda,
            expected: "λ > 0",
        });
    }
    if d >= 6.0 && d.fract() == 0.0 && (d as i64) % 2 == 0 {
        return Err(Error::Divergence(format!("screened-Poisson I2 diverges in d = {d}")));
    }
    if t == 0.0 || rate == 0.0 {
        return Ok(LoopResult::exact(0.0, LoopMethod::ClosedForm));
    }
    let c = 2.0 * diffusion * t * lambda * lambda;
    if c < 1e-3 {
        let kern = Kernel::screened_poisson(rate, lambda, d);
        return i2_quadrature(&kern, diffusion, d, t, &QuadOptions::new(0.0, 1e-11));
    }
    let near = |s: f64| (d - s).abs() < 1e-4;
    if near(2.0) || near(4.0) {
        let h = 2e-3;
        let g = |dd: f64| screened_raw(rate, lambda, diffusion, dd, c);
        let s1 = g(d + h)? + g(d - h)?;
        let s2 = g(d + 2.0 * h)? + g(d - 2.0 * h)?;
        let v = (4.0 * s1 - s2) / 6.0;
        return Ok(LoopResult {
            value: v,
            method: LoopMethod::Series,
            est_error: 1e-9 * v.abs(),
        });
    }
    let v = screened_raw(rate, lambda, diffusion, d, c)?;
    Ok(LoopResult {
        value: v,
        method: LoopMethod::ClosedForm,
        est_error: 1e-13 * v.abs() / ((d - 2.0) * (d - 4.0)).abs().min(1.0),
    })
}

fn screened_raw(rate: f64, lambda: f64, diffusion: f64, d: f64, c: f64) -> Result<f64> {
    let a = 4.0 - 0.5 * d;
    let pole = |e: Error| match e {
        Error::Pole { .. } => Error::Divergence(format!("screened-Poisson I2 diverges in d = {d}")),
        e => e,
    };
    let ga = gamma(a).map_err(pole)?;
    let ga1 = gamma(a - 1.0).map_err(pole)?;
    let inc = upper_incomplete_gamma_scaled(a, c)? - c * upper_incomplete_gamma_scaled(a - 1.0, c)?;
    let braces = inc - ga - (4.0 - d) * 0.5 * c * ga1;
    Ok(rate * rate * lambda.powf(d - 4.0)
        / ((4.0 * PI).powf(0.5 * d) * diffusion * diffusion * (d - 2.0) * (d - 4.0))
        * braces)
}

/// Best available I₂ for the kernel: closed forms where known, quadrature otherwise.
pub fn i2(kernel: &Kernel, diffusion: f64, d: f64, t: f64, opts: &QuadOptions) -> Result<LoopResult> {
    match kernel.profile {
        Profile::Local => i2_local_closed(kernel.rate, diffusion, d, t),
        Profile::Normal => i2_normal_closed(kernel.rate, kernel.lambda, diffusion, d, t),
        Profile::ScreenedPoisson => i2_screened_closed(kernel.rate, kernel.lambda, diffusion, d, t),
        Profile::Spherical => i2_quadrature(kernel, diffusion, d, t, opts),
    }
}

/// Dimensionless coupling `I₂/I₁`.
pub fn effective_coupling(kernel: &Kernel, diffusion: f64, d: f64, t: f64, opts: &QuadOptions) -> Result<f64> {
    let denom = i1(kernel.rate, t);
    if denom == 0.0 {
        return Err(Error::Invalid("effective coupling needs R·t > 0".into()));
    }
    Ok(i2(kernel, diffusion, d, t, opts)?.value / denom)
}

/// Time below which the kernel's finite range regulates the UV:
/// `1/(4Dλ²)` for Normal, `1/(2Dλ²)` for the other non-local profiles,
/// infinite for Local.
pub fn crossover_time(kernel: &Kernel, diffusion: f64) -> f64 {
    let l2 = kernel.lambda * kernel.lambda;
    match kernel.profile {
        Profile::Local => f64::INFINITY,
        Profile::Normal => 1.0 / (4.0 * diffusion * l2),
        Profile::ScreenedPoisson | Profile::Spherical => 1.0 / (2.0 * diffusion * l2),
    }
}

/// `∫₀^T g(s) ds` after the substitution `u = ln(1 + a s)`, which flattens
/// the tree-level `1/(1 + a s)` time dependence.
fn log_time_integral<F: FnMut(f64) -> f64>(mut g: F, a: f64, t: f64, opts: &QuadOptions) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if a * t < 1e-3 {
        let q = integrate(g, 0.0, t, opts);
        return (q.value, q.error);
    }
    let u_max = (a * t).ln_1p();
    let q = integrate(
        |u: f64| {
            let s = u.exp_m1() / a;
            g(s) * u.exp() / a
        },
        0.0,
        u_max,
        opts,
    );
    (q.value, q.error)
}

/// One-loop density correction X⁽¹⁾(t) for annihilation with kernel `rk`.
pub fn x1_loop(t: f64, rk: &Kernel, n0: f64, diffusion: f64, d: f64, opts: &QuadOptions) -> Result<LoopResult> {
    check_time(t)?;
    if t == 0.0 || rk.rate == 0.0 || n0 == 0.0 {
        return Ok(LoopResult::exact(0.0, LoopMethod::Quadrature));
    }
    let kern = rk.with_dim(d);
    let r = kern.rate;
    let a = r * n0;
    let inner_opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: (opts.rel_tol * 1e-2).max(1e-13),
        ..*opts
    };
    let shell = |k: f64| {
        let rk2 = kern.momentum_space(k).powi(2);
        let (v, _) = log_time_integral(
            |t2| {
                let outer = response_functional_unchecked(0.0, t2, t, &kern, n0, diffusion);
                let (inner, _) = log_time_integral(
                    |t1| {
                        let g = response_functional_unchecked(k, t1, t2, &kern, n0, diffusion);
                        let x = density_model1(n0, r, t1);
                        g * g * x * x
                    },
                    a,
                    t2,
                    &inner_opts,
                );
                outer * inner
            },
            a,
            t,
            &inner_opts,
        );
        k.powf(d - 1.0) * rk2 * v
    };
    let diff_scale = 1.0 / (2.0 * diffusion * t).sqrt();
    let scale = if kern.is_local() { diff_scale } else { diff_scale.min(kern.lambda) };
    let q = integrate_to_infinity(shell, 0.0, 0.25 * scale, opts)?.into_result("one-loop density")?;
    let m = radial_measure(d);
    Ok(LoopResult {
        value: m * q.value,
        method: LoopMethod::Quadrature,
        est_error: m * q.error + inner_opts.rel_tol * (m * q.value).abs(),
    })
}

fn tadpole_setup(params: &PropagatorParams, d: f64) -> Result<PropagatorParams> {
    params.validate()?;
    let mut p = *params;
    p.qk = p.qk.with_dim(d);
    p.rk = p.rk.with_dim(d);
    if !(f_factor(0.0, &p) > 0.0) {
        return Err(Error::CriticalPoint(format!(
            "F(0) = {} ≤ 0; the tadpoles need τ̄ > 0",
            f_factor(0.0, &p)
        )));
    }
    Ok(p)
}

fn uv_divergence(e: Error) -> Error {
    match e {
        Error::NonConvergence { what, .. } => Error::Divergence(format!("UV divergence: {what}")),
        e => e,
    }
}

/// Single-loop tadpole `−D g² X ∫_k Q̂(k) R̂(k) / F(k)`.
pub fn single_loop_tadpole(params: &PropagatorParams, d: f64, opts: &QuadOptions) -> Result<LoopResult> {
    let p = tadpole_setup(params, d)?;
    if p.g == 0.0 || p.x == 0.0 {
        return Ok(LoopResult::exact(0.0, LoopMethod::Quadrature));
    }
    let mut bad_f = None;
    let f = |k: f64| {
        let fk = f_factor(k, &p);
        if fk <= 0.0 {
            bad_f.get_or_insert(k);
        }
        k.powf(d - 1.0) * p.qk.momentum_shape(k) * p.rk.momentum_shape(k) / fk
    };
    let scale = 0.25 * f_factor(0.0, &p).sqrt();
    let q = integrate_to_infinity(f, 0.0, scale, opts).map_err(uv_divergence)?;
    if let Some(k) = bad_f {
        return Err(Error::CriticalPoint(format!("F({k}) ≤ 0")));
    }
    let q = q.into_result("single-loop tadpole")?;
    let pref = -p.diffusion * p.g * p.g * p.x * radial_measure(d);
    Ok(LoopResult {
        value: pref * q.value,
        method: LoopMethod::Quadrature,
        est_error: pref.abs() * q.error,
    })
}

/// Angular average weights for `sin^{d−2}θ` on `[0, π]`.
struct AngularAverage {
    d: f64,
    norm: f64,
}

impl AngularAverage {
    fn new(d: f64) -> Self {
        let norm = if d > 1.0 {
            (PI.ln() * 0.5 + ln_gamma(0.5 * (d - 1.0)).unwrap_or(f64::NAN) - ln_gamma(0.5 * d).unwrap_or(f64::NAN))
                .exp()
        } else {
            1.0
        };
        Self { d, norm }
    }

    /// Average of `f(cos θ)`.
    fn mean<F: FnMut(f64) -> f64>(&self, mut f: F, opts: &QuadOptions) -> f64 {
        let d = self.d;
        if d == 1.0 {
            return 0.5 * (f(1.0) + f(-1.0));
        }
        let v = if d >= 2.0 {
            integrate(|th: f64| th.sin().powf(d - 2.0) * f(th.cos()), 0.0, PI, opts).value
        } else {
            // θ = (π/2) w^q removes the endpoint singularity of sin^{d−2}θ
            let q = 1.0 / (d - 1.0);
            let half = |sign: f64, f: &mut F| {
                integrate(
                    |w: f64| {
                        let th = 0.5 * PI * w.powf(q);
                        let jac = 0.5 * PI * q * w.powf(q - 1.0);
                        jac * th.sin().powf(d - 2.0) * f(sign * th.cos())
                    },
                    0.0,
                    1.0,
                    opts,
                )
                .value
            };
            half(1.0, &mut f) + half(-1.0, &mut f)
        };
        v / self.norm
    }
}

/// Two-loop (penultimate) tadpole
/// `−2D g⁵ X² ∫_k ∫_l R̂(k) R̂(l)² Q̂(k) Q̂(k−l) / (2F(k)² F(k−l) [F(k)+F(k−l)+F(l)])`.
pub fn two_loop_tadpole(
    params: &PropagatorParams,
    d: f64,
    angular: AngularStrategy,
    opts: &QuadOptions,
) -> Result<LoopResult> {
    let mut p = tadpole_setup(params, d)?;
    if p.g == 0.0 || p.x == 0.0 {
        return Ok(LoopResult::exact(0.0, LoopMethod::Quadrature));
    }
    if angular == AngularStrategy::LocalQ {
        p.qk = Kernel::local(p.qk.rate, d);
    }
    let ang = AngularAverage::new(d);
    let inner_opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: (opts.rel_tol * 1e-2).max(1e-12),
        ..*opts
    };
    let scale = 0.25 * f_factor(0.0, &p).sqrt();
    let mut failure: Option<Error> = None;
    let outer = |k: f64| {
        if failure.is_some() {
            return 0.0;
        }
        let fk = f_factor(k, &p);
        let wk = k.powf(d - 1.0) * p.rk.momentum_shape(k) * p.qk.momentum_shape(k) / (2.0 * fk * fk);
        let inner = |l: f64| {
            let fl = f_factor(l, &p);
            let rl = p.rk.momentum_shape(l);
            let pair = |m: f64| {
                let fm = f_factor(m, &p);
                p.qk.momentum_shape(m) / (fm * (fk + fm + fl))
            };
            let avg = match angular {
                AngularStrategy::LocalQ => pair((k - l).abs()),
                AngularStrategy::MeanAngle => ang.mean(
                    |c| pair((k * k + l * l - 2.0 * k * l * c).max(0.0).sqrt()),
                    &inner_opts,
                ),
            };
            l.powf(d - 1.0) * rl * rl * avg
        };
        // the l integrand peaks near l = k; start the doubling panels beyond it
        let mut inner = inner;
        let split = 2.0 * k;
        let head = integrate(&mut inner, 0.0, split, &inner_opts).value;
        match integrate_to_infinity(inner, split, scale.max(k), &inner_opts) {
            Ok(q) => wk * (head + q.value),
            Err(e) => {
                failure = Some(uv_divergence(e));
                0.0
            }
        }
    };
    let q = integrate_to_infinity(outer, 0.0, scale, opts).map_err(uv_divergence);
    if let Some(e) = failure {
        return Err(e);
    }
    let q = q?.into_result("two-loop tadpole")?;
    let m = radial_measure(d);
    let pref = -2.0 * p.diffusion * p.g.powi(5) * p.x * p.x * m * m;
    Ok(LoopResult {
        value: pref * q.value,
        method: LoopMethod::Quadrature,
        est_error: pref.abs() * q.error + inner_opts.rel_tol * (pref * q.value).abs(),
    })
}
