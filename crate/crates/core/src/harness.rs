//! The `nlrd` command line.
//!
//! Every subcommand reads one section of a TOML config (`--config`) or the
//! equivalent flags, validates it, and writes a CSV or JSON artifact whose
//! first line or field carries the SHA-256 digest of the resolved config. With
//! `--out`, the resolved config is also written next to the artifact as
//! `<out>.config.toml`, ready to be passed back through `--config`.

use crate::error::{Error, Result};
use crate::kernels::{Kernel, Profile};
use crate::loops::{self, AngularStrategy};
use crate::meanfield::{density_model2_ode, steady_state_model2, ModelParams, SignConvention};
use crate::propagators::{bare_propagator, dressed_propagator, phi_phi, phibar_phi, PropagatorParams};
use crate::quad::QuadOptions;
use crate::rgflow::{RGStateI, RGStateII};
use crate::simulator::{log_spaced, run_replicas, SimConfig};
use crate::trace::config_digest;
use crate::verify::{self, Level, Report};
use clap::error::ErrorKind;
use clap::{Args, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: i64 = 1;

#[derive(Parser, Debug)]
#[command(name = "nlrd", version, about = "Non-local reaction-diffusion toolkit")]
#[command(subcommand_required = true)]
pub struct Cli {
    /// TOML config file. Its section for the subcommand replaces all parameter flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Tabulate a kernel or check its Fourier pair numerically.
    #[command(allow_negative_numbers = true)]
    Kernels(KernelsConfig),
    /// Mean-field density trace or steady state.
    #[command(allow_negative_numbers = true)]
    Meanfield(MeanfieldConfig),
    #[command(subcommand)]
    Propagator(PropagatorCmd),
    /// Loop integrals over a time grid.
    #[command(allow_negative_numbers = true)]
    Loops(LoopsConfig),
    #[command(subcommand)]
    Rg(RgCmd),
    /// Particle simulation with replica averaging.
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateConfig),
    /// Run the self-test suite and write a JSON report.
    Verify(VerifyConfig),
}

#[derive(Subcommand, Debug)]
pub enum PropagatorCmd {
    /// Evaluate the propagators over a (k, t) grid.
    #[command(allow_negative_numbers = true)]
    Eval(PropagatorConfig),
}

#[derive(Subcommand, Debug)]
pub enum RgCmd {
    /// Tabulate the running couplings over a log-spaced γ grid.
    #[command(allow_negative_numbers = true)]
    Flow(RgConfig),
}

/// Parse a snake_case enum through its serde names.
fn parse_enum<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|e| e.to_string())
}

/// Flag defaults, so config sections and flags agree on them.
fn flag_defaults<T: Args + FromArgMatches>() -> T {
    let cmd = T::augment_args(clap::Command::new("defaults").no_binary_name(true));
    let matches = cmd.get_matches_from(std::iter::empty::<OsString>());
    T::from_arg_matches(&matches).expect("flag defaults parse")
}

macro_rules! defaults_from_flags {
    ($($t:ty),*) => {$(
        impl Default for $t {
            fn default() -> Self {
                flag_defaults()
            }
        }
    )*};
}

defaults_from_flags!(
    KernelsConfig,
    ModelArgs,
    MeanfieldConfig,
    PropagatorConfig,
    LoopsConfig,
    RgConfig,
    SimulateConfig,
    VerifyConfig
);

fn check_grid(name: &str, xs: &[f64], min: f64) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::Invalid(format!("{name} grid is empty")));
    }
    if let Some(x) = xs.iter().find(|x| !(x.is_finite() && **x >= min)) {
        return Err(Error::Invalid(format!("{name} grid value {x} must be finite and >= {min}")));
    }
    Ok(())
}

fn check_range(name: &str, lo: f64, hi: f64, points: usize) -> Result<()> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || points < 2 {
        return Err(Error::Invalid(format!(
            "{name} range needs 0 < min <= max and at least 2 points, got [{lo}, {hi}] x {points}"
        )));
    }
    Ok(())
}

/// A subcommand's config section.
trait Section: Serialize + DeserializeOwned + Default {
    const NAME: &'static str;
    fn validate(&self) -> Result<()>;
    fn run(&self) -> Result<Artifact>;
}

enum Artifact {
    Csv(String),
    Json(serde_json::Value),
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelsConfig {
    #[arg(long, default_value = "normal")]
    pub profile: Profile,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 3.0)]
    pub dim: f64,
    #[arg(long, value_parser = parse_enum::<KernelsMode>, default_value = "table")]
    pub mode: KernelsMode,
    /// Points at which both R(k) and R(r) are tabulated (x = k = r).
    #[arg(long = "x", value_delimiter = ',', default_values_t = vec![0.0, 0.1, 0.5, 1.0, 2.0, 5.0])]
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelsMode {
    Table,
    FtCheck,
}

impl KernelsConfig {
    fn kernel(&self) -> Result<Kernel> {
        Kernel::new(self.profile, self.rate, self.lambda, self.dim)
    }
}

impl Section for KernelsConfig {
    const NAME: &'static str = "kernels";

    fn validate(&self) -> Result<()> {
        self.kernel()?;
        check_grid("x", &self.x, 0.0)
    }

    fn run(&self) -> Result<Artifact> {
        let k = self.kernel()?;
        let mut s = String::new();
        match self.mode {
            KernelsMode::Table => {
                s.push_str("x,momentum,real_space\n");
                for &x in &self.x {
                    let real = match k.real_space(x) {
                        Ok(v) => format!("{v:e}"),
                        Err(Error::DeltaProfile) => String::new(),
                        Err(e) => return Err(e),
                    };
                    let _ = writeln!(s, "{x:e},{:e},{real}", k.momentum_space(x));
                }
            }
            KernelsMode::FtCheck => {
                let opts = QuadOptions::new(1e-16, 1e-11);
                s.push_str("k,analytic,numeric,rel_err\n");
                for &x in &self.x {
                    let want = k.momentum_space(x);
                    let got = k.radial_fourier(x, &opts)?;
                    let _ = writeln!(s, "{x:e},{want:e},{got:e},{:e}", ((got - want) / want).abs());
                }
            }
        }
        Ok(Artifact::Csv(s))
    }
}

/// Model I/II parameters. `q_rate` is the physical branching rate `D·Q`;
/// `M_over_D` and `B_over_D` are the D-scaled death and birth coefficients.
#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 1.0)]
    pub diffusion: f64,
    #[arg(long, default_value = "normal")]
    pub r_profile: Profile,
    #[arg(long, default_value_t = 1.0)]
    pub r_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r_lambda: f64,
    #[arg(long, default_value = "normal")]
    pub q_profile: Profile,
    #[arg(long, default_value_t = 0.0)]
    pub q_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q_lambda: f64,
    #[arg(long = "m-over-d", default_value_t = 0.0)]
    #[serde(rename = "M_over_D")]
    pub m_over_d: f64,
    #[arg(long = "b-over-d", default_value_t = 0.0)]
    #[serde(rename = "B_over_D")]
    pub b_over_d: f64,
    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub dim: f64,
}

impl ModelArgs {
    pub fn params(&self) -> Result<ModelParams> {
        let p = ModelParams {
            diffusion: self.diffusion,
            rk: Kernel::new(self.r_profile, self.r_rate, self.r_lambda, self.dim)?,
            qk: Kernel::new(self.q_profile, self.q_rate, self.q_lambda, self.dim)?,
            death: self.m_over_d,
            birth: self.b_over_d,
            n0: self.n0,
            dim: self.dim,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeanfieldConfig {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_enum::<MeanfieldMode>, default_value = "trace")]
    pub mode: MeanfieldMode,
    #[arg(long, value_parser = parse_enum::<SignConvention>, default_value = "physical")]
    pub convention: SignConvention,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    /// Number of equally spaced output times, including t = 0.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanfieldMode {
    Trace,
    Steady,
}

impl Section for MeanfieldConfig {
    const NAME: &'static str = "meanfield";

    fn validate(&self) -> Result<()> {
        self.model.params()?;
        check_range("t", self.t_max, self.t_max, self.points)
    }

    fn run(&self) -> Result<Artifact> {
        let p = self.model.params()?;
        match self.mode {
            MeanfieldMode::Trace => {
                let n = self.points - 1;
                let grid: Vec<f64> = (0..=n).map(|i| self.t_max * i as f64 / n as f64).collect();
                Ok(Artifact::Csv(density_model2_ode(&p, &grid, self.convention)?.to_csv()))
            }
            MeanfieldMode::Steady => {
                let x = steady_state_model2(&p, self.convention)?;
                Ok(Artifact::Csv(format!(
                    "M_over_D,B_over_D,steady_state\n{:e},{:e},{x:e}\n",
                    p.death, p.birth
                )))
            }
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagatorConfig {
    #[arg(long, default_value_t = 1.0)]
    pub diffusion: f64,
    #[arg(long = "m-over-d", default_value_t = 0.1)]
    #[serde(rename = "M_over_D")]
    pub m_over_d: f64,
    #[arg(long, default_value = "screened_poisson")]
    pub q_profile: Profile,
    #[arg(long, default_value_t = 0.05)]
    pub q_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q_lambda: f64,
    #[arg(long, default_value = "screened_poisson")]
    pub r_profile: Profile,
    #[arg(long, default_value_t = 1.0)]
    pub r_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r_lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long = "X", default_value_t = 0.1)]
    #[serde(rename = "X")]
    pub x: f64,
    #[arg(long, default_value_t = 3.0)]
    pub dim: f64,
    #[arg(long = "k", value_delimiter = ',', default_values_t = vec![0.0, 0.5, 1.0, 2.0, 5.0])]
    pub k: Vec<f64>,
    #[arg(long = "t", value_delimiter = ',', default_values_t = vec![0.0, 0.5, 1.0, 2.0])]
    pub t: Vec<f64>,
}

impl PropagatorConfig {
    fn params(&self) -> Result<PropagatorParams> {
        let p = PropagatorParams {
            diffusion: self.diffusion,
            death: self.m_over_d,
            qk: Kernel::new(self.q_profile, self.q_rate, self.q_lambda, self.dim)?,
            rk: Kernel::new(self.r_profile, self.r_rate, self.r_lambda, self.dim)?,
            g: self.g,
            x: self.x,
        };
        p.validate()?;
        Ok(p)
    }
}

impl Section for PropagatorConfig {
    const NAME: &'static str = "propagator";

    fn validate(&self) -> Result<()> {
        self.params()?;
        check_grid("k", &self.k, 0.0)?;
        check_grid("t", &self.t, 0.0)
    }

    fn run(&self) -> Result<Artifact> {
        let p = self.params()?;
        let mut s = String::from("k,t,bare,dressed,phibar_phi,phi_phi\n");
        for &k in &self.k {
            for &t in &self.t {
                let _ = writeln!(
                    s,
                    "{k:e},{t:e},{:e},{:e},{:e},{:e}",
                    bare_propagator(k, t, p.diffusion, p.death),
                    dressed_propagator(k, t, p.diffusion, p.death, &p.qk),
                    phibar_phi(k, t, &p),
                    phi_phi(k, t, &p)?
                );
            }
        }
        Ok(Artifact::Csv(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Integral {
    I1,
    I2,
    /// `I₂/I₁`.
    Coupling,
    /// One-loop density correction, using the kernel as `R`.
    X1,
    /// Single-loop tadpole with this kernel as both `R` and `Q` shapes.
    Tadpole,
    TwoLoopMeanAngle,
    TwoLoopLocalQ,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoopsConfig {
    #[arg(long, value_enum, default_value = "i2")]
    pub integral: Integral,
    #[arg(long, default_value = "normal")]
    pub profile: Profile,
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 3.0)]
    pub dim: f64,
    #[arg(long, default_value_t = 1.0)]
    pub diffusion: f64,
    /// Times for i1/i2/coupling/x1; values of τ̄ for the tadpoles.
    #[arg(long = "t", value_delimiter = ',', default_values_t = vec![0.1, 1.0, 10.0])]
    pub t: Vec<f64>,
    /// Initial density (x1 only).
    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,
    /// Branching rate `D·Q` for the tadpoles.
    #[arg(long, default_value_t = 0.05)]
    pub q_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long = "X", default_value_t = 0.1)]
    #[serde(rename = "X")]
    pub x: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
}

impl LoopsConfig {
    fn kernel(&self) -> Result<Kernel> {
        Kernel::new(self.profile, self.rate, self.lambda, self.dim)
    }

    fn tadpole_params(&self, tau_bar: f64) -> Result<PropagatorParams> {
        let k = self.kernel()?;
        let p = PropagatorParams {
            diffusion: self.diffusion,
            death: tau_bar + self.q_rate / self.diffusion - 2.0 * self.g * self.x,
            qk: k.with_rate(self.q_rate),
            rk: k,
            g: self.g,
            x: self.x,
        };
        p.validate()?;
        Ok(p)
    }
}

impl Section for LoopsConfig {
    const NAME: &'static str = "loops";

    fn validate(&self) -> Result<()> {
        self.kernel()?;
        if !(self.diffusion > 0.0 && self.diffusion.is_finite()) {
            return Err(Error::Invalid(format!("diffusion must be > 0, got {}", self.diffusion)));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Invalid("tolerances must be abs_tol >= 0, rel_tol > 0".into()));
        }
        check_grid("t", &self.t, 0.0)
    }

    fn run(&self) -> Result<Artifact> {
        let k = self.kernel()?;
        let opts = QuadOptions::new(self.abs_tol, self.rel_tol);
        let (d, dc) = (self.dim, self.diffusion);
        let name = serde_json::to_value(self.integral).expect("enum serializes");
        let name = name.as_str().expect("unit variant");
        let mut s = String::from("integral,profile,d,lambda,D,t,value,est_error,method\n");
        for &t in &self.t {
            let r = match self.integral {
                Integral::I1 => loops::LoopResult {
                    value: loops::i1(k.rate, t),
                    est_error: 0.0,
                    method: loops::LoopMethod::ClosedForm,
                },
                Integral::I2 => loops::i2(&k, dc, d, t, &opts)?,
                Integral::Coupling => {
                    let i2 = loops::i2(&k, dc, d, t, &opts)?;
                    let i1 = loops::i1(k.rate, t);
                    loops::LoopResult { value: i2.value / i1, est_error: i2.est_error / i1, method: i2.method }
                }
                Integral::X1 => loops::x1_loop(t, &k, self.n0, dc, d, &opts)?,
                Integral::Tadpole => loops::single_loop_tadpole(&self.tadpole_params(t)?, d, &opts)?,
                Integral::TwoLoopMeanAngle => {
                    loops::two_loop_tadpole(&self.tadpole_params(t)?, d, AngularStrategy::MeanAngle, &opts)?
                }
                Integral::TwoLoopLocalQ => {
                    loops::two_loop_tadpole(&self.tadpole_params(t)?, d, AngularStrategy::LocalQ, &opts)?
                }
            };
            let _ = writeln!(
                s,
                "{name},{},{d:e},{:e},{dc:e},{t:e},{:e},{:e},{}",
                self.profile,
                self.lambda,
                r.value,
                r.est_error,
                r.method.name()
            );
        }
        Ok(Artifact::Csv(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum RgModel {
    Model1,
    Model2,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RgConfig {
    #[arg(long, value_enum, default_value = "model1")]
    pub model: RgModel,
    #[arg(long, default_value_t = 1e-3)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 31)]
    pub points: usize,
    /// Model I annihilation rate.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,
    /// Model I dimension.
    #[arg(long, default_value_t = 1.0)]
    pub dim: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Model II state.
    #[arg(long, default_value_t = 0.02)]
    pub u: f64,
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    #[arg(long = "X", default_value_t = 0.1)]
    #[serde(rename = "X")]
    pub x: f64,
    #[arg(long, default_value_t = 0.01)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Model II `ε = 4 − d`.
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
}

impl RgConfig {
    fn model2_state(&self) -> RGStateII {
        RGStateII {
            u: self.u,
            tau: self.tau,
            x: self.x,
            b: self.b,
            lambda_r: self.lambda,
            lambda_q: self.lambda,
            mu: self.mu,
            eps: self.eps,
        }
    }
}

impl Section for RgConfig {
    const NAME: &'static str = "rg";

    fn validate(&self) -> Result<()> {
        check_range("gamma", self.gamma_min, self.gamma_max, self.points)?;
        if self.model == RgModel::Model1 {
            RGStateI::new(self.r, self.lambda, self.n0, self.dim, self.kappa)?;
        } else if !self.eps.is_finite() || !(self.mu > 0.0) {
            return Err(Error::Invalid("model 2 needs finite eps and mu > 0".into()));
        }
        Ok(())
    }

    fn run(&self) -> Result<Artifact> {
        let gammas = log_spaced(self.gamma_min, self.gamma_max, self.points);
        let mut s = String::new();
        match self.model {
            RgModel::Model1 => {
                let st = RGStateI::new(self.r, self.lambda, self.n0, self.dim, self.kappa)?;
                s.push_str("gamma,g_r\n");
                for g in gammas {
                    let _ = writeln!(s, "{g:e},{:e}", st.rescaled(g)?.g_r);
                }
            }
            RgModel::Model2 => {
                let st = self.model2_state();
                s.push_str("gamma,u,tau,X,b\n");
                for g in gammas {
                    let r = st.rescaled(g)?;
                    let _ = writeln!(s, "{g:e},{:e},{:e},{:e},{:e}", r.u, r.tau, r.x, r.b);
                }
            }
        }
        Ok(Artifact::Csv(s))
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Periodic box edge length.
    #[arg(long = "box", default_value_t = 100.0)]
    #[serde(rename = "box")]
    pub box_len: f64,
    /// Time step; chosen from the rates when omitted.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// First and last of the log-spaced recording times.
    #[arg(long, default_value_t = 1.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub pair_tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_particles: usize,
    #[arg(long, default_value_t = 20.0)]
    pub local_lambda: f64,
}

impl SimulateConfig {
    pub fn sim_config(&self) -> Result<SimConfig> {
        check_range("t", self.t_min, self.t_max, self.points)?;
        if self.replicas == 0 {
            return Err(Error::Invalid("replicas must be >= 1".into()));
        }
        let mut c = SimConfig::new(
            self.model.params()?,
            self.box_len,
            log_spaced(self.t_min, self.t_max, self.points),
            self.seed,
        );
        c.dt = self.dt;
        c.pair_tol = self.pair_tol;
        c.max_particles = self.max_particles;
        c.local_lambda = self.local_lambda;
        c.validate()?;
        Ok(c)
    }
}

impl Section for SimulateConfig {
    const NAME: &'static str = "simulate";

    fn validate(&self) -> Result<()> {
        self.sim_config().map(|_| ())
    }

    fn run(&self) -> Result<Artifact> {
        let trace = run_replicas(&self.sim_config()?, self.replicas)?;
        Ok(Artifact::Csv(trace.to_replica_csv()))
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    #[arg(long, value_parser = parse_enum::<Level>, default_value = "fast")]
    pub level: Level,
}

impl Section for VerifyConfig {
    const NAME: &'static str = "verify";

    fn validate(&self) -> Result<()> {
        Ok(())
    }

    fn run(&self) -> Result<Artifact> {
        let mut checks = Vec::new();
        for n in verify::criteria(self.level) {
            let batch = verify::criterion(n);
            let ok = batch.iter().all(|c| c.pass);
            eprintln!("criterion {n:>2}: {}", if ok { "pass" } else { "FAIL" });
            checks.extend(batch);
        }
        let report = Report::new(self.level, checks);
        Ok(Artifact::Json(serde_json::to_value(report).expect("report serializes")))
    }
}

/// Read `[name]` from a TOML config, checking `schema_version`.
fn load_section<C: Section>(path: &Path) -> Result<C> {
    let text = std::fs::read_to_string(path)?;
    let mut table: toml::Table =
        toml::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    match table.get("schema_version").and_then(|v| v.as_integer()) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::Invalid(format!("unsupported schema_version {v}"))),
        None => return Err(Error::Invalid("config lacks an integer schema_version".into())),
    }
    let section = table
        .remove(C::NAME)
        .ok_or_else(|| Error::Invalid(format!("config has no [{}] section", C::NAME)))?;
    section
        .try_into()
        .map_err(|e| Error::Invalid(format!("[{}]: {e}", C::NAME)))
}

/// The resolved config as a loadable TOML document.
fn resolved_toml<C: Section>(cfg: &C, digest: &str) -> String {
    let mut table = toml::Table::new();
    table.insert("schema_version".into(), toml::Value::Integer(SCHEMA_VERSION));
    table.insert(C::NAME.into(), toml::Value::try_from(cfg).expect("config serializes to TOML"));
    format!("# config_digest: {digest}\n{}", toml::to_string(&table).expect("TOML table"))
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config.toml");
    PathBuf::from(s)
}

fn execute<C: Section>(flags: &C, cli: &Cli) -> Result<()> {
    let loaded;
    let cfg = match &cli.config {
        Some(path) => {
            loaded = load_section::<C>(path)?;
            &loaded
        }
        None => flags,
    };
    cfg.validate()?;
    let digest = config_digest(cfg);
    let body = match cfg.run()? {
        Artifact::Csv(csv) => format!("# config_digest: {digest}\n{csv}"),
        Artifact::Json(mut v) => {
            if let Some(obj) = v.as_object_mut() {
                obj.insert("schema_version".into(), SCHEMA_VERSION.into());
                obj.insert("config_digest".into(), digest.clone().into());
            }
            let mut s = serde_json::to_string_pretty(&v).expect("JSON value");
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(out) => {
            write_atomic(out, body.as_bytes())?;
            write_atomic(&sidecar_path(out), resolved_toml(cfg, &digest).as_bytes())
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Cmd::Kernels(c) => execute(c, cli),
        Cmd::Meanfield(c) => execute(c, cli),
        Cmd::Propagator(PropagatorCmd::Eval(c)) => execute(c, cli),
        Cmd::Loops(c) => execute(c, cli),
        Cmd::Rg(RgCmd::Flow(c)) => execute(c, cli),
        Cmd::Simulate(c) => execute(c, cli),
        Cmd::Verify(c) => execute(c, cli),
    }
}

/// Exit code for an error: 2 for numerical failures, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        2
    } else {
        1
    }
}

fn emit_error(kind: &str, message: &str, code: i32) {
    let rec = serde_json::json!({ "error": kind, "message": message, "exit_code": code });
    eprintln!("{rec}");
}

/// Parse `argv` (program name first), run, and return the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            emit_error("usage", e.to_string().trim_end(), 1);
            return 1;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(&e);
            emit_error(e.kind(), &e.to_string(), code);
            code
        }
    }
}
