//! Discrete-time particle simulation of Models I and II in a periodic box.
//!
//! Each step applies diffusion, pairwise annihilation, death, branching and
//! spontaneous birth in that order. Pairs are found with a sorted cell list
//! under the minimum-image metric.

use crate::error::{Error, Result};
use crate::kernels::{Kernel, Profile};
use crate::meanfield::ModelParams;
use crate::trace::{config_digest, DensityTrace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"NLRD";

fn default_pair_tol() -> f64 {
    1e-6
}

fn default_max_particles() -> usize {
    10_000_000
}

fn default_local_lambda() -> f64 {
    20.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: ModelParams,
    #[serde(rename = "box")]
    pub box_len: f64,
    /// Time step; `None` selects [`SimConfig::default_dt`].
    #[serde(default)]
    pub dt: Option<f64>,
    pub t_max: f64,
    pub record_times: Vec<f64>,
    pub seed: u64,
    /// Kernel mass allowed beyond the pair cutoff.
    #[serde(default = "default_pair_tol")]
    pub pair_tol: f64,
    #[serde(default = "default_max_particles")]
    pub max_particles: usize,
    /// Precision of the spherical stand-in for local kernels.
    #[serde(default = "default_local_lambda")]
    pub local_lambda: f64,
}

impl SimConfig {
    /// Defaults for everything except the model, box and recording grid.
    pub fn new(params: ModelParams, box_len: f64, record_times: Vec<f64>, seed: u64) -> Self {
        let t_max = record_times.last().copied().unwrap_or(0.0);
        Self {
            params,
            box_len,
            dt: None,
            t_max,
            record_times,
            seed,
            pair_tol: default_pair_tol(),
            max_particles: default_max_particles(),
            local_lambda: default_local_lambda(),
        }
    }

    pub fn dim(&self) -> usize {
        self.params.dim as usize
    }

    /// Kernels as simulated: local profiles become spherical at `local_lambda`
    /// with the same total rate.
    pub fn sim_kernels(&self) -> (Kernel, Kernel) {
        let swap = |k: Kernel| {
            if k.is_local() {
                Kernel::spherical(k.rate, self.local_lambda, k.dim)
            } else {
                k
            }
        };
        (swap(self.params.rk), swap(self.params.qk))
    }

    pub fn cutoff(&self) -> Result<f64> {
        self.sim_kernels().0.truncation_radius(self.pair_tol)
    }

    /// `min(0.05/(Dλ²), 0.1/R(0), 0.1/(DM), 0.1/(DQ))` over the active terms.
    pub fn default_dt(&self) -> f64 {
        let p = &self.params;
        let (rk, qk) = self.sim_kernels();
        let mut dt = if self.t_max > 0.0 { self.t_max / 100.0 } else { 1.0 };
        for k in [rk, qk] {
            if k.rate > 0.0 {
                dt = dt.min(0.05 / (p.diffusion * k.lambda * k.lambda));
            }
        }
        if rk.rate > 0.0 {
            if let Ok(peak) = rk.real_space(0.0) {
                if peak.is_finite() {
                    dt = dt.min(0.1 / peak);
                }
            }
        }
        for rate in [p.diffusion * p.death, qk.rate] {
            if rate > 0.0 {
                dt = dt.min(0.1 / rate);
            }
        }
        dt
    }

    pub fn time_step(&self) -> f64 {
        self.dt.unwrap_or_else(|| self.default_dt())
    }

    pub fn validate(&self) -> Result<()> {
        // D = 0 (frozen particles) is allowed.
        let mut probe = self.params;
        if probe.diffusion == 0.0 {
            probe.diffusion = 1.0;
        }
        probe.validate()?;
        let d = self.params.dim;
        if !(d == 1.0 || d == 2.0 || d == 3.0) {
            return Err(Error::Invalid(format!("simulation needs d in {{1, 2, 3}}, got {d}")));
        }
        if !(self.box_len > 0.0 && self.box_len.is_finite()) {
            return Err(Error::Invalid(format!("box length must be > 0, got {}", self.box_len)));
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(Error::Invalid(format!("t_max must be >= 0, got {}", self.t_max)));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Invalid(format!("dt must be > 0, got {dt}")));
            }
        }
        if self.record_times.windows(2).any(|w| w[1] < w[0])
            || self.record_times.iter().any(|&t| !(0.0..=self.t_max).contains(&t))
        {
            return Err(Error::Invalid(
                "record_times must be non-decreasing and lie in [0, t_max]".into(),
            ));
        }
        if !(self.local_lambda > 0.0) {
            return Err(Error::Invalid("local_lambda must be > 0".into()));
        }
        let rc = self.cutoff()?;
        if self.params.rk.rate > 0.0 && self.box_len <= 10.0 * rc {
            return Err(Error::Invalid(format!(
                "box length {} must exceed 10x the pair cutoff {rc}",
                self.box_len
            )));
        }
        Ok(())
    }

    pub fn digest(&self) -> String {
        config_digest(self)
    }
}

/// `n` log-spaced times from `t_lo` to `t_hi` inclusive.
pub fn log_spaced(t_lo: f64, t_hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![t_hi];
    }
    let (a, b) = (t_lo.ln(), t_hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                t_hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SimState {
    /// Flattened coordinates, `dim` per particle, each in `[0, L)`.
    pub positions: Vec<f64>,
    pub dim: usize,
    pub box_len: f64,
    pub t: f64,
    pub steps: u64,
    pub rng: ChaCha8Rng,
}

impl SimState {
    pub fn count(&self) -> usize {
        self.positions.len() / self.dim
    }

    pub fn density(&self) -> f64 {
        self.count() as f64 / self.box_len.powi(self.dim as i32)
    }

    pub fn particle(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    /// Write the `NLRD` binary snapshot: magic, `u32` dim, `u64` count, then
    /// little-endian `f64` coordinates.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(e.to_string());
        w.write_all(SNAPSHOT_MAGIC).map_err(io)?;
        w.write_all(&(self.dim as u32).to_le_bytes()).map_err(io)?;
        w.write_all(&(self.count() as u64).to_le_bytes()).map_err(io)?;
        for x in &self.positions {
            w.write_all(&x.to_le_bytes()).map_err(io)?;
        }
        Ok(())
    }
}

/// Read an `NLRD` snapshot as `(dim, positions)`.
pub fn read_snapshot<R: Read>(mut r: R) -> Result<(usize, Vec<f64>)> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    let mut header = [0u8; 16];
    r.read_exact(&mut header).map_err(io)?;
    if &header[..4] != SNAPSHOT_MAGIC {
        return Err(Error::Io("not an NLRD snapshot".into()));
    }
    let dim = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let count = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
    let mut buf = vec![0u8; 8 * dim * count];
    r.read_exact(&mut buf).map_err(io)?;
    let positions = buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((dim, positions))
}

fn wrap(x: f64, l: f64) -> f64 {
    let y = x.rem_euclid(l);
    if y >= l {
        0.0
    } else {
        y
    }
}

/// Poisson(`n0·L^d`) particles placed uniformly.
pub fn init_poisson(config: &SimConfig, mut rng: ChaCha8Rng) -> Result<SimState> {
    let dim = config.dim();
    let l = config.box_len;
    let mean = config.params.n0 * l.powi(dim as i32);
    let n = poisson(&mut rng, mean)?;
    if n > config.max_particles {
        return Err(Error::CapExceeded { count: n, cap: config.max_particles });
    }
    let positions = (0..n * dim).map(|_| l * rng.random::<f64>()).collect();
    Ok(SimState { positions, dim, box_len: l, t: 0.0, steps: 0, rng })
}

fn poisson<G: Rng>(rng: &mut G, mean: f64) -> Result<usize> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|e| Error::Invalid(format!("Poisson mean {mean}: {e}")))?;
    Ok(dist.sample(rng) as usize)
}

/// Pair rate as a function of squared separation.
#[derive(Debug, Clone, Copy)]
enum PairRate {
    Normal { amp: f64, l2: f64 },
    Spherical { amp: f64, r2_max: f64 },
    Other(Kernel),
}

impl PairRate {
    fn new(k: Kernel) -> Self {
        let d = k.dim;
        let l = k.lambda;
        match k.profile {
            Profile::Normal => PairRate::Normal {
                amp: k.rate * (l * l / std::f64::consts::PI).powf(0.5 * d),
                l2: l * l,
            },
            Profile::Spherical => PairRate::Spherical {
                amp: k.real_space(0.0).unwrap_or(0.0),
                r2_max: 1.0 / (l * l),
            },
            _ => PairRate::Other(k),
        }
    }

    fn at(&self, r2: f64) -> f64 {
        match *self {
            PairRate::Normal { amp, l2 } => amp * (-l2 * r2).exp(),
            PairRate::Spherical { amp, r2_max } => {
                if r2 <= r2_max {
                    amp
                } else {
                    0.0
                }
            }
            PairRate::Other(k) => k.real_space(r2.sqrt()).unwrap_or(f64::INFINITY),
        }
    }
}

/// Precomputed per-run quantities for [`SimState`] updates.
#[derive(Debug, Clone)]
pub struct Stepper {
    dim: usize,
    box_len: f64,
    dt: f64,
    hop_sd: f64,
    pair: PairRate,
    annihilate: bool,
    cutoff2: f64,
    cells: [usize; 3],
    cell_edge: [f64; 3],
    /// Per cell, itself and the adjacent cells with larger index.
    half_stencil: Vec<Vec<usize>>,
    p_death: f64,
    p_branch: f64,
    branch_kernel: Kernel,
    birth_mean: f64,
    max_particles: usize,
}

impl Stepper {
    pub fn new(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let dim = config.dim();
        let p = &config.params;
        let l = config.box_len;
        let dt = config.time_step();
        let (rk, qk) = config.sim_kernels();
        let rc = config.cutoff()?;
        let mut cells = [1usize; 3];
        let mut cell_edge = [l; 3];
        for a in 0..dim {
            cells[a] = ((l / rc).floor() as usize).max(1);
            cell_edge[a] = l / cells[a] as f64;
        }
        let ncell: usize = cells.iter().product();
        let mut nb = Vec::with_capacity(27);
        let half_stencil = (0..ncell)
            .map(|c| {
                Self::neighbours(dim, cells, c, &mut nb);
                nb.iter().copied().filter(|&x| x >= c).collect()
            })
            .collect();
        Ok(Self {
            dim,
            box_len: l,
            dt,
            hop_sd: (2.0 * p.diffusion * dt).sqrt(),
            pair: PairRate::new(rk),
            annihilate: rk.rate > 0.0,
            cutoff2: rc * rc,
            cells,
            cell_edge,
            half_stencil,
            p_death: -(-p.diffusion * p.death * dt).exp_m1(),
            p_branch: -(-qk.rate * dt).exp_m1(),
            branch_kernel: qk,
            birth_mean: p.diffusion * p.birth * l.powi(dim as i32) * dt,
            max_particles: config.max_particles,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, s: &mut SimState) -> Result<()> {
        self.diffuse(s);
        let marked = if self.annihilate { self.annihilation(s) } else { vec![false; s.count()] };
        self.react(s, &marked)?;
        s.steps += 1;
        s.t = s.steps as f64 * self.dt;
        Ok(())
    }

    fn diffuse(&self, s: &mut SimState) {
        if self.hop_sd == 0.0 {
            return;
        }
        let l = self.box_len;
        for x in s.positions.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut s.rng);
            *x = wrap(*x + self.hop_sd * z, l);
        }
    }

    fn cell_of(&self, x: &[f64]) -> usize {
        let mut id = 0;
        for a in (0..self.dim).rev() {
            let c = ((x[a] / self.cell_edge[a]) as usize).min(self.cells[a] - 1);
            id = id * self.cells[a] + c;
        }
        id
    }

    /// Distinct cells adjacent to `id` (including itself), sorted.
    fn neighbours(dim: usize, cells: [usize; 3], id: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut c = [0usize; 3];
        let mut rest = id;
        for a in 0..dim {
            c[a] = rest % cells[a];
            rest /= cells[a];
        }
        let span = 3usize.pow(dim as u32);
        for code in 0..span {
            let mut nid = 0;
            let mut m = code;
            let mut digits = [0usize; 3];
            for digit in digits.iter_mut().take(dim) {
                *digit = m % 3;
                m /= 3;
            }
            for a in (0..dim).rev() {
                let n = cells[a];
                let shifted = (c[a] + n + digits[a] - 1) % n;
                nid = nid * n + shifted;
            }
            out.push(nid);
        }
        out.sort_unstable();
        out.dedup();
    }

    fn min_image_r2(&self, a: &[f64], b: &[f64]) -> f64 {
        let l = self.box_len;
        let mut r2 = 0.0;
        let half = 0.5 * l;
        for (x, y) in a.iter().zip(b) {
            let mut dx = (x - y).abs();
            if dx > half {
                dx = l - dx;
            }
            r2 += dx * dx;
        }
        r2
    }

    fn annihilation(&self, s: &mut SimState) -> Vec<bool> {
        let n = s.count();
        let ncell = self.half_stencil.len();
        let mut start = vec![0usize; ncell + 1];
        let cell: Vec<usize> = (0..n).map(|i| self.cell_of(s.particle(i))).collect();
        for &c in &cell {
            start[c + 1] += 1;
        }
        for c in 0..ncell {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut order = vec![0usize; n];
        for (i, &c) in cell.iter().enumerate() {
            order[fill[c]] = i;
            fill[c] += 1;
        }

        let d = self.dim;
        let mut sorted = Vec::with_capacity(n * d);
        for &i in &order {
            sorted.extend_from_slice(s.particle(i));
        }
        let mut events: Vec<(usize, usize)> = Vec::new();
        for c in 0..ncell {
            let (s0, e0) = (start[c], start[c + 1]);
            if s0 == e0 {
                continue;
            }
            for &nc in &self.half_stencil[c] {
                let e1 = start[nc + 1];
                for a in s0..e0 {
                    let pa = &sorted[a * d..(a + 1) * d];
                    let from = if nc == c { a + 1 } else { start[nc] };
                    for b in from..e1 {
                        let r2 = self.min_image_r2(pa, &sorted[b * d..(b + 1) * d]);
                        if r2 > self.cutoff2 {
                            continue;
                        }
                        let p = -(-self.pair.at(r2) * self.dt).exp_m1();
                        if p > 0.0 && s.rng.random::<f64>() < p {
                            events.push((order[a], order[b]));
                        }
                    }
                }
            }
        }

        events.shuffle(&mut s.rng);
        let mut marked = vec![false; n];
        for (i, j) in events {
            if !marked[i] && !marked[j] {
                marked[i] = true;
                marked[j] = true;
            }
        }
        marked
    }

    fn react(&self, s: &mut SimState, marked: &[bool]) -> Result<()> {
        let d = self.dim;
        let l = self.box_len;
        let n = s.count();
        let mut next = Vec::with_capacity(s.positions.len());
        for (i, &gone) in marked.iter().enumerate().take(n) {
            if gone {
                continue;
            }
            if self.p_death > 0.0 && s.rng.random::<f64>() < self.p_death {
                continue;
            }
            next.extend_from_slice(&s.positions[i * d..(i + 1) * d]);
        }
        if self.p_branch > 0.0 {
            let parents = next.len() / d;
            let mut disp = vec![0.0; d];
            for i in 0..parents {
                if s.rng.random::<f64>() < self.p_branch {
                    self.branch_kernel.sample_displacement_into(&mut s.rng, &mut disp);
                    for k in 0..d {
                        next.push(wrap(next[i * d + k] + disp[k], l));
                    }
                }
                if next.len() / d > self.max_particles {
                    return Err(Error::CapExceeded { count: next.len() / d, cap: self.max_particles });
                }
            }
        }
        let born = poisson(&mut s.rng, self.birth_mean)?;
        for _ in 0..born * d {
            next.push(l * s.rng.random::<f64>());
        }
        let count = next.len() / d;
        if count > self.max_particles {
            return Err(Error::CapExceeded { count, cap: self.max_particles });
        }
        s.positions = next;
        Ok(())
    }
}

/// Advance `state` by one step of `config`.
pub fn step(state: &mut SimState, config: &SimConfig) -> Result<()> {
    Stepper::new(config)?.step(state)
}

/// Densities at the record times for one seed, as `(times, densities)`.
fn run_seed(config: &SimConfig, stepper: &Stepper, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut state = init_poisson(config, ChaCha8Rng::seed_from_u64(seed))?;
    let dt = stepper.dt();
    let mut times = Vec::with_capacity(config.record_times.len());
    let mut dens = Vec::with_capacity(config.record_times.len());
    for &tr in &config.record_times {
        let target = (tr / dt - 1e-9).ceil().max(0.0) as u64;
        while state.steps < target {
            stepper.step(&mut state)?;
        }
        times.push(state.t);
        dens.push(state.density());
    }
    Ok((times, dens))
}

/// Single trajectory with `config.seed`.
pub fn run(config: &SimConfig) -> Result<DensityTrace> {
    run_replicas(config, 1)
}

/// `n_rep` independent trajectories (replica `i` seeded with `seed ⊕ i`),
/// averaged with standard errors of the mean.
pub fn run_replicas(config: &SimConfig, n_rep: usize) -> Result<DensityTrace> {
    if n_rep == 0 {
        return Err(Error::Invalid("need at least one replica".into()));
    }
    let stepper = Stepper::new(config)?;
    let runs = (0..n_rep as u64)
        .into_par_iter()
        .map(|i| run_seed(config, &stepper, config.seed ^ i))
        .collect::<Result<Vec<_>>>()?;
    let times = runs[0].0.clone();
    let per: Vec<Vec<f64>> = runs.into_iter().map(|r| r.1).collect();
    let m = times.len();
    let nf = n_rep as f64;
    let mut mean = vec![0.0; m];
    let mut se = vec![0.0; m];
    for i in 0..m {
        mean[i] = per.iter().map(|r| r[i]).sum::<f64>() / nf;
        if n_rep > 1 {
            let var = per.iter().map(|r| (r[i] - mean[i]).powi(2)).sum::<f64>() / (nf - 1.0);
            se[i] = (var / nf).sqrt();
        }
    }
    Ok(DensityTrace {
        times,
        densities: mean,
        stderr: se,
        replicas: n_rep,
        seed: Some(config.seed),
        config_hash: config.digest(),
        replica_densities: if n_rep > 1 { per } else { Vec::new() },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub points: usize,
}

fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let se = (rss / (n - 2.0) / sxx).sqrt();
    (slope, intercept, se)
}

/// Least-squares slope of `ln density` against `ln t` over `[t_lo, t_hi]`.
///
/// With per-replica data the standard error is a leave-one-replica-out
/// jackknife, which accounts for correlations along each trajectory;
/// otherwise it is the ordinary regression error.
pub fn fit_decay_exponent(trace: &DensityTrace, t_lo: f64, t_hi: f64) -> Result<DecayFit> {
    let idx: Vec<usize> = (0..trace.len())
        .filter(|&i| trace.times[i] >= t_lo && trace.times[i] <= t_hi)
        .collect();
    if idx.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "{} samples in [{t_lo}, {t_hi}], need at least 8",
            idx.len()
        )));
    }
    let x: Vec<f64> = idx.iter().map(|&i| trace.times[i].ln()).collect();
    let logs = |dens: &dyn Fn(usize) -> f64| -> Result<Vec<f64>> {
        idx.iter()
            .map(|&i| {
                let v = dens(i);
                if v > 0.0 {
                    Ok(v.ln())
                } else {
                    Err(Error::InsufficientData(format!("non-positive density at t = {}", trace.times[i])))
                }
            })
            .collect()
    };
    let y = logs(&|i| trace.densities[i])?;
    let (slope, intercept, se) = ols(&x, &y);
    let reps = &trace.replica_densities;
    let stderr = if reps.len() >= 2 {
        let n = reps.len() as f64;
        let mut slopes = Vec::with_capacity(reps.len());
        for skip in 0..reps.len() {
            let yj = logs(&|i| {
                reps.iter()
                    .enumerate()
                    .filter(|(r, _)| *r != skip)
                    .map(|(_, v)| v[i])
                    .sum::<f64>()
                    / (n - 1.0)
            })?;
            slopes.push(ols(&x, &yj).0);
        }
        let mean = slopes.iter().sum::<f64>() / n;
        ((n - 1.0) / n * slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>()).sqrt()
    } else {
        se
    };
    Ok(DecayFit { slope, stderr, intercept, points: idx.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dim: f64, l: f64) -> SimConfig {
        let rk = Kernel::normal(1.0, 1.0, dim);
        SimConfig::new(ModelParams::model1(1.0, rk, 1.0), l, vec![0.0, 1.0], 7)
    }

    #[test]
    fn neighbour_cells_wrap() {
        let s = Stepper::new(&config(2.0, 40.0)).unwrap();
        let mut nb = Vec::new();
        Stepper::neighbours(2, s.cells, 0, &mut nb);
        assert_eq!(nb.len(), 9);
        let total: usize = s.half_stencil.iter().map(|v| v.len()).sum();
        assert_eq!(total, s.half_stencil.len() * 5);
        let s = Stepper::new(&config(1.0, 40.0)).unwrap();
        Stepper::neighbours(1, s.cells, 0, &mut nb);
        assert_eq!(nb, vec![0, 1, s.cells[0] - 1]);
    }

    #[test]
    fn min_image_is_symmetric_and_periodic() {
        let s = Stepper::new(&config(3.0, 50.0)).unwrap();
        let a = [0.5, 49.0, 25.0];
        let b = [49.5, 1.0, 25.0];
        let r2 = s.min_image_r2(&a, &b);
        assert!((r2 - 5.0).abs() < 1e-12);
        assert_eq!(r2, s.min_image_r2(&b, &a));
    }

    #[test]
    fn snapshot_roundtrip() {
        let c = config(2.0, 40.0);
        let st = init_poisson(&c, ChaCha8Rng::seed_from_u64(3)).unwrap();
        let mut buf = Vec::new();
        st.write_snapshot(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"NLRD");
        assert_eq!(buf.len(), 16 + 8 * st.positions.len());
        let (dim, pos) = read_snapshot(&buf[..]).unwrap();
        assert_eq!(dim, 2);
        assert_eq!(pos, st.positions);
    }
}
