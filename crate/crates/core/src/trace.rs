//! Density time series produced by ODE integration or simulation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

/// Hex SHA-256 of the canonical JSON form of `value`.
pub fn config_digest<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("config serializes to JSON");
    let hash = Sha256::digest(&json);
    hash.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityTrace {
    pub times: Vec<f64>,
    pub densities: Vec<f64>,
    /// Standard error of the replica mean (zeros for deterministic traces).
    pub stderr: Vec<f64>,
    pub replicas: usize,
    pub seed: Option<u64>,
    pub config_hash: String,
    /// Per-replica densities, `replica_densities[r][i]` at `times[i]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub replica_densities: Vec<Vec<f64>>,
}

impl DensityTrace {
    pub fn deterministic(times: Vec<f64>, densities: Vec<f64>) -> Self {
        let n = times.len();
        Self {
            times,
            densities,
            stderr: vec![0.0; n],
            replicas: 1,
            seed: None,
            config_hash: String::new(),
            replica_densities: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `t,density` rows at full double precision.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,density\n");
        for (t, x) in self.times.iter().zip(&self.densities) {
            let _ = writeln!(s, "{t:e},{x:e}");
        }
        s
    }

    /// `t,density,stderr,n_replicas` rows.
    pub fn to_replica_csv(&self) -> String {
        let mut s = String::from("t,density,stderr,n_replicas\n");
        for i in 0..self.len() {
            let _ = writeln!(
                s,
                "{:e},{:e},{:e},{}",
                self.times[i], self.densities[i], self.stderr[i], self.replicas
            );
        }
        s
    }

    /// Mean density over samples with `t_lo ≤ t ≤ t_hi`, with its standard error
    /// from the per-sample errors treated as independent.
    pub fn window_mean(&self, t_lo: f64, t_hi: f64) -> Result<(f64, f64)> {
        let idx: Vec<usize> = (0..self.len())
            .filter(|&i| self.times[i] >= t_lo && self.times[i] <= t_hi)
            .collect();
        if idx.is_empty() {
            return Err(Error::InsufficientData(format!(
                "no samples in [{t_lo}, {t_hi}]"
            )));
        }
        let n = idx.len() as f64;
        let mean = idx.iter().map(|&i| self.densities[i]).sum::<f64>() / n;
        let var = idx.iter().map(|&i| self.stderr[i].powi(2)).sum::<f64>() / (n * n);
        Ok((mean, var.sqrt()))
    }
}
