//! User-facing configuration of the k-cluster pipeline.

use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};
use crate::filters::{GKnobs, HKnobs};
use crate::one_cluster::{default_regions, default_rounds};

/// Everything [`crate::k_cluster::cft_k_cluster`] needs. Optional fields are
/// derived from `k`, `T` and `F` by [`RecoveryConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RecoveryConfig {
    #[serde(rename = "T")]
    pub t_len: f64,
    #[serde(rename = "F")]
    pub f_max: f64,
    pub k: usize,
    /// Tail parameter `delta`.
    pub delta: f64,
    /// Cluster half-width; defaults to `c_delta k^2 / T`.
    #[serde(rename = "Delta")]
    pub cluster_width: Option<f64>,
    pub c_delta: f64,
    /// Bin count; defaults to the next power of two of `max(4k, 4)`.
    pub bins: Option<usize>,
    /// Transition fraction of the bin filter.
    pub alpha: f64,
    pub h: HKnobs,
    pub g: GKnobs,
    pub r_est: usize,
    pub r_repeats: usize,
    pub r_loc: usize,
    pub t_regions: Option<usize>,
    pub d_max: Option<usize>,
    pub vote_spacing: f64,
    pub c_vote: f64,
    pub c_beta: f64,
    /// Hashing stages; defaults to `2k + 5`.
    pub stages: Option<usize>,
    /// Envelope degree; defaults to the theory value capped at `degree_cap`.
    pub degree: Option<usize>,
    pub degree_cap: usize,
    /// Regression sample count `min(c_m N^2 ln N, m_cap)` for `N` unknowns.
    pub c_m: f64,
    pub m_cap: usize,
    /// Boosted regression runs; defaults to `2k + 5`.
    pub boost_runs: Option<usize>,
    /// Maximum carriers kept; defaults to `4k`.
    pub freq_cap: Option<usize>,
    /// Relative energy a bin needs to be searched.
    pub bin_gate: f64,
    pub seed: u64,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self {
            t_len: 1.0,
            f_max: 1000.0,
            k: 1,
            delta: 0.01,
            cluster_width: None,
            c_delta: 0.25,
            bins: None,
            alpha: 0.5,
            h: HKnobs::default(),
            g: GKnobs::default(),
            r_est: 16,
            r_repeats: 16,
            r_loc: 8,
            t_regions: None,
            d_max: None,
            vote_spacing: 0.25,
            c_vote: 0.5,
            c_beta: 1.0,
            stages: None,
            degree: None,
            degree_cap: 12,
            c_m: 0.05,
            m_cap: 200_000,
            boost_runs: None,
            freq_cap: None,
            bin_gate: 0.05,
            seed: 0,
        }
    }
}

impl RecoveryConfig {
    pub fn new(t_len: f64, f_max: f64, k: usize) -> Self {
        Self {
            t_len,
            f_max,
            k,
            ..Self::default()
        }
    }

    /// Fills in every derived value and checks ranges.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let c = self;
        if !(c.t_len > 0.0 && c.f_max > 0.0) || c.k == 0 {
            return config_err(format!(
                "need T > 0, F > 0, k >= 1 (T={}, F={}, k={})",
                c.t_len, c.f_max, c.k
            ));
        }
        if !(c.delta > 0.0 && c.delta < 1.0) || !(c.alpha > 0.0 && c.alpha < 1.0) {
            return config_err("delta and alpha must lie in (0, 1)");
        }
        if [c.r_est, c.r_repeats, c.r_loc, c.degree_cap, c.m_cap].contains(&0) {
            return config_err("all repeat counts must be at least 1");
        }
        if !(c.vote_spacing > 0.0 && c.vote_spacing <= 1.0) || !(c.c_vote > 0.0 && c.c_vote < 1.0) || !(c.c_beta > 0.0)
        {
            return config_err("vote_spacing in (0, 1], c_vote in (0, 1), c_beta > 0 required");
        }
        if !(c.c_m > 0.0) || !(c.bin_gate >= 0.0 && c.bin_gate < 1.0) {
            return config_err("c_m > 0 and bin_gate in [0, 1) required");
        }
        let kf = c.k as f64;
        let cluster_width = c.cluster_width.unwrap_or(c.c_delta * kf * kf / c.t_len);
        if !(cluster_width > 0.0) {
            return config_err(format!("Delta must be positive, got {cluster_width}"));
        }
        let bins = c.bins.unwrap_or_else(|| (4 * c.k).max(4).next_power_of_two());
        if bins < 2 || !bins.is_power_of_two() {
            return config_err(format!("B must be a power of two >= 2, got {bins}"));
        }
        let t_regions = c.t_regions.unwrap_or_else(|| default_regions(c.f_max * c.t_len).max(8));
        let d_max = c
            .d_max
            .unwrap_or_else(|| default_rounds(t_regions, c.f_max / cluster_width));
        let runs = 2 * c.k + 5;
        let resolved = ResolvedConfig {
            t_len: c.t_len,
            f_max: c.f_max,
            k: c.k,
            delta: c.delta,
            cluster_width,
            bins,
            alpha: c.alpha,
            h: c.h,
            g: GKnobs { k: c.k, ..c.g },
            r_est: c.r_est,
            r_repeats: c.r_repeats,
            r_loc: c.r_loc,
            t_regions,
            d_max,
            vote_spacing: c.vote_spacing,
            c_vote: c.c_vote,
            c_beta: c.c_beta,
            stages: c.stages.unwrap_or(runs),
            degree: c.degree,
            degree_cap: c.degree_cap,
            c_m: c.c_m,
            m_cap: c.m_cap,
            boost_runs: c.boost_runs.unwrap_or(runs),
            freq_cap: c.freq_cap.unwrap_or(4 * c.k),
            bin_gate: c.bin_gate,
            seed: c.seed,
        };
        if [
            resolved.t_regions,
            resolved.d_max,
            resolved.stages,
            resolved.boost_runs,
            resolved.freq_cap,
        ]
        .contains(&0)
        {
            return config_err("all repeat counts must be at least 1");
        }
        Ok(resolved)
    }
}

/// [`RecoveryConfig`] with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolvedConfig {
    #[serde(rename = "T")]
    pub t_len: f64,
    #[serde(rename = "F")]
    pub f_max: f64,
    pub k: usize,
    pub delta: f64,
    #[serde(rename = "Delta")]
    pub cluster_width: f64,
    pub bins: usize,
    pub alpha: f64,
    pub h: HKnobs,
    pub g: GKnobs,
    pub r_est: usize,
    pub r_repeats: usize,
    pub r_loc: usize,
    pub t_regions: usize,
    pub d_max: usize,
    pub vote_spacing: f64,
    pub c_vote: f64,
    pub c_beta: f64,
    pub stages: usize,
    /// Fixed later from the built window when `None`.
    pub degree: Option<usize>,
    pub degree_cap: usize,
    pub c_m: f64,
    pub m_cap: usize,
    pub boost_runs: usize,
    pub freq_cap: usize,
    pub bin_gate: f64,
    pub seed: u64,
}

impl ResolvedConfig {
    /// `beta_max = min(c_beta T / (T Delta)^1.5, T / 2)`.
    pub fn beta_max(&self) -> f64 {
        let td = self.t_len * self.cluster_width;
        (self.c_beta * self.t_len / td.powf(1.5)).min(self.t_len / 2.0)
    }

    /// Envelope degree for a window of spectral width `delta_h`.
    pub fn envelope_degree(&self, delta_h: f64) -> usize {
        self.degree.unwrap_or_else(|| {
            let t = self.t_len;
            let k = self.k as f64;
            let d = (t * delta_h + t * self.cluster_width).powf(1.5) + k.powi(3) * k.ln() + k * (1.0 / self.delta).ln();
            (d.ceil() as usize).min(self.degree_cap)
        })
    }

    /// Regression sample count for `unknowns` coefficients, at least `4 unknowns`.
    pub fn regression_samples(&self, unknowns: usize) -> usize {
        let n = unknowns.max(2) as f64;
        let m = (self.c_m * n * n * n.ln()).ceil() as usize;
        m.min(self.m_cap).max(4 * unknowns)
    }
}
