//! Fixtures and per-trial runners for the benchmark suites.
//!
//! Every trial derives all randomness from its seed, so a row can be
//! reproduced in isolation.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RecoveryConfig;
use crate::error::{Error, Result};
use crate::filters::{build_filter_h, HKnobs};
use crate::generate::{gen_signal, ClusterSpec, SignalGenSpec};
use crate::k_cluster::cft_k_cluster;
use crate::noise::{with_noise, NoiseSpec};
use crate::one_cluster::{cft_1cluster, OneClusterParams};
use crate::poly::{robust_poly_learn, Basis, PolyLearnOptions, Polynomial};
use crate::quadrature::QuadratureSpec;
use crate::real::Real;
use crate::signal::{FourierSparseSignal, SignalSource, Tone};

/// Largest `F T` for which trials compute `err_T` by quadrature.
pub const ERR_FT_LIMIT: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Poly,
    One,
    K,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub seed: u64,
    pub k: usize,
    #[serde(rename = "SNR")]
    pub snr_db: f64,
    /// `||estimate - truth||_T / ||g||_T`, or relative to the truth when noiseless.
    /// `inf` when recovery failed, `NaN` when not computed.
    pub err_ratio: f64,
    pub n_samples: u64,
    pub time_ms: f64,
}

/// Suite parameters; fields a suite does not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchParams {
    pub degree: usize,
    pub k: usize,
    #[serde(rename = "T")]
    pub t_len: f64,
    #[serde(rename = "F")]
    pub f_max: f64,
    /// Signal-to-noise ratio in dB; `None` means noiseless.
    pub snr_db: Option<f64>,
}

impl Default for BenchParams {
    fn default() -> Self {
        Self {
            degree: 10,
            k: 2,
            t_len: 1.0,
            f_max: 1000.0,
            snr_db: Some(10.0),
        }
    }
}

/// Quadrature resolving tones up to `F` on `[0, T]`.
pub fn quadrature_for(f_max: f64, t_len: f64) -> QuadratureSpec {
    QuadratureSpec::with_points((40.0 * f_max * t_len) as usize + 1001)
}

fn noise_level(norm: f64, snr_db: Option<f64>) -> f64 {
    snr_db.map_or(0.0, |db| NoiseSpec::level_for_snr(norm, db))
}

fn ratio(err: f64, level: f64, truth_norm: f64) -> f64 {
    if level > 0.0 {
        err / level
    } else {
        err / truth_norm
    }
}

/// Random degree-`d` polynomial on `[0, T]` with standard complex Gaussian
/// Legendre coefficients scaled to unit mean square per degree.
pub fn random_poly<R: Rng + ?Sized>(d: usize, t_len: f64, rng: &mut R) -> Polynomial<f64> {
    let coeffs = (0..=d)
        .map(|j| {
            let s = ((2 * j + 1) as f64).sqrt();
            let (u1, u2): (f64, f64) = (rng.random::<f64>().max(1e-300), rng.random());
            let r = (-u1.ln()).sqrt();
            Complex64::from_polar(r * s, std::f64::consts::TAU * u2)
        })
        .collect();
    Polynomial::new(coeffs, Basis::Legendre, (0.0, t_len))
}

/// Two unit tones at `f0 +- 1/(2T)` around a random `f0` in `[-0.8 F, 0.8 F]`.
pub fn one_cluster_fixture<R: Rng + ?Sized>(
    t_len: f64,
    f_max: f64,
    rng: &mut R,
) -> Result<(FourierSparseSignal<f64>, f64)> {
    let f0 = rng.random_range(-0.8 * f_max..=0.8 * f_max);
    let half = 0.5 / t_len;
    let tones = [-half, half]
        .iter()
        .map(|&df| Tone::new(f0 + df, rng.random::<f64>().cis2pi()))
        .collect();
    Ok((FourierSparseSignal::new(tones)?, f0))
}

/// `k` unit tones: a gapless pair `0.1/T` wide at `-0.3 F` and the remaining
/// tones spread over `(0, 0.7 F]`.
pub fn k_cluster_fixture<R: Rng + ?Sized>(
    k: usize,
    t_len: f64,
    f_max: f64,
    rng: &mut R,
) -> Result<FourierSparseSignal<f64>> {
    let mut clusters = vec![ClusterSpec {
        center: -0.3 * f_max,
        width: 0.1 / t_len,
        count: k.min(2),
    }];
    for i in 2..k {
        clusters.push(ClusterSpec {
            center: f_max * (0.8 * i as f64 / k as f64 - 0.1),
            width: 0.0,
            count: 1,
        });
    }
    gen_signal(&SignalGenSpec::new(k, f_max).with_clusters(clusters), rng)
}

/// Single robust polynomial learning run against a random degree-`d` truth.
pub fn poly_trial(d: usize, t_len: f64, snr_db: Option<f64>, seed: u64) -> Result<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth = random_poly(d, t_len, &mut rng);
    let norm = truth.mean_square().sqrt();
    let level = noise_level(norm, snr_db);
    let p = truth.clone();
    let clean = SignalSource::new("poly", move |t| p.eval(t));
    let x = with_noise(&clean, &NoiseSpec::white(level), t_len, &mut rng);
    let clock = Instant::now();
    let fit = robust_poly_learn(&x, d, t_len, &PolyLearnOptions::default(), &mut rng)?;
    let time_ms = clock.elapsed().as_secs_f64() * 1e3;
    let err = fit
        .poly
        .add(&truth.scale(Complex64::new(-1.0, 0.0)))
        .mean_square()
        .sqrt();
    Ok(BenchRow {
        seed,
        k: 0,
        snr_db: snr_db.unwrap_or(f64::INFINITY),
        err_ratio: ratio(err, level, norm),
        n_samples: fit.n_samples as u64,
        time_ms,
    })
}

/// Outcome of a one-cluster trial, with the location error alongside the row.
#[derive(Debug, Clone)]
pub struct OneClusterTrial {
    pub row: BenchRow,
    /// `|f - f0| / (Delta sqrt(Delta T))`; `inf` when location failed.
    pub loc_ratio: f64,
}

/// One-cluster recovery on [`one_cluster_fixture`] with `Delta = 2/T`.
pub fn one_cluster_trial(t_len: f64, f_max: f64, snr_db: Option<f64>, seed: u64) -> Result<OneClusterTrial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sig, f0) = one_cluster_fixture(t_len, f_max, &mut rng)?;
    let norm = sig.norm_t_closed(t_len);
    let level = noise_level(norm, snr_db);
    let x = with_noise(
        &SignalSource::from_signal(&sig),
        &NoiseSpec::white(level),
        t_len,
        &mut rng,
    );
    let p = OneClusterParams::new(t_len, f_max, 2.0 / t_len)?;
    let h = build_filter_h(1, 0.01, t_len, &HKnobs::default())?;
    let clock = Instant::now();
    let out = cft_1cluster(&x, &h, &p, &mut rng);
    let time_ms = clock.elapsed().as_secs_f64() * 1e3;
    let snr = snr_db.unwrap_or(f64::INFINITY);
    match out {
        Ok(fit) => {
            let err = fit.model.distance_t(|t| sig.eval(t), &quadrature_for(f_max, t_len))?;
            Ok(OneClusterTrial {
                row: BenchRow {
                    seed,
                    k: 1,
                    snr_db: snr,
                    err_ratio: ratio(err, level, norm),
                    n_samples: fit.n_samples,
                    time_ms,
                },
                loc_ratio: (fit.freq - f0).abs() / p.accuracy_scale(),
            })
        }
        Err(e) if e.is_recovery_failure() => Ok(OneClusterTrial {
            row: BenchRow {
                seed,
                k: 1,
                snr_db: snr,
                err_ratio: f64::INFINITY,
                n_samples: x.samples_taken(),
                time_ms,
            },
            loc_ratio: f64::INFINITY,
        }),
        Err(e) => Err(e),
    }
}

/// Full k-cluster recovery on [`k_cluster_fixture`] with default knobs.
/// `err_ratio` is `NaN` when `F T` exceeds [`ERR_FT_LIMIT`].
pub fn k_cluster_trial(k: usize, t_len: f64, f_max: f64, snr_db: Option<f64>, seed: u64) -> Result<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = k_cluster_fixture(k, t_len, f_max, &mut rng)?;
    let norm = sig.norm_t_closed(t_len);
    let level = noise_level(norm, snr_db);
    let x = with_noise(
        &SignalSource::from_signal(&sig),
        &NoiseSpec::white(level),
        t_len,
        &mut rng,
    );
    let mut cfg = RecoveryConfig::new(t_len, f_max, k);
    cfg.seed = seed;
    let clock = Instant::now();
    let out = cft_k_cluster(&x, &cfg, &mut rng);
    let time_ms = clock.elapsed().as_secs_f64() * 1e3;
    let (err_ratio, n_samples) = match out {
        Ok(rep) if f_max * t_len <= ERR_FT_LIMIT => {
            let err = rep.model.distance_t(|t| sig.eval(t), &quadrature_for(f_max, t_len))?;
            (ratio(err, level, norm), rep.n_samples)
        }
        Ok(rep) => (f64::NAN, rep.n_samples),
        Err(e) if e.is_recovery_failure() => (f64::INFINITY, x.samples_taken()),
        Err(e) => return Err(e),
    };
    Ok(BenchRow {
        seed,
        k,
        snr_db: snr_db.unwrap_or(f64::INFINITY),
        err_ratio,
        n_samples,
        time_ms,
    })
}

/// Runs `trials` seeds `base_seed, base_seed + 1, ...` of `suite`.
pub fn run_suite(suite: Suite, params: &BenchParams, trials: usize, base_seed: u64) -> Result<Vec<BenchRow>> {
    if trials == 0 {
        return Err(Error::Config("need at least one trial".into()));
    }
    (0..trials as u64)
        .map(|i| {
            let seed = base_seed + i;
            match suite {
                Suite::Poly => poly_trial(params.degree, params.t_len, params.snr_db, seed),
                Suite::One => one_cluster_trial(params.t_len, params.f_max, params.snr_db, seed).map(|t| t.row),
                Suite::K => k_cluster_trial(params.k, params.t_len, params.f_max, params.snr_db, seed),
            }
        })
        .collect()
}

/// `q`-quantile by the nearest-rank rule; non-finite entries sort last.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    if v.is_empty() {
        return f64::NAN;
    }
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}
