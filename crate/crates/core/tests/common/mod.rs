//! Property suites shared by the per-module tests and the acceptance run.
//! Each returns `Err` with a description of the first violated bound.
#![allow(dead_code)]

pub mod clusters;
pub mod filters;
pub mod hashing;
pub mod kcluster;
pub mod poly;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_tone::bench::{k_cluster_fixture, one_cluster_fixture, quadrature_for};
use sparse_tone::config::RecoveryConfig;
use sparse_tone::filters::{build_filter_h, HKnobs};
use sparse_tone::k_cluster::KClusterSetup;
use sparse_tone::poly::legendre_values;
use sparse_tone::quadrature::QuadratureSpec;
use sparse_tone::signal::{norm_t, FourierSparseSignal, Tone};
use sparse_tone::Real;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `k`-sparse signal with frequencies in `[-F, F]` and complex Gaussian amplitudes.
pub fn random_signal(k: usize, f_max: f64, rng: &mut ChaCha8Rng) -> FourierSparseSignal<f64> {
    let tones = (0..k)
        .map(|_| {
            let f = rng.random_range(-f_max..=f_max);
            let a = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            Tone::new(f, a)
        })
        .collect();
    FourierSparseSignal::new(tones).unwrap()
}

/// Random signal whose tones sit in at most two tight groups, the hard case for growth bounds.
pub fn clustered_signal(k: usize, rng: &mut ChaCha8Rng) -> FourierSparseSignal<f64> {
    let centers = [rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0)];
    let tones = (0..k)
        .map(|i| {
            let f = centers[i % 2] + rng.random_range(-0.3..0.3);
            Tone::new(f, rng.random::<f64>().cis2pi() * (0.2 + rng.random::<f64>()))
        })
        .collect();
    FourierSparseSignal::new(tones).unwrap()
}

fn grid_max(sig: &FourierSparseSignal<f64>, t_len: f64, n: usize) -> f64 {
    (0..n)
        .map(|i| sig.eval(t_len * i as f64 / (n - 1) as f64).norm_sqr())
        .fold(0.0, f64::max)
}

/// Max over `[0, T]` of `|x|^2` against `k^4 (ln k + 2)^3 * 10 * ||x||_T^2` for 200 signals with `k <= 8`.
pub fn growth_bound_suite() -> Check {
    let mut r = rng(51);
    for i in 0..200 {
        let k = 1 + i % 8;
        let sig = if i % 2 == 0 {
            random_signal(k, 50.0, &mut r)
        } else {
            clustered_signal(k, &mut r)
        };
        let norm2 = sig.norm_t_closed(1.0).powi(2);
        let kf = k as f64;
        let bound = kf.powi(4) * (kf.ln() + 2.0).powi(3) * 10.0;
        let ratio = grid_max(&sig, 1.0, 10_000) / norm2;
        if ratio > bound {
            return Err(format!("signal {i} (k={k}): max/avg {ratio} > {bound}"));
        }
    }
    Ok(())
}

/// `|x(2T)|^2 <= k^7 (4k)^{2.5k} ||x||_T^2` for the same population.
pub fn outside_growth_suite() -> Check {
    let mut r = rng(55);
    for i in 0..200 {
        let k = 1 + i % 8;
        let sig = if i % 2 == 0 {
            random_signal(k, 50.0, &mut r)
        } else {
            clustered_signal(k, &mut r)
        };
        let kf = k as f64;
        let bound = kf.powi(7) * (4.0 * kf).powf(2.5 * kf) * sig.norm_t_closed(1.0).powi(2);
        let v = sig.eval(2.0).norm_sqr();
        if v > bound {
            return Err(format!("signal {i} (k={k}): |x(2T)|^2 = {v} > {bound}"));
        }
    }
    Ok(())
}

/// `|z(t)| <= 2 sqrt(Delta T) ||z||_T` for `z = x H` on one-cluster fixtures with `Delta = 2/T`.
pub fn cluster_max_avg_suite() -> Check {
    let t_len = 1.0;
    let delta = 2.0;
    let h = build_filter_h(1, 0.01, t_len, &HKnobs::default()).map_err(|e| e.to_string())?;
    let mut r = rng(74);
    for seed in 0..20 {
        let (sig, _) = one_cluster_fixture(t_len, 100.0, &mut r).map_err(|e| e.to_string())?;
        let z = |t: f64| sig.eval(t) * h.eval_fast(t);
        let norm = norm_t(z, t_len, &quadrature_for(100.0, t_len)).map_err(|e| e.to_string())?;
        let bound = 2.0 * (delta * t_len).sqrt() * norm;
        let max = (0..=4000).map(|i| z(i as f64 / 4000.0).norm()).fold(0.0, f64::max);
        if max > bound {
            return Err(format!("fixture {seed}: max |z| = {max} > {bound}"));
        }
    }
    Ok(())
}

/// Random unit-norm vector in `span{P_j(u) exp(2 pi i f_i t)}` with `l (d + 1) <= 60`.
pub struct MixedSpan {
    pub freqs: Vec<f64>,
    pub d: usize,
    pub coeffs: Vec<Complex64>,
}

impl MixedSpan {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let l = rng.random_range(1..=5usize);
        let d = rng.random_range(0..=(60 / l - 1).min(11));
        let freqs = (0..l).map(|_| rng.random_range(-30.0..30.0)).collect();
        let coeffs = (0..l * (d + 1))
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        Self { freqs, d, coeffs }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let mut leg = vec![0.0; self.d + 1];
        legendre_values(self.d + 1, 2.0 * t - 1.0, &mut leg);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &f) in self.freqs.iter().enumerate() {
            let c = (f * t).cis2pi();
            for (j, &p) in leg.iter().enumerate() {
                acc += self.coeffs[i * (self.d + 1) + j] * c * p;
            }
        }
        acc
    }

    pub fn dim(&self) -> usize {
        self.freqs.len() * (self.d + 1)
    }
}

/// Grid max/mean of `|u|^2` against `(ld)^4 (ln(ld) + 2)^3 * 10` for 100 span vectors.
pub fn mixed_max_avg_suite() -> Check {
    let mut r = rng(94);
    let quad = QuadratureSpec::with_points(4001);
    for i in 0..100 {
        let u = MixedSpan::random(&mut r);
        let ld = (u.freqs.len() * u.d.max(1)) as f64;
        let mean = norm_t(|t| u.eval(t), 1.0, &quad).map_err(|e| e.to_string())?.powi(2);
        let max = (0..=4000)
            .map(|j| u.eval(j as f64 / 4000.0).norm_sqr())
            .fold(0.0, f64::max);
        let bound = ld.powi(4) * (ld.ln() + 2.0).powi(3) * 10.0;
        if max / mean > bound {
            return Err(format!("vector {i}: max/mean {} > {bound}", max / mean));
        }
    }
    Ok(())
}

/// Empirical norm at `m` uniform points within `1 +- 3 eps` (`eps = 0.1`) of `||u||_T`
/// for 100 span vectors, with `m` from the regression sample rule.
pub fn concentration_suite() -> Check {
    let cfg = RecoveryConfig::new(1.0, 100.0, 2)
        .resolve()
        .map_err(|e| e.to_string())?;
    let mut r = rng(95);
    let quad = QuadratureSpec::with_points(4001);
    for i in 0..100 {
        let u = MixedSpan::random(&mut r);
        let m = cfg.regression_samples(u.dim());
        let exact = norm_t(|t| u.eval(t), 1.0, &quad).map_err(|e| e.to_string())?;
        let emp = ((0..m).map(|_| u.eval(r.random::<f64>()).norm_sqr()).sum::<f64>() / m as f64).sqrt();
        let ratio = emp / exact;
        if !(0.7..=1.3).contains(&ratio) {
            return Err(format!(
                "vector {i} (dim {}, m {m}): empirical/true norm {ratio}",
                u.dim()
            ));
        }
    }
    Ok(())
}

/// Setup for k-cluster fixtures at `T = 1`.
pub fn k_setup(k: usize, f_max: f64) -> KClusterSetup<f64> {
    KClusterSetup::new(&RecoveryConfig::new(1.0, f_max, k)).unwrap()
}

pub fn k_fixture(k: usize, f_max: f64, seed: u64) -> FourierSparseSignal<f64> {
    k_cluster_fixture(k, 1.0, f_max, &mut rng(seed)).unwrap()
}
