//! k-cluster fixtures and the end-to-end sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sparse_tone::bench::{k_cluster_trial, quantile};
use sparse_tone::k_cluster::{frequency_recovery_k_cluster, KClusterSetup};
use sparse_tone::noise::{with_noise, NoiseSpec};
use sparse_tone::signal::{FourierSparseSignal, SignalSource, Tone};
use sparse_tone::Real;

use super::clusters::C_LOC;
use super::{k_setup, rng};

/// Coverage radius `C_loc Delta sqrt(Delta T)` of a setup.
pub fn coverage_radius(setup: &KClusterSetup<f64>) -> f64 {
    let d = setup.cfg.cluster_width;
    C_LOC * d * (d * setup.cfg.t_len).sqrt()
}

/// `k` unit tones in `[-0.9 F, 0.9 F]`, pairwise at least `gap` apart.
pub fn separated_signal(k: usize, f_max: f64, gap: f64, r: &mut ChaCha8Rng) -> FourierSparseSignal<f64> {
    let mut freqs: Vec<f64> = Vec::new();
    while freqs.len() < k {
        let f = r.random_range(-0.9 * f_max..=0.9 * f_max);
        if freqs.iter().all(|g| (f - g).abs() >= gap) {
            freqs.push(f);
        }
    }
    FourierSparseSignal::new(
        freqs
            .into_iter()
            .map(|f| Tone::new(f, r.random::<f64>().cis2pi()))
            .collect(),
    )
    .unwrap()
}

/// Adds white noise at `rel` times the signal norm on `[0, 1]`.
pub fn noisy(sig: &FourierSparseSignal<f64>, rel: f64, r: &mut ChaCha8Rng) -> (SignalSource<f64>, f64) {
    let level = rel * sig.norm_t_closed(1.0);
    (
        with_noise(&SignalSource::from_signal(sig), &NoiseSpec::white(level), 1.0, r),
        level,
    )
}

/// Fraction of `seeds` runs in which every tone of a separated `k`-tone
/// fixture with 10% noise lies within the coverage radius of the list.
pub fn coverage_rate(k: usize, f_max: f64, seeds: u64) -> Result<f64, String> {
    let setup = k_setup(k, f_max);
    let radius = coverage_radius(&setup);
    let mut hits = 0;
    for seed in 0..seeds {
        let mut r = rng(700 + seed);
        let sig = separated_signal(k, f_max, 10.0, &mut r);
        let (x, _) = noisy(&sig, 0.1, &mut r);
        let list = frequency_recovery_k_cluster(&setup, &x, &mut r).map_err(|e| e.to_string())?;
        if sig
            .freqs()
            .iter()
            .all(|&f| list.distance_to(f).is_some_and(|d| d <= radius))
        {
            hits += 1;
        }
    }
    Ok(hits as f64 / seeds as f64)
}

/// Success fraction of `k_cluster_trial` at `F = 1000`, 20 dB, error ratio at most 10.
pub fn end_to_end_rate(k: usize, seeds: u64) -> Result<f64, String> {
    let mut ok = 0;
    for seed in 0..seeds {
        let row = k_cluster_trial(k, 1.0, 1000.0, Some(20.0), seed).map_err(|e| e.to_string())?;
        if row.err_ratio <= 10.0 {
            ok += 1;
        }
    }
    Ok(ok as f64 / seeds as f64)
}

/// Relative error of the noiseless `k = 1` path over `seeds` tones.
pub fn noiseless_single_tone(seeds: u64) -> Result<f64, String> {
    let errs: Vec<f64> = (0..seeds)
        .map(|seed| k_cluster_trial(1, 1.0, 1000.0, None, 900 + seed).map(|r| r.err_ratio))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok(quantile(&errs, 1.0))
}

/// Median sample count at `k = 2` for each `F T` in `fts` over `seeds` runs.
pub fn sample_counts(fts: &[f64], seeds: u64) -> Result<Vec<f64>, String> {
    fts.iter()
        .map(|&ft| {
            let counts: Vec<f64> = (0..seeds)
                .map(|s| k_cluster_trial(2, 1.0, ft, Some(20.0), s).map(|r| r.n_samples as f64))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            Ok(quantile(&counts, 0.5))
        })
        .collect()
}

/// Per-bin noise energy of windowed white noise averaged over hash draws,
/// as a multiple of `1/B` of the mean total energy.
pub fn noise_spread(k: usize, draws: usize) -> Result<f64, String> {
    let setup = k_setup(k, 1000.0);
    let mut r = rng(811);
    let g = with_noise(&SignalSource::zero(), &NoiseSpec::white(1.0), 1.0, &mut r);
    let z = setup.h.apply(&g);
    let bins = setup.cfg.bins;
    let mut per_bin = vec![0.0; bins];
    for _ in 0..draws {
        let hash = setup.draw_hash(&mut r).map_err(|e| e.to_string())?;
        let u = sparse_tone::hashing::hash_to_bins(&z, &setup.g, &hash.at_time(r.random::<f64>()))
            .map_err(|e| e.to_string())?;
        for (acc, v) in per_bin.iter_mut().zip(&u) {
            *acc += v.norm_sqr() / draws as f64;
        }
    }
    let total: f64 = per_bin.iter().sum();
    Ok(per_bin.iter().fold(0.0, |m: f64, &e| m.max(e)) * bins as f64 / total)
}

/// Random unit coefficient vector of length `n`.
pub fn random_coeffs(n: usize, r: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
        .collect()
}
