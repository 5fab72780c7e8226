//! One-cluster suites.

use rand::Rng;
use sparse_tone::bench::{one_cluster_fixture, one_cluster_trial};
use sparse_tone::filters::{build_filter_h, FilterH, HKnobs};
use sparse_tone::noise::{with_noise, NoiseSpec};
use sparse_tone::one_cluster::{frequency_recovery_1cluster, OneClusterParams};
use sparse_tone::quadrature::QuadratureSpec;
use sparse_tone::signal::{FourierSparseSignal, SignalSource};
use sparse_tone::spectrum::{band_energy, dense_spectrum_oracle};
use sparse_tone::Real;

use super::{rng, Check};

pub const ONE_T: f64 = 1.0;
pub const ONE_F: f64 = 1000.0;
pub const ONE_DELTA: f64 = 2.0;
/// Location tolerance in units of `Delta sqrt(Delta T)`.
pub const C_LOC: f64 = 8.0;

pub fn one_h() -> FilterH<f64> {
    build_filter_h(1, 0.01, ONE_T, &HKnobs::default()).unwrap()
}

/// Location error over `Delta sqrt(Delta T)` for the fixture of `seed` at
/// `snr_db` with `runs` median runs; `inf` when location fails.
pub fn location_ratio(snr_db: f64, runs: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let (sig, f0) = one_cluster_fixture(ONE_T, ONE_F, &mut r).unwrap();
    let level = NoiseSpec::<f64>::level_for_snr(sig.norm_t_closed(ONE_T), snr_db);
    let x = with_noise(
        &SignalSource::from_signal(&sig),
        &NoiseSpec::white(level),
        ONE_T,
        &mut r,
    );
    let mut p = OneClusterParams::new(ONE_T, ONE_F, ONE_DELTA).unwrap();
    p.runs = runs;
    match frequency_recovery_1cluster(&one_h().apply(&x), &p, &mut r) {
        Ok(f) => (f - f0).abs() / p.accuracy_scale(),
        Err(_) => f64::INFINITY,
    }
}

/// Fraction of `seeds` with location error within `C_LOC`.
pub fn location_success(snr_db: f64, runs: usize, seeds: u64) -> f64 {
    (0..seeds).filter(|&s| location_ratio(snr_db, runs, s) <= C_LOC).count() as f64 / seeds as f64
}

/// Fraction of 50 seeds of the gapless-pair trial at 20 dB with `err_T <= 10 ||g||_T`.
pub fn signal_recovery_success(seeds: u64) -> Result<f64, String> {
    let mut ok = 0;
    for seed in 0..seeds {
        let t = one_cluster_trial(ONE_T, ONE_F, Some(20.0), seed).map_err(|e| e.to_string())?;
        ok += usize::from(t.row.err_ratio <= 10.0);
    }
    Ok(ok as f64 / seeds as f64)
}

/// `(1 - in-band spectral fraction, 1 - in-interval time fraction)` of `z = x H`
/// around `f0` with half-width `Delta_h + Delta'`. The signal is demodulated
/// to `f0 = 0` first, which moves the spectrum rigidly and keeps `|z|` unchanged.
pub fn premise_defects(
    sig: &FourierSparseSignal<f64>,
    f0: f64,
    delta_prime: f64,
    h: &FilterH<f64>,
) -> Result<(f64, f64), String> {
    let base = sig.shifted(-f0);
    let half = h.delta_h / 2.0 + delta_prime;
    let reach = 3.0 * half;
    let grid: Vec<f64> = (0..=600).map(|i| -reach + 2.0 * reach * i as f64 / 600.0).collect();
    let quad = QuadratureSpec::with_points(((40.0 * reach * h.t_len) as usize).max(8001) | 1);
    let table = dense_spectrum_oracle(&SignalSource::from_signal(&base), Some(h), h.t_len, &grid, &quad)
        .map_err(|e| e.to_string())?;
    let spectral = 1.0 - band_energy(&table, -half, half) / band_energy(&table, -reach, reach);
    let z = |t: f64| base.eval(t).norm_sqr() * h.eval_fast(t).powi(2);
    let spec = QuadratureSpec::with_points(8001);
    let inside = sparse_tone::quadrature::simpson(&spec, 0.0, h.t_len, z);
    let outside = sparse_tone::quadrature::simpson(&spec, -0.45 * h.t_len, 0.0, z)
        + sparse_tone::quadrature::simpson(&spec, h.t_len, 1.45 * h.t_len, z);
    Ok((spectral, outside / (inside + outside)))
}

/// Both one-cluster properties hold with `eps <= 0.1` for the first `seeds` acceptance fixtures.
pub fn premise_suite(seeds: u64) -> Check {
    let h = one_h();
    for seed in 0..seeds {
        let (sig, f0) = one_cluster_fixture(ONE_T, ONE_F, &mut rng(seed)).map_err(|e| e.to_string())?;
        let (spectral, temporal) = premise_defects(&sig, f0, 0.5 / ONE_T, &h)?;
        if spectral > 0.1 || temporal > 0.1 {
            return Err(format!(
                "fixture {seed}: spectral defect {spectral}, temporal defect {temporal}"
            ));
        }
    }
    Ok(())
}

/// Largest `|z(a) e^{2 pi i f0 beta} - z(a + beta)| / ||z||_T` over a 1000-point
/// grid of `a` and `beta in [bhat, 2 bhat]`, `bhat = c_beta / (Delta sqrt(Delta T))`.
pub fn phase_residual(sig: &FourierSparseSignal<f64>, f0: f64, delta: f64, t_len: f64, c_beta: f64) -> f64 {
    let bhat = c_beta / (delta * (delta * t_len).sqrt());
    let norm = sig.norm_t_closed(t_len);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let a = t_len * i as f64 / 999.0;
        for beta in [bhat, 1.5 * bhat, 2.0 * bhat] {
            let r = (sig.eval(a) * (f0 * beta).cis2pi() - sig.eval(a + beta)).norm();
            worst = worst.max(r / norm);
        }
    }
    worst
}

/// Random cluster of `k` unit-modulus tones in `[f0 - Delta, f0 + Delta]` spaced at least `1/T`.
pub fn band_limited_cluster(k: usize, f0: f64, delta: f64, r: &mut impl Rng) -> FourierSparseSignal<f64> {
    let step = 2.0 * delta / k as f64;
    let tones = (0..k)
        .map(|i| {
            let f = f0 - delta + step * (i as f64 + 0.5);
            sparse_tone::signal::Tone::new(f, r.random::<f64>().cis2pi())
        })
        .collect();
    FourierSparseSignal::new(tones).unwrap()
}
