//! Polynomial learning suites.

use num_complex::Complex64;
use rand::Rng;
use sparse_tone::bench::{poly_trial, quantile, random_poly};
use sparse_tone::noise::{with_noise, NoiseSpec};
use sparse_tone::poly::{
    generate_intervals, robust_poly_learn, robust_poly_learn_boosted, Basis, PolyLearnOptions, Polynomial,
};
use sparse_tone::signal::SignalSource;

use super::{rng, Check};

/// Per-degree summary of a learning sweep.
pub struct PolySweep {
    pub d: usize,
    pub max_samples: u64,
    pub q95: f64,
    pub noiseless: f64,
}

/// 100 seeds per degree at 10 dB: samples `<= 25 d + 10`, 95th percentile
/// error ratio `<= 10`, noiseless relative error `<= 1e-8`.
pub fn learning_suite(degrees: &[usize]) -> Result<Vec<PolySweep>, String> {
    let mut out = Vec::new();
    for &d in degrees {
        let mut errs = Vec::with_capacity(100);
        let mut max_samples = 0;
        for seed in 0..100 {
            let row = poly_trial(d, 1.0, Some(10.0), seed).map_err(|e| e.to_string())?;
            errs.push(row.err_ratio);
            max_samples = max_samples.max(row.n_samples);
        }
        let noiseless = (0..10)
            .map(|seed| poly_trial(d, 1.0, None, seed).map(|r| r.err_ratio))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .fold(0.0, f64::max);
        let q95 = quantile(&errs, 0.95);
        let sweep = PolySweep {
            d,
            max_samples,
            q95,
            noiseless,
        };
        if max_samples > 25 * d as u64 + 10 {
            return Err(format!("d={d}: {max_samples} samples > {}", 25 * d + 10));
        }
        if q95 > 10.0 {
            return Err(format!("d={d}: 95th percentile error ratio {q95}"));
        }
        if noiseless > 1e-8 {
            return Err(format!("d={d}: noiseless relative error {noiseless}"));
        }
        out.push(sweep);
    }
    Ok(out)
}

/// Interior widths `|I_j| <= sqrt(2) sqrt(1 - x^2) / m` on `I_j`, edge caps
/// `<= 9/m^2`, `n <= 20 m + 2` and exact tiling, for every `d <= 100`.
pub fn partition_suite(eps: f64) -> Check {
    for d in 0..=100 {
        let p = generate_intervals::<f64>(d, eps).map_err(|e| e.to_string())?;
        let mf = p.m as f64;
        let n = p.len();
        if n > 20 * p.m + 2 {
            return Err(format!("d={d}: {n} intervals > 20m + 2 = {}", 20 * p.m + 2));
        }
        if p.intervals[0].0 != -1.0 || p.intervals[n - 1].1 != 1.0 {
            return Err(format!("d={d}: partition does not reach both ends"));
        }
        for w in p.intervals.windows(2) {
            if w[0].1 != w[1].0 {
                return Err(format!("d={d}: gap or overlap at {}", w[0].1));
            }
        }
        let total: f64 = p.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(format!("d={d}: weights sum to {total}"));
        }
        for (j, &(a, b)) in p.intervals.iter().enumerate() {
            let width = b - a;
            let bound = if j == 0 || j == n - 1 {
                9.0 / (mf * mf)
            } else {
                let x = a.abs().max(b.abs());
                2f64.sqrt() * (1.0 - x * x).sqrt() / mf
            };
            if width > bound * (1.0 + 1e-12) {
                return Err(format!("d={d}: interval {j} [{a}, {b}] wider than {bound}"));
            }
        }
    }
    Ok(())
}

/// Weighted empirical norm at one random point per interval (`eps = 1/20`)
/// within `[0.9, 1.1]` of the true norm, for 100 random polynomials of degree `<= 30`.
pub fn norm_preservation_suite() -> Check {
    let mut r = rng(31);
    for i in 0..100 {
        let d = r.random_range(0..=30);
        let p = random_poly(d, 1.0, &mut r);
        let part = generate_intervals::<f64>(d, 1.0 / 20.0).map_err(|e| e.to_string())?;
        let emp: f64 = part
            .intervals
            .iter()
            .zip(&part.weights)
            .map(|(&(a, b), &w)| {
                let u = a + (b - a) * r.random::<f64>();
                w * p.eval((u + 1.0) / 2.0).norm_sqr()
            })
            .sum();
        let ratio = (emp / p.mean_square()).sqrt();
        if !(0.9..=1.1).contains(&ratio) {
            return Err(format!("polynomial {i} (d={d}): weighted/true norm {ratio}"));
        }
    }
    Ok(())
}

/// Outcome of the boosting experiment.
pub struct BoostingSummary {
    pub trials: u64,
    pub single_failures: u64,
    pub boosted_failures: u64,
    pub single_samples: usize,
    pub boosted_samples: usize,
    pub runs: usize,
}

/// Error ratio above which a run counts as failed.
pub const FAILURE_RATIO: f64 = 0.5;

/// Degree-10 polynomials under one narrow unit-energy spike that a single run
/// hits with probability a few percent; single vs boosted at `p = 2^-10`.
pub fn boosting_experiment(trials: u64) -> Result<BoostingSummary, String> {
    let d = 10;
    let p = 2f64.powi(-10);
    let opts = PolyLearnOptions::default();
    let mut s = BoostingSummary {
        trials,
        single_failures: 0,
        boosted_failures: 0,
        single_samples: 0,
        boosted_samples: 0,
        runs: sparse_tone::poly::boost_runs(p).map_err(|e| e.to_string())?,
    };
    for seed in 0..trials {
        let mut r = rng(seed);
        let truth = random_poly(d, 1.0, &mut r);
        let level = truth.mean_square().sqrt();
        let clean = truth.clone();
        let x = with_noise(
            &SignalSource::new("poly", move |t| clean.eval(t)),
            &NoiseSpec::sparse(level, 1, 2e-4),
            1.0,
            &mut r,
        );
        let err = |q: &Polynomial<f64>| q.add(&truth.scale(Complex64::new(-1.0, 0.0))).mean_square().sqrt() / level;
        let single = robust_poly_learn(&x, d, 1.0, &opts, &mut r).map_err(|e| e.to_string())?;
        let boosted = robust_poly_learn_boosted(&x, d, 1.0, p, &opts, &mut r).map_err(|e| e.to_string())?;
        s.single_failures += u64::from(err(&single.poly) > FAILURE_RATIO);
        s.boosted_failures += u64::from(err(&boosted.poly) > FAILURE_RATIO);
        s.single_samples = single.n_samples;
        s.boosted_samples = boosted.n_samples;
    }
    Ok(s)
}

/// Single-run failures `>= 2%`, no boosted failures, and boosted samples
/// within `1.5x` of `R` times the single-run count.
pub fn boosting_suite(trials: u64) -> Result<BoostingSummary, String> {
    let s = boosting_experiment(trials)?;
    let single_rate = s.single_failures as f64 / trials as f64;
    if single_rate < 0.02 {
        return Err(format!(
            "single-run failure rate {single_rate} is below 2%; the setting is too easy"
        ));
    }
    if s.boosted_failures != 0 {
        return Err(format!("{} boosted failures in {trials}", s.boosted_failures));
    }
    let ratio = s.boosted_samples as f64 / (s.runs * s.single_samples) as f64;
    if !(1.0 / 1.5..=1.5).contains(&ratio) {
        return Err(format!(
            "boosted samples {} vs R * single {}",
            s.boosted_samples,
            s.runs * s.single_samples
        ));
    }
    Ok(s)
}

/// A Legendre polynomial on `[-1, 1]` with the given coefficients.
pub fn reference_poly(coeffs: Vec<Complex64>) -> Polynomial<f64> {
    Polynomial::new(coeffs, Basis::Legendre, (-1.0, 1.0))
}
