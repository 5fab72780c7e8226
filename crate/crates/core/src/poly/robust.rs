//! Robust polynomial learning from noisy samples, with median boosting.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::partition::{generate_intervals, IntervalPartition};
use super::polynomial::{legendre_values, Basis, Polynomial};
use super::regression::{weighted_least_squares, WeightedSample};
use crate::error::{config_err, Result};
use crate::real::Real;
use crate::signal::SignalSource;

/// Density knob shared by the learning routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolyLearnOptions {
    /// Partition parameter passed to [`generate_intervals`]; `m = ceil(10 d / eps)`.
    pub eps: f64,
}

impl PolyLearnOptions {
    /// The classical dense setting `eps = 1/20`.
    pub fn dense() -> Self {
        Self { eps: 1.0 / 20.0 }
    }
}

impl Default for PolyLearnOptions {
    fn default() -> Self {
        Self { eps: 1.6 }
    }
}

/// Output of a single learning run.
#[derive(Debug, Clone)]
pub struct PolyFit<S> {
    pub poly: Polynomial<S>,
    pub n_samples: usize,
    /// Weighted RMS of the fit residual at the sample points.
    pub residual: S,
}

/// Output of a boosted run.
#[derive(Debug, Clone)]
pub struct BoostedPolyFit<S> {
    pub poly: Polynomial<S>,
    pub runs: Vec<Polynomial<S>>,
    pub n_samples: usize,
    /// Median of the per-run residuals.
    pub residual: S,
}

/// Number of boosting runs for failure probability `p`: `ceil(4 log2(1/p))`.
pub fn boost_runs(p: f64) -> Result<usize> {
    if !(p > 0.0 && p < 1.0) {
        return config_err(format!("failure probability must lie in (0, 1), got {p}"));
    }
    Ok((4.0 * (1.0 / p).log2()).ceil().max(1.0) as usize)
}

fn legendre_row<S: Real>(u: S, row: &mut [Complex<S>]) {
    let n = row.len();
    let mut vals = vec![S::zero(); n];
    legendre_values(n, u, &mut vals);
    for (r, v) in row.iter_mut().zip(vals) {
        *r = Complex::new(v, S::zero());
    }
}

fn map_to_domain<S: Real>(u: S, (lo, hi): (S, S)) -> S {
    lo + (u + S::one()) * (hi - lo) * S::lit(0.5)
}

/// Fits a degree-`d` Legendre polynomial on `domain` to weighted samples in reference coordinates.
fn fit_reference<S: Real>(d: usize, domain: (S, S), samples: &[WeightedSample<S>]) -> Result<Polynomial<S>> {
    let coeffs = weighted_least_squares(legendre_row, d + 1, samples)?;
    Ok(Polynomial::new(coeffs, Basis::Legendre, domain))
}

fn weighted_residual<S: Real>(poly: &Polynomial<S>, domain: (S, S), samples: &[WeightedSample<S>]) -> S {
    let (num, den) = samples.iter().fold((S::zero(), S::zero()), |(n, d), &(u, v, w)| {
        (n + w * (poly.eval(map_to_domain(u, domain)) - v).norm_sqr(), d + w)
    });
    (num / den).sqrt()
}

/// One uniform point per partition interval.
fn draw_points<S: Real, R: Rng + ?Sized>(part: &IntervalPartition<S>, rng: &mut R) -> Vec<S> {
    part.intervals
        .iter()
        .map(|&(a, b)| a + (b - a) * S::lit(rng.random::<f64>()))
        .collect()
}

/// Learns a degree-`d` polynomial from `src` on `[0, t_len]`.
pub fn robust_poly_learn<S: Real, R: Rng + ?Sized>(
    src: &SignalSource<S>,
    d: usize,
    t_len: S,
    opts: &PolyLearnOptions,
    rng: &mut R,
) -> Result<PolyFit<S>> {
    if !(t_len > S::zero()) {
        return config_err("T must be positive");
    }
    robust_poly_learn_on(src, d, (S::zero(), t_len), opts, rng)
}

/// Learns a degree-`d` polynomial from `src` on an arbitrary interval.
pub fn robust_poly_learn_on<S: Real, R: Rng + ?Sized>(
    src: &SignalSource<S>,
    d: usize,
    domain: (S, S),
    opts: &PolyLearnOptions,
    rng: &mut R,
) -> Result<PolyFit<S>> {
    if !(domain.1 > domain.0) {
        return config_err("empty learning interval");
    }
    let part = generate_intervals::<S>(d, opts.eps)?;
    let us = draw_points(&part, rng);
    let samples: Vec<WeightedSample<S>> = us
        .iter()
        .zip(&part.weights)
        .map(|(&u, &w)| (u, src.sample(map_to_domain(u, domain)), w))
        .collect();
    let poly = fit_reference(d, domain, &samples)?;
    let residual = weighted_residual(&poly, domain, &samples);
    Ok(PolyFit {
        poly,
        n_samples: samples.len(),
        residual,
    })
}

/// Median-boosted learning with `ceil(4 log2(1/p))` independent runs.
pub fn robust_poly_learn_boosted<S: Real, R: Rng + ?Sized>(
    src: &SignalSource<S>,
    d: usize,
    t_len: S,
    p: f64,
    opts: &PolyLearnOptions,
    rng: &mut R,
) -> Result<BoostedPolyFit<S>> {
    let runs = boost_runs(p)?;
    let domain = (S::zero(), t_len);
    let seeds: Vec<u64> = (0..runs).map(|_| rng.random()).collect();
    let fits: Vec<PolyFit<S>> = seeds
        .par_iter()
        .map(|&s| robust_poly_learn_on(src, d, domain, opts, &mut ChaCha8Rng::seed_from_u64(s)))
        .collect::<Result<_>>()?;
    let n_samples = fits.iter().map(|f| f.n_samples).sum();
    let residual = median(&mut fits.iter().map(|f| f.residual).collect::<Vec<_>>());
    let polys: Vec<Polynomial<S>> = fits.into_iter().map(|f| f.poly).collect();
    let poly = median_combine(&polys, d, domain, opts, rng)?;
    Ok(BoostedPolyFit {
        poly,
        runs: polys,
        n_samples,
        residual,
    })
}

/// Coordinatewise median of the candidate polynomials at fresh partition
/// points, followed by a weighted fit to the medians. Takes no signal samples.
pub fn median_combine<S: Real, R: Rng + ?Sized>(
    candidates: &[Polynomial<S>],
    d: usize,
    domain: (S, S),
    opts: &PolyLearnOptions,
    rng: &mut R,
) -> Result<Polynomial<S>> {
    if candidates.is_empty() {
        return config_err("median of zero candidates");
    }
    let part = generate_intervals::<S>(d, opts.eps)?;
    let us = draw_points(&part, rng);
    let samples: Vec<WeightedSample<S>> = us
        .iter()
        .zip(&part.weights)
        .map(|(&u, &w)| {
            let t = map_to_domain(u, domain);
            let vals: Vec<Complex<S>> = candidates.iter().map(|p| p.eval(t)).collect();
            (u, complex_median(&vals), w)
        })
        .collect();
    fit_reference(d, domain, &samples)
}

/// Median of real parts and of imaginary parts, separately.
pub fn complex_median<S: Real>(vals: &[Complex<S>]) -> Complex<S> {
    let mut re: Vec<S> = vals.iter().map(|v| v.re).collect();
    let mut im: Vec<S> = vals.iter().map(|v| v.im).collect();
    Complex::new(median(&mut re), median(&mut im))
}

/// Median of a non-empty slice (mean of the two middle values for even length).
pub fn median<S: Real>(v: &mut [S]) -> S {
    assert!(!v.is_empty(), "median of empty slice");
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) * S::lit(0.5)
    }
}
