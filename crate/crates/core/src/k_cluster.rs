//! Full recovery of `k`-sparse signals: hash into bins, locate one carrier
//! per bin, merge the stages and fit envelopes on the mixed basis.

use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{RecoveryConfig, ResolvedConfig};
use crate::error::{config_err, Error, Result};
use crate::filters::{build_filter_g, build_filter_h, FilterG, FilterH};
use crate::hashing::{hash_to_bins, HashConfig};
use crate::linalg::{lstsq, CMatrix, RankPolicy};
use crate::model::{MixedBasisModel, ModelTerm};
use crate::one_cluster::pick_weighted;
use crate::poly::{legendre_values, median, Basis, Polynomial};
use crate::real::Real;
use crate::signal::SignalSource;
use crate::voting::{phase_cycles, winning_region, Round, VoteSchedule};

/// Relative pivot threshold of the mixed-basis regression.
const MIXED_RCOND: f64 = 1e-10;

/// Sorted list of candidate carrier frequencies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrequencyList<S> {
    freqs: Vec<S>,
}

impl<S: Real> FrequencyList<S> {
    /// Sorts `freqs` ascending; non-finite values are dropped.
    pub fn new(mut freqs: Vec<S>) -> Self {
        freqs.retain(|f| f.is_finite());
        freqs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Self { freqs }
    }

    pub fn freqs(&self) -> &[S] {
        &self.freqs
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Distance from `f` to the nearest entry.
    pub fn distance_to(&self, f: S) -> Option<S> {
        self.freqs.iter().map(|&g| (g - f).abs()).reduce(|a, b| a.min(b))
    }

    /// Replaces runs of entries closer than `gap` by their mean.
    pub fn dedup_within(&self, gap: S) -> Self {
        let mut out: Vec<S> = Vec::new();
        let mut run: Vec<S> = Vec::new();
        for &f in &self.freqs {
            if run.last().is_some_and(|&last| f - last >= gap) {
                out.push(mean(&run));
                run.clear();
            }
            run.push(f);
        }
        if !run.is_empty() {
            out.push(mean(&run));
        }
        Self { freqs: out }
    }

    /// Merges the closest neighbours until at most `cap` entries remain.
    pub fn capped(&self, cap: usize) -> Self {
        let mut v = self.freqs.clone();
        while v.len() > cap.max(1) {
            let i = (0..v.len() - 1)
                .min_by(|&a, &b| {
                    (v[a + 1] - v[a])
                        .partial_cmp(&(v[b + 1] - v[b]))
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(0);
            v[i] = (v[i] + v[i + 1]) * S::lit(0.5);
            v.remove(i + 1);
        }
        Self { freqs: v }
    }
}

fn mean<S: Real>(v: &[S]) -> S {
    v.iter().copied().sum::<S>() / S::lit(v.len() as f64)
}

/// Built filters plus the resolved configuration.
#[derive(Debug, Clone)]
pub struct KClusterSetup<S> {
    pub cfg: ResolvedConfig,
    pub h: FilterH<S>,
    pub g: FilterG<S>,
}

impl<S: Real> KClusterSetup<S> {
    pub fn new(cfg: &RecoveryConfig) -> Result<Self> {
        let cfg = cfg.resolve()?;
        let h = build_filter_h(cfg.k, S::lit(cfg.delta), S::lit(cfg.t_len), &cfg.h)?;
        let g = build_filter_g(cfg.bins, S::lit(cfg.delta), S::lit(cfg.alpha), &cfg.g)?;
        Ok(Self { cfg, h, g })
    }

    pub fn t_len(&self) -> S {
        S::lit(self.cfg.t_len)
    }

    pub fn schedule(&self) -> VoteSchedule<S> {
        VoteSchedule {
            f_max: S::lit(self.cfg.f_max),
            regions: self.cfg.t_regions,
            spacing: S::lit(self.cfg.vote_spacing),
            beta_max: S::lit(self.cfg.beta_max()),
            max_rounds: self.cfg.d_max,
            c_vote: S::lit(self.cfg.c_vote),
        }
    }

    pub fn degree(&self) -> usize {
        self.cfg.envelope_degree(self.h.delta_h.as_f64())
    }

    /// Draws a fresh hash `(sigma, b)`.
    pub fn draw_hash<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HashConfig<S>> {
        HashConfig::draw(&self.g, self.h.delta_h, rng)
    }
}

/// Per-bin RMS of `HashToBins` outputs over `r_est` uniform evaluation times in `[0, T]`.
pub fn get_empirical_k_energy<S: Real, R: Rng + ?Sized>(
    z: &SignalSource<S>,
    g: &FilterG<S>,
    hash: &HashConfig<S>,
    r_est: usize,
    t_len: S,
    rng: &mut R,
) -> Result<Vec<S>> {
    let mut acc = vec![S::zero(); g.bins];
    for _ in 0..r_est {
        let u = hash_to_bins(z, g, &hash.at_time(t_len * S::lit(rng.random::<f64>())))?;
        for (a, v) in acc.iter_mut().zip(&u) {
            *a = *a + v.norm_sqr();
        }
    }
    let n = S::lit(r_est.max(1) as f64);
    Ok(acc.into_iter().map(|a| (a / n).sqrt()).collect())
}

/// Bin outputs `(u_j(tau), u_j(tau + beta))` at a pair of times.
pub type BinPair<S> = (Complex<S>, Complex<S>);

/// One heavy pair `(u_j(tau), u_j(tau + beta))` per bin, or `None` for bins
/// without a heavy draw.
#[allow(clippy::too_many_arguments)]
pub fn get_legal_k_sample<S: Real, R: Rng + ?Sized>(
    z: &SignalSource<S>,
    g: &FilterG<S>,
    hash: &HashConfig<S>,
    r_repeats: usize,
    beta: S,
    z_emp: &[S],
    t_len: S,
    rng: &mut R,
) -> Result<Vec<Option<BinPair<S>>>> {
    if !(beta > S::zero() && beta < t_len) {
        return config_err(format!("beta = {beta} outside (0, T)"));
    }
    let span = t_len - beta;
    let mut draws = Vec::with_capacity(r_repeats);
    for _ in 0..r_repeats {
        let tau = span * S::lit(rng.random::<f64>());
        let u0 = hash_to_bins(z, g, &hash.at_time(tau))?;
        let u1 = hash_to_bins(z, g, &hash.at_time(tau + beta))?;
        draws.push((u0, u1));
    }
    let half = S::lit(0.5);
    Ok((0..g.bins)
        .map(|j| {
            let heavy: Vec<BinPair<S>> = draws
                .iter()
                .map(|(u0, u1)| (u0[j], u1[j]))
                .filter(|(a, _)| z_emp[j] > S::zero() && a.norm() >= half * z_emp[j])
                .collect();
            pick_weighted(&heavy, |(a, b)| a.norm_sqr() + b.norm_sqr(), rng).copied()
        })
        .collect())
}

/// Bins whose energy clears both `gate * max` and twice the median.
pub fn active_bins<S: Real>(z_emp: &[S], gate: f64) -> Vec<usize> {
    let max = z_emp.iter().copied().fold(S::zero(), S::max);
    if max == S::zero() {
        return Vec::new();
    }
    let med = median(&mut z_emp.to_vec());
    let floor = (max * S::lit(gate)).max(med * S::lit(2.0));
    (0..z_emp.len())
        .filter(|&j| z_emp[j] > S::zero() && z_emp[j] >= floor.min(max))
        .collect()
}

/// Per-bin voting search sharing one `beta` per vote across bins.
fn locate_k_signal<S: Real, R: Rng + ?Sized>(
    setup: &KClusterSetup<S>,
    z: &SignalSource<S>,
    hash: &HashConfig<S>,
    z_emp: &[S],
    bins: &[usize],
    rng: &mut R,
) -> Result<Vec<S>> {
    let sched = setup.schedule();
    let r_loc = setup.cfg.r_loc;
    let threshold = setup.cfg.c_vote * r_loc as f64;
    let t_len = setup.t_len();
    let first = sched.first_round();
    let mut live: Vec<(usize, Round<S>)> = bins.iter().map(|&j| (j, first)).collect();
    let mut found: Vec<S> = Vec::new();
    for round_no in 0..sched.max_rounds {
        if live.is_empty() {
            break;
        }
        let rnd = live[0].1;
        let mut votes: Vec<Vec<u32>> = live.iter().map(|(_, r)| vec![0; r.regions]).collect();
        for _ in 0..r_loc {
            let beta = rnd.beta_hat * S::lit(0.5 + 0.5 * rng.random::<f64>());
            let pairs = get_legal_k_sample(z, &setup.g, hash, setup.cfg.r_repeats, beta, z_emp, t_len, rng)?;
            for ((j, r), v) in live.iter().zip(votes.iter_mut()) {
                if let Some((a, b)) = pairs[*j] {
                    let ratio = b * a.conj();
                    r.cast(v, phase_cycles(ratio.re, ratio.im), beta);
                }
            }
        }
        let mut next = Vec::new();
        for ((j, r), v) in live.iter().zip(&votes) {
            match winning_region(v, threshold) {
                Some(q) => {
                    let w = r.region_center(S::lit(q));
                    if r.last || round_no + 1 == sched.max_rounds {
                        found.push(w);
                    } else {
                        next.push((*j, sched.next_round(r, w)));
                    }
                }
                // A bin that loses its majority after the first round keeps its last centre.
                None if round_no > 0 => found.push(r.center),
                None => {}
            }
        }
        live = next;
    }
    Ok(found)
}

/// One hashing stage: energy estimate, bin gating and per-bin location.
pub fn one_stage<S: Real, R: Rng + ?Sized>(
    setup: &KClusterSetup<S>,
    z: &SignalSource<S>,
    hash: &HashConfig<S>,
    rng: &mut R,
) -> Result<FrequencyList<S>> {
    let z_emp = get_empirical_k_energy(z, &setup.g, hash, setup.cfg.r_est, setup.t_len(), rng)?;
    let bins = active_bins(&z_emp, setup.cfg.bin_gate);
    Ok(FrequencyList::new(locate_k_signal(setup, z, hash, &z_emp, &bins, rng)?))
}

/// Union of the stage lists, keeping every `ceil(R/2)`-th sorted entry.
pub fn merged_stages<S: Real>(lists: &[FrequencyList<S>]) -> FrequencyList<S> {
    let r = lists.len().max(1);
    let stride = r.div_ceil(2);
    let all = FrequencyList::new(lists.iter().flat_map(|l| l.freqs.iter().copied()).collect());
    FrequencyList {
        freqs: all
            .freqs
            .into_iter()
            .enumerate()
            .filter(|(i, _)| (i + 1) % stride == 0)
            .map(|(_, f)| f)
            .collect(),
    }
}

/// Runs `stages` independent hashing stages on `x H` and merges them.
pub fn frequency_recovery_k_cluster<S: Real, R: Rng + ?Sized>(
    setup: &KClusterSetup<S>,
    x: &SignalSource<S>,
    rng: &mut R,
) -> Result<FrequencyList<S>> {
    let z = setup.h.apply(x);
    let seeds: Vec<u64> = (0..setup.cfg.stages).map(|_| rng.random()).collect();
    let lists: Vec<FrequencyList<S>> = seeds
        .par_iter()
        .map(|&s| {
            let mut r = ChaCha8Rng::seed_from_u64(s);
            let hash = setup.draw_hash(&mut r)?;
            one_stage(setup, &z, &hash, &mut r)
        })
        .collect::<Result<_>>()?;
    let degree = setup.degree().max(1) as f64;
    let merged = merged_stages(&lists).dedup_within(S::lit(1.0 / (degree * setup.cfg.t_len)));
    Ok(merged.capped(setup.cfg.freq_cap))
}

/// A fitted mixed-basis model.
#[derive(Debug, Clone)]
pub struct MixedFit<S> {
    pub model: MixedBasisModel<S>,
    /// RMS of the regression residual.
    pub residual: S,
    pub n_samples: usize,
}

fn mixed_row<S: Real>(freqs: &[S], d: usize, t_len: S, t: S, legendre: &mut [S], row: &mut [Complex<S>]) {
    let u = (t + t - t_len) / t_len;
    legendre_values(d + 1, u, legendre);
    for (i, &f) in freqs.iter().enumerate() {
        let carrier = (f * t).cis2pi();
        for (j, &p) in legendre.iter().enumerate() {
            row[i * (d + 1) + j] = carrier * p;
        }
    }
}

fn fit_mixed<S: Real>(freqs: &[S], d: usize, t_len: S, samples: &[(S, Complex<S>)]) -> Result<MixedFit<S>> {
    let cols = freqs.len() * (d + 1);
    let mut leg = vec![S::zero(); d + 1];
    let a = CMatrix::from_rows(samples.len(), cols, |i, row| {
        mixed_row(freqs, d, t_len, samples[i].0, &mut leg, row)
    });
    let b: Vec<Complex<S>> = samples.iter().map(|s| s.1).collect();
    let sol = lstsq(&a, &b, S::lit(MIXED_RCOND), RankPolicy::Truncate)?;
    if sol.rank == 0 {
        return Err(Error::SingularDesign("mixed basis has rank zero".into()));
    }
    let fitted = a.mul_vec(&sol.x);
    let ss: S = fitted.iter().zip(&b).map(|(p, v)| (*p - *v).norm_sqr()).sum();
    let terms = freqs
        .iter()
        .enumerate()
        .map(|(i, &f)| ModelTerm {
            freq: f,
            poly: Polynomial::new(
                sol.x[i * (d + 1)..(i + 1) * (d + 1)].to_vec(),
                Basis::Legendre,
                (S::zero(), t_len),
            ),
        })
        .collect();
    Ok(MixedFit {
        model: MixedBasisModel::new(t_len, terms),
        residual: (ss / S::lit(samples.len() as f64)).sqrt(),
        n_samples: samples.len(),
    })
}

/// Least-squares fit of `x` on `span{t^j exp(2 pi i f_i t)}` from uniform samples.
pub fn signal_recovery_k_cluster<S: Real, R: Rng + ?Sized>(
    setup: &KClusterSetup<S>,
    x: &SignalSource<S>,
    freqs: &FrequencyList<S>,
    rng: &mut R,
) -> Result<MixedFit<S>> {
    if freqs.is_empty() {
        return config_err("no carrier frequencies to fit");
    }
    let d = setup.degree();
    let t_len = setup.t_len();
    let m = setup.cfg.regression_samples(freqs.len() * (d + 1));
    let samples: Vec<(S, Complex<S>)> = (0..m)
        .map(|_| {
            let t = t_len * S::lit(rng.random::<f64>());
            (t, x.sample(t))
        })
        .collect();
    fit_mixed(freqs.freqs(), d, t_len, &samples)
}

/// `boost_runs` independent fits, combined by the coordinatewise median of
/// their values at fresh points and refitted. The median step takes no samples.
pub fn signal_recovery_k_cluster_boosted<S: Real, R: Rng + ?Sized>(
    setup: &KClusterSetup<S>,
    x: &SignalSource<S>,
    freqs: &FrequencyList<S>,
    rng: &mut R,
) -> Result<MixedFit<S>> {
    let seeds: Vec<u64> = (0..setup.cfg.boost_runs).map(|_| rng.random()).collect();
    let fits: Vec<MixedFit<S>> = seeds
        .par_iter()
        .map(|&s| signal_recovery_k_cluster(setup, x, freqs, &mut ChaCha8Rng::seed_from_u64(s)))
        .collect::<Result<_>>()?;
    let models: Vec<MixedBasisModel<S>> = fits.iter().map(|f| f.model.clone()).collect();
    let mut fit = median_refit(setup, &models, freqs, rng)?;
    fit.n_samples = fits.iter().map(|f| f.n_samples).sum();
    fit.residual = median(&mut fits.iter().map(|f| f.residual).collect::<Vec<_>>());
    Ok(fit)
}

/// Refits the coordinatewise median of `models` at fresh uniform points.
pub fn median_refit<S: Real, R: Rng + ?Sized>(
    setup: &KClusterSetup<S>,
    models: &[MixedBasisModel<S>],
    freqs: &FrequencyList<S>,
    rng: &mut R,
) -> Result<MixedFit<S>> {
    if models.is_empty() {
        return config_err("median of zero models");
    }
    let d = setup.degree();
    let t_len = setup.t_len();
    let m = setup.cfg.regression_samples(freqs.len() * (d + 1));
    let points: Vec<(S, Complex<S>)> = (0..m)
        .map(|_| {
            let t = t_len * S::lit(rng.random::<f64>());
            let vals: Vec<Complex<S>> = models.iter().map(|mdl| mdl.eval(t)).collect();
            (t, crate::poly::complex_median(&vals))
        })
        .collect();
    let mut fit = fit_mixed(freqs.freqs(), d, t_len, &points)?;
    fit.n_samples = 0;
    Ok(fit)
}

/// Outcome of a full recovery.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoveryReport<S> {
    pub model: MixedBasisModel<S>,
    pub freqs: FrequencyList<S>,
    /// Samples drawn from the signal oracle.
    pub n_samples: u64,
    /// `||model - truth||_T`, when the truth is known.
    #[serde(rename = "err_T", skip_serializing_if = "Option::is_none", default)]
    pub err_t: Option<S>,
    /// Estimate of the noise level from the regression residual.
    pub noise_level: S,
    pub seed: u64,
    /// Seconds; omitted unless requested, so reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time: Option<f64>,
    /// Configuration the run used, when it came from a [`RecoveryConfig`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config: Option<ResolvedConfig>,
}

/// Locates the carriers, fits the envelopes and reports the sample count.
pub fn cft_k_cluster<S: Real, R: Rng + ?Sized>(
    x: &SignalSource<S>,
    cfg: &RecoveryConfig,
    rng: &mut R,
) -> Result<RecoveryReport<S>> {
    let setup = KClusterSetup::new(cfg)?;
    cft_k_cluster_with(&setup, x, rng)
}

/// [`cft_k_cluster`] with prebuilt filters.
pub fn cft_k_cluster_with<S: Real, R: Rng + ?Sized>(
    setup: &KClusterSetup<S>,
    x: &SignalSource<S>,
    rng: &mut R,
) -> Result<RecoveryReport<S>> {
    let clock = Instant::now();
    let start = x.samples_taken();
    let freqs = frequency_recovery_k_cluster(setup, x, rng)?;
    if freqs.is_empty() {
        return Err(Error::LocationFailed("no bin produced a carrier".into()));
    }
    let fit = signal_recovery_k_cluster_boosted(setup, x, &freqs, rng)?;
    Ok(RecoveryReport {
        model: fit.model,
        freqs,
        n_samples: x.samples_taken() - start,
        err_t: None,
        noise_level: fit.residual,
        seed: setup.cfg.seed,
        wall_time: Some(clock.elapsed().as_secs_f64()),
        config: Some(setup.cfg.clone()),
    })
}
