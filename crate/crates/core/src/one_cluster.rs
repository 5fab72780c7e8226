//! Recovery of a signal whose spectrum sits in one narrow cluster.
//!
//! The carrier is located by phase voting on pairs `z(a), z(a + beta)` of the
//! windowed signal; the envelope is then learned as a polynomial after
//! demodulating by the located carrier.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};
use crate::filters::FilterH;
use crate::model::MixedBasisModel;
use crate::poly::{robust_poly_learn_boosted, PolyLearnOptions};
use crate::real::Real;
use crate::signal::SignalSource;
use crate::voting::{phase_cycles, winning_region, Round, VoteSchedule};

/// Upper bound on the sample repeat counts.
pub const REPEAT_CAP: usize = 1_000_000;

/// Knobs of the one-cluster search and fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneClusterParams<S> {
    #[serde(rename = "T")]
    pub t_len: S,
    #[serde(rename = "F")]
    pub f_max: S,
    /// Cluster half-width `Delta`.
    #[serde(rename = "Delta")]
    pub delta: S,
    /// Samples for the energy estimate.
    pub r_est: usize,
    /// Candidate draws per legal sample.
    pub r_repeats: usize,
    /// Regions per voting round.
    pub t_regions: usize,
    /// Votes per round.
    pub r_loc: usize,
    /// Maximum number of voting rounds.
    pub d_max: usize,
    pub c_vote: f64,
    /// Scale of the largest sample separation, `beta_max = c_beta T / (T Delta)^1.5`.
    pub c_beta: f64,
    /// Phase spacing `s` of the voting regions.
    pub vote_spacing: f64,
    /// Independent location runs combined by the median.
    pub runs: usize,
    /// Sparsity used in the degree formula.
    pub k: usize,
    /// Tail parameter used in the degree formula.
    pub tail: f64,
    pub degree_cap: usize,
    /// Failure probability of the boosted envelope fit.
    pub boost_p: f64,
}

fn repeat_count(x: f64, floor: usize, what: &str) -> usize {
    let n = x.ceil();
    if n > REPEAT_CAP as f64 {
        log::warn!("{what} = {n:.3e} capped at {REPEAT_CAP}");
        return REPEAT_CAP;
    }
    (n as usize).max(floor)
}

/// Default region count `max(8, 4 ceil(log2(F T)))`.
pub fn default_regions(ft: f64) -> usize {
    (4.0 * ft.max(2.0).log2().ceil()) as usize
}

/// Default round cap `ceil(log_{t/4}(F / Delta)) + 1`.
pub fn default_rounds(regions: usize, f_over_delta: f64) -> usize {
    let base = (regions as f64 / 4.0).max(2.0);
    (f_over_delta.max(1.0).ln() / base.ln()).ceil() as usize + 1
}

impl<S: Real> OneClusterParams<S> {
    /// Defaults for sparsity 1.
    pub fn new(t_len: S, f_max: S, delta: S) -> Result<Self> {
        let (t, f, d) = (t_len.as_f64(), f_max.as_f64(), delta.as_f64());
        if !(t > 0.0 && f > 0.0 && d > 0.0) {
            return config_err(format!("need T, F, Delta > 0 (T={t}, F={f}, Delta={d})"));
        }
        let td = t * d;
        let t_regions = default_regions(f * t).max(8);
        let p = Self {
            t_len,
            f_max,
            delta,
            r_est: repeat_count(td * td, 32, "R_est"),
            r_repeats: repeat_count(td * td * td, 32, "R_repeats"),
            t_regions,
            r_loc: 20,
            d_max: default_rounds(t_regions, f / d),
            c_vote: 0.5,
            c_beta: 1.0,
            vote_spacing: 0.25,
            runs: 7,
            k: 1,
            tail: 0.01,
            degree_cap: 40,
            boost_p: 0.125,
        };
        p.validate()?;
        Ok(p)
    }

    /// Sets the sparsity and the matching run count `2k + 5`.
    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k.max(1);
        self.runs = 2 * self.k + 5;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            self.r_est,
            self.r_repeats,
            self.t_regions,
            self.r_loc,
            self.d_max,
            self.runs,
            self.k,
        ];
        if counts.contains(&0) {
            return config_err("all repeat counts must be at least 1");
        }
        if !(self.t_len > S::zero() && self.f_max > S::zero() && self.delta > S::zero()) {
            return config_err("T, F and Delta must be positive");
        }
        if !(self.c_beta > 0.0 && self.vote_spacing > 0.0 && self.vote_spacing <= 1.0) {
            return config_err("c_beta must be positive and vote_spacing in (0, 1]");
        }
        if !(self.c_vote > 0.0 && self.c_vote < 1.0) || !(self.boost_p > 0.0 && self.boost_p < 1.0) {
            return config_err("c_vote and boost_p must lie in (0, 1)");
        }
        if !(self.tail > 0.0 && self.tail < 1.0) {
            return config_err("tail must lie in (0, 1)");
        }
        Ok(())
    }

    /// `beta_max = min(c_beta T / (T Delta)^1.5, T / 2)`.
    pub fn beta_max(&self) -> S {
        let td = (self.t_len * self.delta).as_f64();
        let b = self.c_beta * self.t_len.as_f64() / td.powf(1.5);
        S::lit(b.min(self.t_len.as_f64() / 2.0))
    }

    /// Location accuracy scale `Delta sqrt(Delta T)`.
    pub fn accuracy_scale(&self) -> S {
        self.delta * (self.delta * self.t_len).sqrt()
    }

    pub fn schedule(&self) -> VoteSchedule<S> {
        VoteSchedule {
            f_max: self.f_max,
            regions: self.t_regions,
            spacing: S::lit(self.vote_spacing),
            beta_max: self.beta_max(),
            max_rounds: self.d_max,
            c_vote: S::lit(self.c_vote),
        }
    }

    /// Envelope degree `min(d_theory, degree_cap)` for a window of width `delta_h`.
    pub fn degree(&self, delta_h: S) -> usize {
        let t = self.t_len.as_f64();
        let k = self.k as f64;
        let d = (t * delta_h.as_f64() + t * self.delta.as_f64()).powf(1.5)
            + k.powi(3) * k.ln()
            + k * (1.0 / self.tail).ln();
        (d.ceil() as usize).min(self.degree_cap)
    }
}

/// A legal pair `z(alpha), z(alpha + beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegalSample<S> {
    pub alpha: S,
    pub z0: Complex<S>,
    pub z1: Complex<S>,
}

impl<S: Real> LegalSample<S> {
    /// Observed phase advance in cycles.
    pub fn phase(&self) -> S {
        let r = self.z1 * self.z0.conj();
        phase_cycles(r.re, r.im)
    }
}

/// RMS of `|z|` over `r_est` uniform times in `[0, T]`.
pub fn get_empirical_1_energy<S: Real, R: Rng + ?Sized>(
    z: &SignalSource<S>,
    p: &OneClusterParams<S>,
    rng: &mut R,
) -> S {
    let sum: S = (0..p.r_est)
        .map(|_| z.sample(p.t_len * S::lit(rng.random::<f64>())).norm_sqr())
        .sum();
    (sum / S::lit(p.r_est as f64)).sqrt()
}

/// Draws `r_repeats` times, keeps those with `|z(alpha)| >= z_emp / 2` and
/// picks one with probability proportional to `|z(alpha)|^2 + |z(alpha + beta)|^2`.
pub fn get_legal_1_sample<S: Real, R: Rng + ?Sized>(
    z: &SignalSource<S>,
    p: &OneClusterParams<S>,
    beta: S,
    z_emp: S,
    rng: &mut R,
) -> Result<LegalSample<S>> {
    if !(beta > S::zero() && beta < p.t_len) {
        return config_err(format!("beta = {beta} outside (0, T)"));
    }
    let span = p.t_len - beta;
    let floor = z_emp * S::lit(0.5);
    let mut heavy = Vec::new();
    for _ in 0..p.r_repeats {
        let alpha = span * S::lit(rng.random::<f64>());
        let z0 = z.sample(alpha);
        if z0.norm() >= floor && z0.norm() > S::zero() {
            heavy.push(LegalSample {
                alpha,
                z0,
                z1: z.sample(alpha + beta),
            });
        }
    }
    pick_weighted(&heavy, |s| s.z0.norm_sqr() + s.z1.norm_sqr(), rng)
        .copied()
        .ok_or_else(|| Error::EnergyTooLow(format!("no sample reached half of z_emp = {z_emp}")))
}

/// Picks an element with probability proportional to `weight`.
pub(crate) fn pick_weighted<'a, T, S: Real, R: Rng + ?Sized>(
    items: &'a [T],
    weight: impl Fn(&T) -> S,
    rng: &mut R,
) -> Option<&'a T> {
    let weights: Vec<f64> = items.iter().map(|x| weight(x).as_f64()).collect();
    let total: f64 = weights.iter().sum();
    if items.is_empty() || !(total > 0.0) {
        return None;
    }
    let mut target = rng.random::<f64>() * total;
    for (item, w) in items.iter().zip(&weights) {
        if target < *w {
            return Some(item);
        }
        target -= w;
    }
    items.last()
}

/// Runs the voting rounds for one carrier; `observe(beta, rng)` supplies phases.
pub(crate) fn run_search<S: Real, R: Rng + ?Sized>(
    sched: &VoteSchedule<S>,
    r_loc: usize,
    rng: &mut R,
    mut observe: impl FnMut(S, &mut R) -> Option<S>,
) -> Result<S> {
    let threshold = sched.c_vote.as_f64() * r_loc as f64;
    let mut round: Round<S> = sched.first_round();
    let mut estimate: Option<S> = None;
    for _ in 0..sched.max_rounds {
        let mut votes = vec![0u32; round.regions];
        for _ in 0..r_loc {
            let beta = round.beta_hat * S::lit(0.5 + 0.5 * rng.random::<f64>());
            if let Some(psi) = observe(beta, rng) {
                round.cast(&mut votes, psi, beta);
            }
        }
        let Some(q) = winning_region(&votes, threshold) else {
            break;
        };
        let winner = round.region_center(S::lit(q));
        estimate = Some(winner);
        if round.last {
            break;
        }
        round = sched.next_round(&round, winner);
    }
    estimate.ok_or_else(|| Error::LocationFailed("no region reached a majority of votes in the first round".into()))
}

/// Multi-scale phase voting for the carrier of a one-cluster signal.
pub fn locate_1_signal<S: Real, R: Rng + ?Sized>(
    z: &SignalSource<S>,
    p: &OneClusterParams<S>,
    z_emp: S,
    rng: &mut R,
) -> Result<S> {
    p.validate()?;
    run_search(&p.schedule(), p.r_loc, rng, |beta, rng| {
        get_legal_1_sample(z, p, beta, z_emp, rng).ok().map(|s| s.phase())
    })
}

/// Lower median of the successful runs; fails when more than half failed.
pub fn median_of_runs<S: Real>(runs: &[Result<S>]) -> Result<S> {
    let mut ok: Vec<S> = runs.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
    if ok.is_empty() || 2 * ok.len() < runs.len() {
        return Err(Error::LocationFailed(format!(
            "{} of {} location runs failed",
            runs.len() - ok.len(),
            runs.len()
        )));
    }
    ok.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(ok[(ok.len() - 1) / 2])
}

/// Median of `runs` independent [`locate_1_signal`] calls on the windowed signal.
pub fn frequency_recovery_1cluster<S: Real, R: Rng + ?Sized>(
    z: &SignalSource<S>,
    p: &OneClusterParams<S>,
    rng: &mut R,
) -> Result<S> {
    p.validate()?;
    let z_emp = get_empirical_1_energy(z, p, rng);
    let seeds: Vec<u64> = (0..p.runs).map(|_| rng.random()).collect();
    let runs: Vec<Result<S>> = seeds
        .par_iter()
        .map(|&s| locate_1_signal(z, p, z_emp, &mut ChaCha8Rng::seed_from_u64(s)))
        .collect();
    median_of_runs(&runs)
}

/// Result of [`cft_1cluster`].
#[derive(Debug, Clone)]
pub struct OneClusterFit<S> {
    pub model: MixedBasisModel<S>,
    pub freq: S,
    pub degree: usize,
    /// Residual RMS of the envelope fit.
    pub residual: S,
    pub n_samples: u64,
}

/// Locates the carrier on `x H`, then fits the demodulated envelope.
pub fn cft_1cluster<S: Real, R: Rng + ?Sized>(
    x: &SignalSource<S>,
    h: &FilterH<S>,
    p: &OneClusterParams<S>,
    rng: &mut R,
) -> Result<OneClusterFit<S>> {
    let start = x.samples_taken();
    let freq = frequency_recovery_1cluster(&h.apply(x), p, rng)?;
    let degree = p.degree(h.delta_h);
    let fit = robust_poly_learn_boosted(
        &x.demodulate(freq),
        degree,
        p.t_len,
        p.boost_p,
        &PolyLearnOptions::default(),
        rng,
    )?;
    Ok(OneClusterFit {
        model: MixedBasisModel::single(p.t_len, freq, fit.poly),
        freq,
        degree,
        residual: fit.residual,
        n_samples: x.samples_taken() - start,
    })
}
