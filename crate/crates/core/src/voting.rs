//! Multi-scale phase voting shared by the one-cluster and per-bin searches.
//!
//! A search keeps a candidate interval of width `L`, split into regions of
//! width `L / t`. Each observation is a phase `psi = arg(z(a + beta) / z(a)) / 2 pi`
//! in cycles; every frequency `(psi + n) / beta` inside the interval votes for
//! its region and both neighbours. The winning region is recentred with
//! width `4 L / t` and the next round uses a larger `beta`.

use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Fixed parameters of a voting search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoteSchedule<S> {
    /// Band limit `F`; intervals stay inside `[-F, F]`.
    pub f_max: S,
    /// Regions per round.
    pub regions: usize,
    /// Phase spacing `s`; a region spans at most `s / 2` cycles at `beta_hat`.
    pub spacing: S,
    /// Largest admissible `beta_hat`.
    pub beta_max: S,
    /// Maximum number of rounds.
    pub max_rounds: usize,
    /// Fraction of votes a region needs to win.
    pub c_vote: S,
}

/// One round of the search: where to vote and how far apart the samples are.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Round<S> {
    pub center: S,
    pub width: S,
    pub regions: usize,
    pub beta_hat: S,
    /// True when `beta_hat` was clamped to `beta_max`; no round follows.
    pub last: bool,
}

impl<S: Real> VoteSchedule<S> {
    /// First round, over `[-F, F]`.
    pub fn first_round(&self) -> Round<S> {
        self.round(S::zero(), self.f_max + self.f_max)
    }

    /// Round over the interval of width `width` centred at `center`.
    pub fn round(&self, center: S, width: S) -> Round<S> {
        let t = S::lit(self.regions as f64);
        let beta_hat = t * self.spacing / (S::lit(2.0) * width);
        if beta_hat < self.beta_max {
            return Round {
                center,
                width,
                regions: self.regions,
                beta_hat,
                last: false,
            };
        }
        // Clamp: keep each region within s/2 cycles at beta_max.
        let regions = (S::lit(2.0) * width * self.beta_max / self.spacing)
            .ceil()
            .to_usize()
            .unwrap_or(1)
            .clamp(1, self.regions);
        Round {
            center,
            width,
            regions,
            beta_hat: self.beta_max,
            last: true,
        }
    }

    /// Interval for the round after `prev` whose winner sits at `winner`.
    pub fn next_round(&self, prev: &Round<S>, winner: S) -> Round<S> {
        let width = (prev.width * S::lit(4.0) / S::lit(prev.regions as f64)).min(self.f_max + self.f_max);
        let half = width * S::lit(0.5);
        let center = winner.max(-self.f_max + half).min(self.f_max - half);
        self.round(center, width)
    }
}

impl<S: Real> Round<S> {
    pub fn region_width(&self) -> S {
        self.width / S::lit(self.regions as f64)
    }

    pub fn lo(&self) -> S {
        self.center - self.width * S::lit(0.5)
    }

    /// Centre frequency of region `q`.
    pub fn region_center(&self, q: S) -> S {
        self.lo() + (q + S::lit(0.5)) * self.region_width()
    }

    /// Adds one observation's votes. Each region gets at most one vote per call.
    pub fn cast(&self, votes: &mut [u32], psi: S, beta: S) {
        debug_assert_eq!(votes.len(), self.regions);
        let w = self.region_width();
        let lo = self.lo();
        let hi = lo + self.width;
        let t = self.regions as i64;
        let n_lo = (beta * (lo - w) - psi).ceil().to_i64().unwrap_or(0);
        let n_hi = (beta * (hi + w) - psi).floor().to_i64().unwrap_or(-1);
        let mut hit = vec![false; self.regions];
        for n in n_lo..=n_hi {
            let theta = (psi + S::lit(n as f64)) / beta;
            let q = ((theta - lo) / w).floor().to_i64().unwrap_or(-2);
            for r in (q - 1)..=(q + 1) {
                if (0..t).contains(&r) {
                    hit[r as usize] = true;
                }
            }
        }
        for (v, h) in votes.iter_mut().zip(hit) {
            *v += h as u32;
        }
    }
}

/// Winner of a vote tally: the middle of the lowest-index contiguous run of
/// regions holding the maximum count, provided it exceeds `threshold`.
/// Returned as a fractional region index.
pub fn winning_region(votes: &[u32], threshold: f64) -> Option<f64> {
    let max = *votes.iter().max()?;
    if (max as f64) <= threshold {
        return None;
    }
    let start = votes.iter().position(|&v| v == max)?;
    let len = votes[start..].iter().take_while(|&&v| v == max).count();
    Some(start as f64 + (len - 1) as f64 / 2.0)
}

/// Phase of `re + i im` in cycles, in `(-1/2, 1/2]`.
pub fn phase_cycles<S: Real>(re: S, im: S) -> S {
    im.atan2(re) / S::TAU()
}
