//! Random test-signal generation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::signal::{FourierSparseSignal, Tone};

/// Distribution of tone magnitudes; phases are always uniform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeLaw {
    #[default]
    Unit,
    /// Magnitude `10^u` with `u` uniform in `[-1, 0]`.
    LogUniform,
}

/// A group of tones drawn uniformly from `[center - width/2, center + width/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec<S> {
    pub center: S,
    pub width: S,
    pub count: usize,
}

/// Recipe for [`gen_signal`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalGenSpec<S> {
    /// Tone count; ignored when `clusters` is given.
    pub k: usize,
    /// Band limit `F`: tones lie in `[-F, F]`.
    pub f_max: S,
    /// Minimum pairwise distance between tones (0 disables the check).
    pub min_gap: S,
    pub amplitude_law: AmplitudeLaw,
    pub clusters: Option<Vec<ClusterSpec<S>>>,
}

impl<S: Real> SignalGenSpec<S> {
    pub fn new(k: usize, f_max: S) -> Self {
        Self {
            k,
            f_max,
            min_gap: S::zero(),
            amplitude_law: AmplitudeLaw::Unit,
            clusters: None,
        }
    }

    pub fn with_min_gap(mut self, gap: S) -> Self {
        self.min_gap = gap;
        self
    }

    pub fn with_amplitudes(mut self, law: AmplitudeLaw) -> Self {
        self.amplitude_law = law;
        self
    }

    pub fn with_clusters(mut self, clusters: Vec<ClusterSpec<S>>) -> Self {
        self.clusters = Some(clusters);
        self
    }

    fn tone_count(&self) -> usize {
        match &self.clusters {
            Some(c) => c.iter().map(|c| c.count).sum(),
            None => self.k,
        }
    }
}

const MAX_RESTARTS: usize = 200;
const MAX_TRIES_PER_TONE: usize = 1000;

/// Draws a random sparse signal according to `spec`.
pub fn gen_signal<S: Real, R: Rng + ?Sized>(spec: &SignalGenSpec<S>, rng: &mut R) -> Result<FourierSparseSignal<S>> {
    let k = spec.tone_count();
    if k == 0 {
        return Err(Error::Config("signal needs at least one tone".into()));
    }
    if !(spec.f_max > S::zero()) || spec.min_gap < S::zero() {
        return Err(Error::Config("F must be positive and min_gap non-negative".into()));
    }
    if S::lit(k as f64) * spec.min_gap > S::lit(2.0) * spec.f_max {
        return Err(Error::Config(format!(
            "{k} tones with gap {} do not fit in [-{f}, {f}]",
            spec.min_gap,
            f = spec.f_max
        )));
    }
    let slots: Vec<(S, S)> = match &spec.clusters {
        Some(clusters) => clusters
            .iter()
            .flat_map(|c| {
                let half = c.width * S::lit(0.5);
                std::iter::repeat_n((c.center - half, c.center + half), c.count)
            })
            .collect(),
        None => vec![(-spec.f_max, spec.f_max); k],
    };

    'restart: for _ in 0..MAX_RESTARTS {
        let mut freqs: Vec<S> = Vec::with_capacity(k);
        for &(lo, hi) in &slots {
            let mut placed = false;
            for _ in 0..MAX_TRIES_PER_TONE {
                let f = if hi > lo { rng.random_range(lo..=hi) } else { lo };
                let ok = freqs.iter().all(|&g| (g - f).abs() >= spec.min_gap && g != f);
                if ok {
                    freqs.push(f);
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'restart;
            }
        }
        let tones = freqs
            .into_iter()
            .map(|f| {
                let mag = match spec.amplitude_law {
                    AmplitudeLaw::Unit => S::one(),
                    AmplitudeLaw::LogUniform => S::lit(10f64.powf(rng.random_range(-1.0..=0.0))),
                };
                let phase = S::lit(rng.random::<f64>());
                Tone::new(f, phase.cis2pi() * mag)
            })
            .collect();
        return FourierSparseSignal::new(tones);
    }
    Err(Error::Config("could not place tones under the gap constraint".into()))
}
