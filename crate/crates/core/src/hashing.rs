//! Frequency permutation, hashing and `HashToBins`.
//!
//! Conventions: `sigma` dilates time, `b` (Hz) shifts frequency and `a`
//! places the evaluation time at `tau = sigma * a`. Bin `j` of
//! [`hash_to_bins`] holds `sum_n W(tau + sigma n) G(n) exp(-2 pi i sigma b n)`
//! folded modulo `B` and transformed, which for a tone `exp(2 pi i f t)`
//! equals `exp(2 pi i f tau) Gdis(j/B - sigma (f - b))`.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};
use crate::fft::dft;
use crate::filters::FilterG;
use crate::real::Real;
use crate::signal::SignalSource;

/// Parameters of one permutation draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HashConfig<S> {
    pub sigma: S,
    pub a: S,
    pub b: S,
    pub bins: usize,
    pub d: usize,
}

impl<S: Real> HashConfig<S> {
    pub fn new(sigma: S, a: S, b: S, bins: usize, d: usize) -> Result<Self> {
        if !(sigma > S::zero()) || bins < 2 || d < 1 {
            return config_err(format!(
                "need sigma > 0, B >= 2, D >= 1 (sigma={sigma}, B={bins}, D={d})"
            ));
        }
        Ok(Self { sigma, a, b, bins, d })
    }

    /// Draws `sigma ~ U[1/(B dh), 2/(B dh)]` and `b ~ U[0, 1/sigma)`, with `a = 0`.
    pub fn draw<R: Rng + ?Sized>(g: &FilterG<S>, delta_h: S, rng: &mut R) -> Result<Self> {
        let bf = S::lit(g.bins as f64);
        let lo = S::one() / (bf * delta_h);
        let sigma = lo + lo * S::lit(rng.random::<f64>());
        let b = S::lit(rng.random::<f64>()) / sigma;
        Self::new(sigma, S::zero(), b, g.bins, g.d)
    }

    /// Same draw evaluated at time `tau`.
    pub fn at_time(&self, tau: S) -> Self {
        Self {
            a: tau / self.sigma,
            ..*self
        }
    }

    /// Evaluation time `sigma * a`.
    pub fn time(&self) -> S {
        self.sigma * self.a
    }

    /// Time span covered by one call, `sigma * B * D`.
    pub fn span(&self) -> S {
        self.sigma * S::lit((self.bins * self.d) as f64)
    }
}

/// `t -> x(sigma (t - a)) exp(-2 pi i sigma b t)`.
pub fn permute<S: Real>(src: &SignalSource<S>, cfg: &HashConfig<S>) -> SignalSource<S> {
    let HashConfig { sigma, a, b, .. } = *cfg;
    src.derive(format!("P[{}]", src.label()), move |x, t| {
        x(sigma * (t - a)) * (-(sigma * b * t)).cis2pi()
    })
}

/// Bin of frequency `f`: `round(((sigma (f - b)) mod 1) B) mod B`, ties to even.
pub fn hash_freq<S: Real>(cfg: &HashConfig<S>, f: S) -> usize {
    let x = cfg.sigma * (f - cfg.b);
    let frac = x - x.floor();
    let bins = cfg.bins as f64;
    let r = (frac * S::lit(bins)).round_even().as_f64() as usize;
    r % cfg.bins
}

/// Offset of `f` from the center of its bin, in units of bins.
pub fn bin_offset<S: Real>(cfg: &HashConfig<S>, f: S) -> S {
    let x = cfg.sigma * (f - cfg.b) * S::lit(cfg.bins as f64);
    x - x.round()
}

/// Folds `B D` filtered samples into `B` bins and transforms them.
///
/// Consumes exactly `B D` samples of `windowed`.
pub fn hash_to_bins<S: Real>(
    windowed: &SignalSource<S>,
    g: &FilterG<S>,
    cfg: &HashConfig<S>,
) -> Result<Vec<Complex<S>>> {
    if cfg.bins != g.bins || cfg.d != g.d {
        return config_err(format!(
            "hash config (B={}, D={}) does not match filter (B={}, D={})",
            cfg.bins, cfg.d, g.bins, g.d
        ));
    }
    let bins = cfg.bins;
    let n = bins * cfg.d;
    let half = (n / 2) as i64;
    let tau = cfg.time();
    let mut u = vec![Complex::<S>::zero(); bins];
    for (i, &tap) in g.taps().iter().enumerate() {
        let idx = i as i64 - half;
        let nf = S::lit(idx as f64);
        let x = windowed.sample(tau + cfg.sigma * nf);
        let v = x * (-(cfg.sigma * cfg.b * nf)).cis2pi() * tap;
        let r = idx.rem_euclid(bins as i64) as usize;
        u[r] = u[r] + v;
    }
    dft(&mut u);
    Ok(u)
}
