//! Bin filter `G`: compact support in time, flat pass band of width about `1/B`.
//!
//! Frequencies are in cycles per sample. `Ghat(xi)` is flat on
//! `|xi| <= (1 - alpha) / (2B)` and negligible for `|xi| >= 1/(2B)`.

use serde::{Deserialize, Serialize};

use super::bspline::cardinal_bspline;
use super::sinc_power::SincPowerIntegral;
use crate::error::{config_err, Result};
use crate::real::Real;

/// Optional overrides for [`build_filter_g`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GKnobs {
    /// `l = ceil(c2 ln(B / delta))`, rounded up to even.
    pub c2: f64,
    /// Kernel scale `s1g = c_g B / alpha`.
    pub c_g: f64,
    pub l: Option<usize>,
    /// Sparsity used for the `delta / k` band tolerances.
    pub k: usize,
}

impl Default for GKnobs {
    fn default() -> Self {
        Self {
            c2: 2.0,
            c_g: 2.0,
            l: None,
            k: 1,
        }
    }
}

/// `G(n) = b0 s2g B_l(n / s1g) / s1g * sinc(s2g n)` and
/// `Ghat(xi) = b0 int_{xi - s2g/2}^{xi + s2g/2} sinc(s1g u)^l du`.
#[derive(Debug, Clone)]
pub struct FilterG<S> {
    pub bins: usize,
    pub alpha: S,
    pub l: usize,
    pub s1g: S,
    pub s2g: S,
    pub b0: S,
    /// Samples per bin: `B * D` covers the time support.
    pub d: usize,
    pub delta: S,
    pub k: usize,
    kernel: SincPowerIntegral<S>,
    taps: Vec<S>,
}

/// Builds `G` for `bins` bins.
pub fn build_filter_g<S: Real>(bins: usize, delta: S, alpha: S, knobs: &GKnobs) -> Result<FilterG<S>> {
    if bins < 2 {
        return config_err(format!("need at least 2 bins, got {bins}"));
    }
    if !(alpha > S::zero() && alpha < S::one()) || !(delta > S::zero() && delta < S::one()) {
        return config_err(format!(
            "need 0 < alpha < 1 and 0 < delta < 1 (alpha={alpha}, delta={delta})"
        ));
    }
    let l = match knobs.l {
        Some(0) => return config_err("l must be positive"),
        Some(l) => l,
        None => {
            let raw = (knobs.c2 * (bins as f64 / delta.as_f64()).ln()).ceil().max(2.0) as usize;
            raw + raw % 2
        }
    };
    let bf = S::lit(bins as f64);
    let s1g = S::lit(knobs.c_g) * bf / alpha;
    let s2g = (S::one() - alpha * S::lit(0.5)) / bf;
    let kernel = SincPowerIntegral::new(s1g, l);
    let half = s2g * S::lit(0.5);
    let b0 = S::one() / kernel.integral(-half, half);
    let support = S::lit(l as f64) * s1g;
    let d = (support / bf).ceil().to_usize().unwrap_or(1).max(1);
    let mut g = FilterG {
        bins,
        alpha,
        l,
        s1g,
        s2g,
        b0,
        d,
        delta,
        k: knobs.k.max(1),
        kernel,
        taps: Vec::new(),
    };
    let n = bins * d;
    g.taps = (0..n).map(|i| g.eval(S::lit(i as f64 - (n / 2) as f64))).collect();
    Ok(g)
}

impl<S: Real> FilterG<S> {
    /// `G(t)` for real `t` (in samples); exactly zero outside the support.
    pub fn eval(&self, t: S) -> S {
        let x = t / self.s1g;
        let spline = cardinal_bspline(self.l, x);
        if spline == S::zero() {
            return S::zero();
        }
        self.b0 * self.s2g * spline / self.s1g * (self.s2g * t).sinc()
    }

    /// `Ghat(xi)` for `xi` in cycles per sample.
    pub fn eval_hat(&self, xi: S) -> S {
        let half = self.s2g * S::lit(0.5);
        self.b0 * self.kernel.integral(xi - half, xi + half)
    }

    /// Half-extent of the time support, `l s1g / 2`.
    pub fn support_half_width(&self) -> S {
        S::lit(self.l as f64) * self.s1g * S::lit(0.5)
    }

    /// Number of taps, `B * D`.
    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// `G(n)` for `n = -BD/2 .. BD/2 - 1`.
    pub fn taps(&self) -> &[S] {
        &self.taps
    }

    /// Pass-band edge `(1 - alpha) / (2B)`.
    pub fn pass_edge(&self) -> S {
        (S::one() - self.alpha) / S::lit(2.0 * self.bins as f64)
    }

    /// Stop-band edge `1 / (2B)`.
    pub fn stop_edge(&self) -> S {
        S::one() / S::lit(2.0 * self.bins as f64)
    }

    /// Band tolerance `delta / k`.
    pub fn tolerance(&self) -> S {
        self.delta / S::lit(self.k as f64)
    }

    /// Periodized response of bin `j` to frequency `f` under dilation `sigma` and shift `b`:
    /// `sum_i Ghat(i + j/B - sigma (f - b))`.
    pub fn eval_hat_periodic(&self, sigma: S, b: S, j: usize, f: S) -> S {
        let x = S::lit(j as f64) / S::lit(self.bins as f64) - sigma * (f - b);
        let frac = x - x.round();
        (-2..=2).map(|i| self.eval_hat(frac + S::lit(i as f64))).sum()
    }

    /// Same filter with a refined quadrature.
    pub fn refined(&self, refine: usize) -> Self {
        let mut out = self.clone();
        out.kernel = SincPowerIntegral::with_refinement(self.s1g, self.l, refine);
        out
    }
}
