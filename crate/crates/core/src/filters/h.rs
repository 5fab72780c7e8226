//! Time-domain window `H` whose spectrum has compact support.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bspline::cardinal_bspline;
use super::sinc_power::SincPowerIntegral;
use crate::error::{config_err, Result};
use crate::real::Real;
use crate::signal::SignalSource;
use num_complex::Complex;

/// Optional overrides for [`build_filter_h`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HKnobs {
    /// `s1 = max(s1_min, c1 k^2)`.
    pub c1: f64,
    pub s1_min: f64,
    pub s1: Option<f64>,
    pub s3: Option<f64>,
    pub ell: Option<usize>,
}

impl Default for HKnobs {
    fn default() -> Self {
        Self {
            c1: 4.0,
            s1_min: 32.0,
            s1: None,
            s3: None,
            ell: None,
        }
    }
}

/// `H(t) = s0 * int_{u - s2/2}^{u + s2/2} sinc(s1 tau)^ell d tau`, `u = (t - T/2) / (s3 T)`.
#[derive(Debug, Clone)]
pub struct FilterH<S> {
    pub s0: S,
    pub s1: S,
    pub s2: S,
    pub s3: S,
    pub ell: usize,
    pub t_len: S,
    pub delta: S,
    /// Width of the spectral support, `s1 ell / (s3 T)`.
    pub delta_h: S,
    kernel: SincPowerIntegral<S>,
    table: HermiteTable<S>,
}

/// Cubic Hermite table of `H_1` used for bulk windowing.
#[derive(Debug, Clone)]
struct HermiteTable<S> {
    start: S,
    step: S,
    vals: Vec<S>,
    ders: Vec<S>,
}

const TABLE_REACH: f64 = 1.0;
const TABLE_PER_LOBE: f64 = 256.0;

/// Builds `H` for sparsity `k`, tail parameter `delta` and interval length `t_len`.
pub fn build_filter_h<S: Real>(k: usize, delta: S, t_len: S, knobs: &HKnobs) -> Result<FilterH<S>> {
    if k == 0 || !(delta > S::zero() && delta < S::one()) || !(t_len > S::zero()) {
        return config_err(format!(
            "need k >= 1, 0 < delta < 1, T > 0 (k={k}, delta={delta}, T={t_len})"
        ));
    }
    let kf = k as f64;
    let ell = match knobs.ell {
        Some(l) if l == 0 || l % 2 == 1 => return config_err(format!("ell must be a positive even integer, got {l}")),
        Some(l) => l,
        None => {
            let raw = (kf * (kf / delta.as_f64()).ln() + 4.0) / 2.0;
            2 * (raw.ceil().max(1.0) as usize)
        }
    };
    let s1 = knobs.s1.unwrap_or_else(|| knobs.s1_min.max(knobs.c1 * kf * kf).ceil());
    if s1 <= 2.0 {
        return config_err(format!("s1 must exceed 2, got {s1}"));
    }
    let s2 = 1.0 - 2.0 / s1;
    let s3 = knobs.s3.unwrap_or(1.0 - 1.0 / s1);
    if !(s3 > 0.0 && s3 < 1.0) {
        return config_err(format!("s3 must lie in (0, 1), got {s3}"));
    }
    if s2 / 2.0 + 1.0 / s1 > 0.5 + 1e-12 {
        return config_err("s2/2 + 1/s1 exceeds 1/2");
    }
    let (s1, s2, s3) = (S::lit(s1), S::lit(s2), S::lit(s3));
    let kernel = SincPowerIntegral::new(s1, ell);
    let half = s2 * S::lit(0.5);
    let s0 = S::one() / kernel.integral(-half, half);
    let mut h = FilterH {
        s0,
        s1,
        s2,
        s3,
        ell,
        t_len,
        delta,
        delta_h: s1 * S::lit(ell as f64) / (s3 * t_len),
        kernel,
        table: HermiteTable {
            start: S::zero(),
            step: S::one(),
            vals: Vec::new(),
            ders: Vec::new(),
        },
    };
    h.table = h.build_table();
    Ok(h)
}

impl<S: Real> FilterH<S> {
    /// Normalized offset `u = (t - T/2) / (s3 T)`.
    #[inline]
    pub fn offset(&self, t: S) -> S {
        (t - self.t_len * S::lit(0.5)) / (self.s3 * self.t_len)
    }

    /// `H(t)`.
    pub fn eval(&self, t: S) -> S {
        self.eval_offset(self.offset(t))
    }

    /// `H_1(u)`, the window before rescaling to `[0, T]`.
    pub fn eval_offset(&self, u: S) -> S {
        let half = self.s2 * S::lit(0.5);
        self.s0 * self.kernel.integral(u - half, u + half)
    }

    /// `dH_1/du`, from the fundamental theorem of calculus.
    pub fn derivative_offset(&self, u: S) -> S {
        let half = self.s2 * S::lit(0.5);
        self.s0 * (self.kernel.integrand(u + half) - self.kernel.integrand(u - half))
    }

    fn build_table(&self) -> HermiteTable<S> {
        let step = S::one() / (self.s1 * S::lit(TABLE_PER_LOBE));
        let start = S::lit(-TABLE_REACH);
        let n = (S::lit(2.0 * TABLE_REACH) / step).ceil().to_usize().unwrap_or(0) + 1;
        let us: Vec<S> = (0..n).map(|i| start + step * S::lit(i as f64)).collect();
        HermiteTable {
            start,
            step,
            vals: us.iter().map(|&u| self.eval_offset(u)).collect(),
            ders: us.iter().map(|&u| self.derivative_offset(u)).collect(),
        }
    }

    /// `H(t)` by cubic Hermite interpolation of a precomputed table
    /// (absolute error below `1e-8`); exact evaluation outside the table.
    #[inline]
    pub fn eval_fast(&self, t: S) -> S {
        let u = self.offset(t);
        let tb = &self.table;
        let x = (u - tb.start) / tb.step;
        let i = match x.floor().to_usize() {
            Some(i) if i + 1 < tb.vals.len() && x >= S::zero() => i,
            _ => return self.eval_offset(u),
        };
        let s = x - S::lit(i as f64);
        let s2 = s * s;
        let s3 = s2 * s;
        let two = S::lit(2.0);
        let three = S::lit(3.0);
        let h00 = two * s3 - three * s2 + S::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        h00 * tb.vals[i] + h10 * tb.step * tb.ders[i] + h01 * tb.vals[i + 1] + h11 * tb.step * tb.ders[i + 1]
    }

    /// Real centered transform: `Hhat(f) = exp(-pi i f T) * eval_hat(f)`.
    pub fn eval_hat(&self, f: S) -> S {
        let st = self.s3 * self.t_len;
        let xi = st * f;
        st * self.s0 * self.s2 * (self.s2 * xi).sinc() * cardinal_bspline(self.ell, xi / self.s1) / self.s1
    }

    /// Full transform including the phase from centering at `T/2`.
    pub fn eval_hat_complex(&self, f: S) -> Complex<S> {
        (-(f * self.t_len * S::lit(0.5))).cis2pi() * self.eval_hat(f)
    }

    /// Flat-top half width: `H >= 1 - delta` for `|t - T/2|` below this.
    pub fn flat_half_width(&self) -> S {
        (S::lit(0.5) - S::lit(2.0) / self.s1) * self.s3 * self.t_len
    }

    /// `t -> x(t) H(t)` on `[0, T]` and zero elsewhere, sharing the counter of `src`.
    ///
    /// Outside `[0, T]` the window is negligible, so no sample is taken there.
    pub fn apply(&self, src: &SignalSource<S>) -> SignalSource<S> {
        let h = Arc::new(self.clone());
        src.windowed("H", move |t| h.eval_fast(t))
            .restricted(S::zero(), self.t_len)
    }

    /// Same filter with a refined quadrature, for accuracy checks.
    pub fn refined(&self, refine: usize) -> Self {
        let mut out = self.clone();
        out.kernel = SincPowerIntegral::with_refinement(self.s1, self.ell, refine);
        out
    }
}
