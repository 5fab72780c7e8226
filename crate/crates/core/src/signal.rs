//! Ground-truth signals, sampling oracles and norms.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quadrature::{simpson, QuadratureSpec};
use crate::real::Real;

/// One complex exponential `amp * exp(2 pi i freq t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone<S> {
    pub freq: S,
    pub amp: Complex<S>,
}

impl<S: Real> Tone<S> {
    pub fn new(freq: S, amp: Complex<S>) -> Self {
        Self { freq, amp }
    }
}

/// A `k`-sparse sum of complex exponentials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSparseSignal<S> {
    tones: Vec<Tone<S>>,
}

impl<S: Real> FourierSparseSignal<S> {
    /// Builds a signal, merging tones that share a frequency.
    pub fn new(tones: Vec<Tone<S>>) -> Result<Self> {
        if tones.is_empty() {
            return Err(Error::Config("a sparse signal needs at least one tone".into()));
        }
        let mut merged: Vec<Tone<S>> = Vec::with_capacity(tones.len());
        for tone in tones {
            if !tone.freq.is_finite() || !tone.amp.re.is_finite() || !tone.amp.im.is_finite() {
                return Err(Error::Config(format!("non-finite tone {:?}", tone)));
            }
            match merged.iter_mut().find(|m| m.freq == tone.freq) {
                Some(m) => m.amp = m.amp + tone.amp,
                None => merged.push(tone),
            }
        }
        Ok(Self { tones: merged })
    }

    pub fn tones(&self) -> &[Tone<S>] {
        &self.tones
    }

    pub fn k(&self) -> usize {
        self.tones.len()
    }

    pub fn freqs(&self) -> Vec<S> {
        self.tones.iter().map(|t| t.freq).collect()
    }

    /// `sum_j v_j exp(2 pi i f_j t)`.
    pub fn eval(&self, t: S) -> Complex<S> {
        eval_sparse(self, t)
    }

    /// Closed-form `||x||_T` from the Gram matrix.
    pub fn norm_t_closed(&self, t_len: S) -> S {
        let g = gram_matrix(&self.freqs(), t_len);
        let v: Vec<Complex<S>> = self.tones.iter().map(|t| t.amp).collect();
        let mut acc: Complex<S> = Complex::zero();
        for i in 0..v.len() {
            for j in 0..v.len() {
                acc = acc + v[i] * g[(i, j)] * v[j].conj();
            }
        }
        acc.re.max(S::zero()).sqrt()
    }

    /// Multiplies every amplitude by `c`.
    pub fn scaled(&self, c: S) -> Self {
        Self {
            tones: self.tones.iter().map(|t| Tone::new(t.freq, t.amp * c)).collect(),
        }
    }

    /// Shifts every frequency by `df`.
    pub fn shifted(&self, df: S) -> Self {
        Self {
            tones: self.tones.iter().map(|t| Tone::new(t.freq + df, t.amp)).collect(),
        }
    }
}

/// Evaluates a sparse signal at `t`.
pub fn eval_sparse<S: Real>(sig: &FourierSparseSignal<S>, t: S) -> Complex<S> {
    sig.tones
        .iter()
        .fold(Complex::zero(), |acc, tone| acc + tone.amp * (tone.freq * t).cis2pi())
}

/// Shared, thread-safe sampling function.
pub type Sampler<S> = Arc<dyn Fn(S) -> Complex<S> + Send + Sync>;

/// A sampling oracle with a sample counter.
///
/// Sources derived through [`SignalSource::derive`] share the parent's counter
/// and count one sample per call, whatever the nesting depth. A source
/// restricted to a support returns zero outside it without counting.
#[derive(Clone)]
pub struct SignalSource<S> {
    raw: Sampler<S>,
    counter: Arc<AtomicU64>,
    label: String,
    support: Option<(S, S)>,
}

impl<S: Real> SignalSource<S> {
    pub fn new(label: impl Into<String>, f: impl Fn(S) -> Complex<S> + Send + Sync + 'static) -> Self {
        Self {
            raw: Arc::new(f),
            counter: Arc::new(AtomicU64::new(0)),
            label: label.into(),
            support: None,
        }
    }

    /// Noise-free oracle for a sparse signal.
    pub fn from_signal(sig: &FourierSparseSignal<S>) -> Self {
        let sig = sig.clone();
        Self::new(format!("sparse(k={})", sig.k()), move |t| sig.eval(t))
    }

    pub fn zero() -> Self {
        Self::new("zero", |_| Complex::zero())
    }

    /// Draws one sample and bumps the counter.
    #[inline]
    pub fn sample(&self, t: S) -> Complex<S> {
        if let Some((lo, hi)) = self.support {
            if !(t >= lo && t <= hi) {
                return Complex::zero();
            }
        }
        self.counter.fetch_add(1, Ordering::Relaxed);
        (self.raw)(t)
    }

    pub fn samples_taken(&self) -> u64 {
        self.counter.load(Ordering::Relaxed)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The underlying function, bypassing the counter.
    pub fn sampler(&self) -> Sampler<S> {
        Arc::clone(&self.raw)
    }

    /// A new source computed from this one that shares its counter.
    pub fn derive(
        &self,
        label: impl Into<String>,
        f: impl Fn(&dyn Fn(S) -> Complex<S>, S) -> Complex<S> + Send + Sync + 'static,
    ) -> Self {
        let inner = Arc::clone(&self.raw);
        Self {
            raw: Arc::new(move |t| f(&*inner, t)),
            counter: Arc::clone(&self.counter),
            label: label.into(),
            support: None,
        }
    }

    /// Same source, identically zero outside `[lo, hi]`; those calls are not counted.
    pub fn restricted(&self, lo: S, hi: S) -> Self {
        Self {
            support: Some((lo, hi)),
            ..self.clone()
        }
    }

    /// `t -> x(t) exp(-2 pi i f t)`.
    pub fn demodulate(&self, f: S) -> Self {
        self.derive(format!("{}*exp(-2pi i {f} t)", self.label), move |x, t| {
            x(t) * (-(f * t)).cis2pi()
        })
    }

    /// `t -> x(t) w(t)`.
    pub fn windowed(&self, label: &str, w: impl Fn(S) -> S + Send + Sync + 'static) -> Self {
        self.derive(format!("{}*{label}", self.label), move |x, t| x(t) * w(t))
    }
}

impl<S> fmt::Debug for SignalSource<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SignalSource")
            .field("label", &self.label)
            .field("samples_taken", &self.counter.load(Ordering::Relaxed))
            .finish()
    }
}

/// `||y||_T = sqrt((1/T) int_0^T |y|^2)` by composite Simpson.
pub fn norm_t<S: Real>(mut y: impl FnMut(S) -> Complex<S>, t_len: S, quad: &QuadratureSpec) -> Result<S> {
    if t_len.partial_cmp(&S::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Config(format!("T must be positive, got {t_len}")));
    }
    let mut bad = None;
    let integral: S = simpson(quad, S::zero(), t_len, |t| {
        let v = y(t);
        if !(v.re.is_finite() && v.im.is_finite()) {
            bad = Some(t);
            return S::zero();
        }
        v.norm_sqr()
    });
    if let Some(t) = bad {
        return Err(Error::Numerical(format!("non-finite sample at t = {t}")));
    }
    Ok((integral / t_len).max(S::zero()).sqrt())
}

/// Gram matrix `G[i][j] = (1/T) int_0^T exp(2 pi i (f_i - f_j) t) dt`.
pub fn gram_matrix<S: Real>(freqs: &[S], t_len: S) -> CMatrix<S> {
    let k = freqs.len();
    let mut g = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = if i == j {
                Complex::new(S::one(), S::zero())
            } else {
                let x = (freqs[i] - freqs[j]) * t_len;
                if x == S::zero() {
                    Complex::new(S::one(), S::zero())
                } else {
                    // (e^{2 pi i x} - 1) / (2 pi i x) = e^{pi i x} sinc(x)
                    (x * S::lit(0.5)).cis2pi() * x.sinc()
                }
            };
        }
    }
    g
}
