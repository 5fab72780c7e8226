//! Additive noise models layered onto a sampling oracle.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::quadrature::QuadratureSpec;
use crate::real::Real;
use crate::signal::{norm_t, SignalSource};

/// Shape of the additive noise `g`.
#[derive(Clone)]
pub enum NoiseKind<S> {
    None,
    /// Complex Gaussian white noise; a fixed function of `t` for a given seed.
    GaussianWhite,
    /// Rectangular bursts covering a `support` fraction of `[0, T]`.
    AdversarialSparse {
        spikes: usize,
        support: f64,
    },
    /// A user function rescaled to the requested level.
    Custom(Arc<dyn Fn(S) -> Complex<S> + Send + Sync>),
}

impl<S> fmt::Debug for NoiseKind<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseKind::None => write!(f, "None"),
            NoiseKind::GaussianWhite => write!(f, "GaussianWhite"),
            NoiseKind::AdversarialSparse { spikes, support } => {
                write!(f, "AdversarialSparse {{ spikes: {spikes}, support: {support} }}")
            }
            NoiseKind::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Noise model plus its target `||g||_T`.
#[derive(Debug, Clone)]
pub struct NoiseSpec<S> {
    pub kind: NoiseKind<S>,
    pub level: S,
}

impl<S: Real> NoiseSpec<S> {
    pub fn none() -> Self {
        Self {
            kind: NoiseKind::None,
            level: S::zero(),
        }
    }

    pub fn white(level: S) -> Self {
        Self {
            kind: NoiseKind::GaussianWhite,
            level,
        }
    }

    pub fn sparse(level: S, spikes: usize, support: f64) -> Self {
        Self {
            kind: NoiseKind::AdversarialSparse { spikes, support },
            level,
        }
    }

    /// Level giving signal-to-noise ratio `snr_db` against `signal_norm`.
    pub fn level_for_snr(signal_norm: S, snr_db: f64) -> S {
        signal_norm * S::lit(10f64.powf(-snr_db / 20.0))
    }

    /// Builds the noise function `g` alone.
    pub fn realize<R: Rng + ?Sized>(
        &self,
        t_len: S,
        rng: &mut R,
    ) -> Option<Arc<dyn Fn(S) -> Complex<S> + Send + Sync>> {
        if self.level == S::zero() {
            return None;
        }
        let level = self.level;
        match &self.kind {
            NoiseKind::None => None,
            NoiseKind::GaussianWhite => {
                let seed: u64 = rng.random();
                Some(Arc::new(move |t: S| white_sample(seed, t.as_f64()) * level))
            }
            NoiseKind::AdversarialSparse { spikes, support } => {
                let spikes = (*spikes).max(1);
                let support = support.clamp(1e-12, 1.0);
                let width = t_len * S::lit(support / spikes as f64);
                let amp = level / S::lit(support.sqrt());
                let bursts: Vec<(S, Complex<S>)> = (0..spikes)
                    .map(|_| {
                        let start = rng.random_range(S::zero()..t_len - width);
                        let phase: S = S::lit(rng.random::<f64>());
                        (start, phase.cis2pi() * amp)
                    })
                    .collect();
                Some(Arc::new(move |t: S| {
                    bursts
                        .iter()
                        .filter(|(s, _)| t >= *s && t < *s + width)
                        .fold(Complex::zero(), |acc, (_, v)| acc + *v)
                }))
            }
            NoiseKind::Custom(g) => {
                let g = Arc::clone(g);
                let norm = norm_t(|t| g(t), t_len, &QuadratureSpec::default()).unwrap_or(S::zero());
                if norm == S::zero() {
                    return None;
                }
                let scale = level / norm;
                Some(Arc::new(move |t: S| g(t) * scale))
            }
        }
    }
}

/// Returns a source sampling `clean + g`.
pub fn with_noise<S: Real, R: Rng + ?Sized>(
    clean: &SignalSource<S>,
    spec: &NoiseSpec<S>,
    t_len: S,
    rng: &mut R,
) -> SignalSource<S> {
    match spec.realize(t_len, rng) {
        None => clean.derive(clean.label().to_string(), |x, t| x(t)),
        Some(g) => clean.derive(format!("{}+{:?}", clean.label(), spec.kind), move |x, t| x(t) + g(t)),
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_open(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) / (1u64 << 53) as f64
}

/// Unit-power complex Gaussian keyed on `(seed, t)`.
fn white_sample<S: Real>(seed: u64, t: f64) -> Complex<S> {
    let h = splitmix64(seed ^ splitmix64(t.to_bits()));
    let u1 = unit_open(h);
    let u2 = unit_open(splitmix64(h));
    let r = (-u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    Complex::new(S::lit(r * c), S::lit(r * s))
}
