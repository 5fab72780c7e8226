//! `HashToBins` suites.

use num_complex::Complex64;
use rand::Rng;
use sparse_tone::fft::{dft, naive_dft};
use sparse_tone::filters::{FilterG, FilterH};
use sparse_tone::hashing::{hash_freq, hash_to_bins, HashConfig};
use sparse_tone::quadrature::{simpson, QuadratureSpec};
use sparse_tone::signal::{FourierSparseSignal, SignalSource};
use sparse_tone::Real;

use super::filters::{default_g, default_h};
use super::{random_signal, rng, Check};

/// `x H` without the restriction to `[0, T]`, matching the oracle exactly.
pub fn windowed(x: &FourierSparseSignal<f64>, h: &FilterH<f64>) -> SignalSource<f64> {
    let (x, h) = (x.clone(), h.clone());
    SignalSource::new("xH", move |t| x.eval(t) * h.eval_fast(t))
}

/// Bin `j` from the frequency side: `int What(f) e^{2 pi i f tau} Gdis(j/B - sigma (f - b)) df`
/// with `What(f) = sum_i a_i Hhat(f - f_i)`, integrated over each compact `Hhat` support.
///
/// Bins whose argument stays `1.5/B` away from every integer get `Gdis < 1e-15` and contribute zero.
pub fn convolution_oracle(
    x: &FourierSparseSignal<f64>,
    h: &FilterH<f64>,
    g: &FilterG<f64>,
    cfg: &HashConfig<f64>,
) -> Vec<Complex64> {
    let half = h.delta_h / 2.0;
    let bins = g.bins as f64;
    let cycles = h.delta_h * ((cfg.time() - h.t_len / 2.0).abs() + 0.1);
    let quad = QuadratureSpec::with_points(((40.0 * cycles) as usize).max(4001) | 1);
    let mut out = vec![Complex64::new(0.0, 0.0); g.bins];
    for tone in x.tones() {
        let f0 = tone.freq;
        for (j, o) in out.iter_mut().enumerate() {
            let xi = |f: f64| j as f64 / bins - cfg.sigma * (f - cfg.b);
            let (lo, hi) = (xi(f0 + half) - 1.5 / bins, xi(f0 - half) + 1.5 / bins);
            if lo.ceil() > hi {
                continue;
            }
            *o += tone.amp
                * simpson(&quad, f0 - half, f0 + half, |f| {
                    h.eval_hat_complex(f - f0) * (f * cfg.time()).cis2pi() * g.eval_hat_periodic(cfg.sigma, cfg.b, j, f)
                });
        }
    }
    out
}

/// `hash_to_bins` against the oracle on 10 random fixtures, relative `1e-4`.
pub fn convolution_oracle_suite() -> Check {
    let h = default_h(2);
    let g = default_g(16);
    let mut r = rng(81);
    for i in 0..10 {
        let x = random_signal(2, 100.0, &mut r);
        let cfg = HashConfig::draw(&g, h.delta_h, &mut r)
            .map_err(|e| e.to_string())?
            .at_time(r.random::<f64>());
        let got = hash_to_bins(&windowed(&x, &h), &g, &cfg).map_err(|e| e.to_string())?;
        let want = convolution_oracle(&x, &h, &g, &cfg);
        let scale = want.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (j, (a, b)) in got.iter().zip(&want).enumerate() {
            if (a - b).norm() > 1e-4 * scale {
                return Err(format!("fixture {i}, bin {j}: {a} vs oracle {b}"));
            }
        }
    }
    Ok(())
}

/// Folding a length-`BD` vector into `B` bins and transforming equals the
/// stride-`D` subsampled length-`BD` transform, to `1e-10`.
pub fn aliasing_suite() -> Check {
    let mut r = rng(82);
    for (bins, d) in [(4, 3), (8, 8), (16, 5), (32, 4)] {
        let v: Vec<Complex64> = (0..bins * d)
            .map(|_| Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
            .collect();
        let mut folded = vec![Complex64::new(0.0, 0.0); bins];
        for (i, x) in v.iter().enumerate() {
            folded[i % bins] += x;
        }
        let full = naive_dft(&v);
        let mut fast = folded.clone();
        dft(&mut fast);
        let slow = naive_dft(&folded);
        let scale = v.iter().map(|x| x.norm()).sum::<f64>();
        for j in 0..bins {
            if (fast[j] - full[j * d]).norm() > 1e-10 * scale || (slow[j] - full[j * d]).norm() > 1e-10 * scale {
                return Err(format!("B={bins}, D={d}, bin {j}: {} vs {}", fast[j], full[j * d]));
            }
        }
    }
    Ok(())
}

/// Collision rates over `draws` sigma draws with `Delta = 1`, `B = 16`.
pub struct CollisionRates {
    /// Largest rate over pairs with separation in `[Delta, (B - 1) Delta / 2)`.
    pub near: f64,
    /// Largest rate over pairs with separation at least `(B - 1) Delta / 2`.
    pub far: f64,
    pub bins: usize,
}

pub fn collision_rates(draws: usize) -> CollisionRates {
    let bins = 16;
    let delta = 1.0;
    let mut r = rng(83);
    let near_pairs: Vec<f64> = (0..20)
        .map(|_| r.random_range(delta..(bins as f64 - 1.0) * delta / 2.0))
        .collect();
    let far_pairs: Vec<f64> = (0..20)
        .map(|_| r.random_range((bins as f64 - 1.0) * delta / 2.0..200.0 * delta))
        .collect();
    let mut near = vec![0usize; near_pairs.len()];
    let mut far = vec![0usize; far_pairs.len()];
    let lo = 1.0 / (bins as f64 * delta);
    for _ in 0..draws {
        let sigma = lo + lo * r.random::<f64>();
        let b = r.random::<f64>() / sigma;
        let cfg = HashConfig::new(sigma, 0.0, b, bins, 1).unwrap();
        let base = r.random_range(-1000.0..1000.0);
        for (c, &sep) in near.iter_mut().zip(&near_pairs) {
            *c += usize::from(hash_freq(&cfg, base) == hash_freq(&cfg, base + sep));
        }
        for (c, &sep) in far.iter_mut().zip(&far_pairs) {
            *c += usize::from(hash_freq(&cfg, base) == hash_freq(&cfg, base + sep));
        }
    }
    let rate = |v: &[usize]| v.iter().copied().max().unwrap_or(0) as f64 / draws as f64;
    CollisionRates {
        near: rate(&near),
        far: rate(&far),
        bins,
    }
}

/// No collisions in the near band and at most `4/B` in the far band over `1e4` draws.
pub fn collision_suite() -> Result<CollisionRates, String> {
    let c = collision_rates(10_000);
    if c.near > 0.0 {
        return Err(format!("near-band collision rate {}", c.near));
    }
    if c.far > 4.0 / c.bins as f64 {
        return Err(format!("far-band collision rate {} > 4/B", c.far));
    }
    Ok(c)
}
