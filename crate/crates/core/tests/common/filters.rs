//! Filter suites for `H` and `G`.

use rand::Rng;
use sparse_tone::filters::{build_filter_g, build_filter_h, FilterG, FilterH, GKnobs, HKnobs};
use sparse_tone::quadrature::QuadratureSpec;
use sparse_tone::signal::{FourierSparseSignal, SignalSource};
use sparse_tone::spectrum::{band_energy, dense_spectrum_oracle};

use super::{random_signal, rng, Check};

pub fn default_h(k: usize) -> FilterH<f64> {
    build_filter_h(k, 0.01, 1.0, &HKnobs::default()).unwrap()
}

pub fn default_g(bins: usize) -> FilterG<f64> {
    build_filter_g(bins, 0.01, 0.5, &GKnobs::default()).unwrap()
}

fn integral(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> f64 {
    sparse_tone::quadrature::simpson(&QuadratureSpec::with_points(points), a, b, f)
}

/// Pointwise properties of `H` for `k = 1..=4`: unit center, flat top,
/// values in `[0, 1]`, tail envelope at distance `T`, symmetry and monotone decay.
pub fn h_pointwise_suite() -> Check {
    for k in 1..=4 {
        let h = default_h(k);
        let t_len = h.t_len;
        let c = t_len / 2.0;
        if (h.eval(c) - 1.0).abs() > 1e-6 {
            return Err(format!("k={k}: H(T/2) = {}", h.eval(c)));
        }
        if h.s2 / 2.0 + 1.0 / h.s1 > 0.5 + 1e-12 {
            return Err(format!("k={k}: s2/2 + 1/s1 > 1/2"));
        }
        let flat = h.flat_half_width();
        for i in 0..=200 {
            let t = c - flat + 2.0 * flat * i as f64 / 200.0;
            let v = h.eval(t);
            if !(1.0 - h.delta..=1.0 + 1e-12).contains(&v) {
                return Err(format!("k={k}: H({t}) = {v} outside the flat band"));
            }
        }
        for i in 0..=600 {
            let t = -t_len + 3.0 * t_len * i as f64 / 600.0;
            let v = h.eval(t);
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(format!("k={k}: H({t}) = {v} outside [0, 1]"));
            }
        }
        let tail = h.s0 * h.s2 * (h.s1 / 2.0 + 2.0).powi(-(h.ell as i32));
        for t in [-t_len, 2.0 * t_len] {
            if h.eval(t).abs() > tail {
                return Err(format!("k={k}: |H({t})| = {} above the tail bound {tail}", h.eval(t)));
            }
        }
        for i in 1..=50 {
            let x = 0.03 * i as f64;
            if (h.eval(c + x) - h.eval(c - x)).abs() > 1e-10 {
                return Err(format!("k={k}: asymmetric at offset {x}"));
            }
        }
        let mut prev = h.eval(c);
        for i in 1..=100 {
            let v = h.eval(c + 1.5 * t_len * i as f64 / 100.0);
            if v > prev + 1e-12 {
                return Err(format!("k={k}: H increases at step {i}"));
            }
            prev = v;
        }
    }
    Ok(())
}

/// Relative mass of the numerically computed `|Hhat|^2` outside `[-Delta_h/2, Delta_h/2]`.
pub fn h_spectral_leakage(h: &FilterH<f64>) -> Result<f64, String> {
    let one = SignalSource::new("one", |_t: f64| num_complex::Complex64::new(1.0, 0.0));
    let half = h.delta_h / 2.0;
    let grid: Vec<f64> = (0..=1200)
        .map(|i| -3.0 * half + 6.0 * half * i as f64 / 1200.0)
        .collect();
    let points = ((60.0 * half * h.t_len) as usize).max(20_001) | 1;
    let table = dense_spectrum_oracle(&one, Some(h), h.t_len, &grid, &QuadratureSpec::with_points(points))
        .map_err(|e| e.to_string())?;
    let total = band_energy(&table, -3.0 * half, 3.0 * half);
    let inside = band_energy(&table, -half, half);
    Ok((total - inside) / total)
}

/// `Hhat` mass outside its nominal support below `1e-3` for `k = 1..=4`.
pub fn h_support_suite() -> Check {
    for k in 1..=4 {
        let leak = h_spectral_leakage(&default_h(k))?;
        if leak > 1e-3 {
            return Err(format!("k={k}: {leak} of the spectral mass lies outside the support"));
        }
    }
    Ok(())
}

/// `(int_0^T |x H|^2 / int_0^T |x|^2, outside energy / inside energy)` for `x H`.
///
/// The outside integral stops at `0.45 T` from the interval, where `H < 1e-15`.
pub fn h_energy_split(x: &FourierSparseSignal<f64>, h: &FilterH<f64>) -> (f64, f64) {
    let t = h.t_len;
    let pts = 8001;
    let xh = |s: f64| x.eval(s).norm_sqr() * h.eval_fast(s).powi(2);
    let inside = integral(xh, 0.0, t, pts);
    let plain = integral(|s| x.eval(s).norm_sqr(), 0.0, t, pts);
    let outside = integral(xh, -0.45 * t, 0.0, pts) + integral(xh, t, 1.45 * t, pts);
    (inside / plain, outside / inside)
}

/// Energy ratio in `[0.7, 1]` and leakage `<= 0.05` for 50 random `k <= 4` signals.
pub fn h_energy_suite() -> Check {
    let filters: Vec<FilterH<f64>> = (1..=4).map(default_h).collect();
    let mut r = rng(64);
    for i in 0..50 {
        let k = r.random_range(1..=4);
        let x = random_signal(k, 50.0, &mut r);
        let (ratio, leak) = h_energy_split(&x, &filters[k - 1]);
        if !(0.7..=1.0 + 1e-9).contains(&ratio) {
            return Err(format!("signal {i} (k={k}): energy ratio {ratio}"));
        }
        if leak > 0.05 {
            return Err(format!("signal {i} (k={k}): leakage {leak}"));
        }
    }
    Ok(())
}

/// Leakage strictly decreasing over `ell in {8, 16, 32}`, averaged over 10 signals.
pub fn h_leakage_monotone_suite() -> Check {
    let mut r = rng(65);
    let signals: Vec<_> = (0..10).map(|_| random_signal(2, 50.0, &mut r)).collect();
    let mut prev = f64::INFINITY;
    for ell in [8, 16, 32] {
        let h = build_filter_h(
            2,
            0.01,
            1.0,
            &HKnobs {
                ell: Some(ell),
                ..HKnobs::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let leak = signals.iter().map(|x| h_energy_split(x, &h).1).sum::<f64>() / signals.len() as f64;
        if leak >= prev {
            return Err(format!(
                "leakage {leak} at ell={ell} does not decrease (previous {prev})"
            ));
        }
        prev = leak;
    }
    Ok(())
}

/// Pass band `[1 - delta/k, 1]`, stop band `|Ghat| <= delta/k`, transition
/// in `[0, 1]`, even symmetry and unit center, for several bin counts.
pub fn g_band_suite() -> Check {
    for bins in [4, 8, 16, 64] {
        let g = default_g(bins);
        let tol = g.tolerance();
        if (g.eval_hat(0.0) - 1.0).abs() > 1e-6 {
            return Err(format!("B={bins}: Ghat(0) = {}", g.eval_hat(0.0)));
        }
        let (pass, stop) = (g.pass_edge(), g.stop_edge());
        for i in 0..=1000 {
            let xi = pass * i as f64 / 1000.0;
            let v = g.eval_hat(xi);
            if !(1.0 - tol..=1.0 + 1e-12).contains(&v) {
                return Err(format!("B={bins}: pass band Ghat({xi}) = {v}"));
            }
            let xs = stop + 4.0 * stop * i as f64 / 1000.0;
            if g.eval_hat(xs).abs() > tol {
                return Err(format!("B={bins}: stop band Ghat({xs}) = {}", g.eval_hat(xs)));
            }
            let xt = pass + (stop - pass) * i as f64 / 1000.0;
            if !(-1e-12..=1.0 + 1e-12).contains(&g.eval_hat(xt)) {
                return Err(format!("B={bins}: transition Ghat({xt}) = {}", g.eval_hat(xt)));
            }
            if (g.eval_hat(xs) - g.eval_hat(-xs)).abs() > 1e-10 || (g.eval_hat(xt) - g.eval_hat(-xt)).abs() > 1e-10 {
                return Err(format!("B={bins}: Ghat not even"));
            }
        }
    }
    Ok(())
}

/// `G` is exactly zero outside `[-l s1g / 2, l s1g / 2]`, nonzero just inside,
/// the taps cover the support, and `max |G|` is finite.
pub fn g_support_suite() -> Check {
    for bins in [4, 8, 16, 64] {
        let g = default_g(bins);
        let w = g.support_half_width();
        if (w - g.l as f64 * g.s1g / 2.0).abs() > 1e-9 {
            return Err(format!("B={bins}: support half width {w}"));
        }
        for i in 0..1000 {
            let t = w * (1.0 + 1e-12) + i as f64 * 0.37;
            if g.eval(t) != 0.0 || g.eval(-t) != 0.0 {
                return Err(format!("B={bins}: G({t}) nonzero outside the support"));
            }
        }
        if g.eval(w * 0.999) == 0.0 {
            return Err(format!("B={bins}: G vanishes inside the support"));
        }
        if (g.len() as f64) < 2.0 * w {
            return Err(format!("B={bins}: {} taps do not cover the support", g.len()));
        }
        let max = g.taps().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !max.is_finite() || max > 1.0 {
            return Err(format!("B={bins}: max |G| = {max}"));
        }
    }
    Ok(())
}

/// Quadrature transform of `G` against `Ghat` at 20 frequencies, to `1e-4`.
pub fn g_fourier_pair_suite() -> Check {
    let g = default_g(16);
    let w = g.support_half_width();
    let spec = QuadratureSpec::with_points(200_001);
    let mut r = rng(66);
    for _ in 0..20 {
        let xi: f64 = r.random_range(-3.0 * g.stop_edge()..3.0 * g.stop_edge());
        let re = sparse_tone::quadrature::simpson(&spec, -w, w, |t| g.eval(t) * (std::f64::consts::TAU * xi * t).cos());
        let want = g.eval_hat(xi);
        if (re - want).abs() > 1e-4 {
            return Err(format!("xi={xi}: quadrature {re} vs Ghat {want}"));
        }
    }
    Ok(())
}

/// Periodized response: unit at the bin center, periodic in `f` with period
/// `1/sigma`, pass/stop contract over a 1000-point grid.
pub fn g_periodic_suite() -> Check {
    let g = default_g(16);
    let tol = g.tolerance();
    let bins = g.bins as f64;
    let mut r = rng(67);
    for _ in 0..20 {
        let sigma = r.random_range(0.001..0.01);
        let b = r.random_range(-100.0..100.0);
        let j = r.random_range(0..g.bins);
        let center = b + j as f64 / (bins * sigma);
        let v = g.eval_hat_periodic(sigma, b, j, center);
        if (v - 1.0).abs() > tol {
            return Err(format!("bin center response {v}"));
        }
        for i in 0..1000 {
            let f = b + i as f64 / (1000.0 * sigma);
            let v = g.eval_hat_periodic(sigma, b, j, f);
            if (v - g.eval_hat_periodic(sigma, b, j, f + 1.0 / sigma)).abs() > 1e-10 {
                return Err(format!("not periodic at f={f}"));
            }
            let x = j as f64 / bins - sigma * (f - b);
            let dist = (x - x.round()).abs();
            if dist <= g.pass_edge() && !(1.0 - tol..=1.0 + tol).contains(&v) {
                return Err(format!("pass band response {v} at offset {dist}"));
            }
            if dist >= 1.0 / bins && v.abs() > 2.0 * tol {
                return Err(format!("stop band response {v} at offset {dist}"));
            }
        }
    }
    Ok(())
}
