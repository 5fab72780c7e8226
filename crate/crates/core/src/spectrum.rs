//! Brute-force spectra on a dense time grid, for tests and diagnostics.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::filters::FilterH;
use crate::quadrature::QuadratureSpec;
use crate::real::Real;
use crate::signal::SignalSource;

/// Tabulates `(f, |X(f)|^2)` where `X` is the continuous Fourier transform of
/// `src` times `window`, or of `src` restricted to `[0, T]` without a window.
///
/// With a window the integration runs over `[-T/2, 3T/2]`, where `H` has
/// decayed to negligible values. The grid in `quad` must resolve the highest
/// frequency present. Samples bypass the source counter.
pub fn dense_spectrum_oracle<S: Real>(
    src: &SignalSource<S>,
    window: Option<&FilterH<S>>,
    t_len: S,
    freqs: &[S],
    quad: &QuadratureSpec,
) -> Result<Vec<(S, S)>> {
    let (a, b) = match window {
        Some(_) => (-t_len * S::lit(0.5), t_len * S::lit(1.5)),
        None => (S::zero(), t_len),
    };
    let x = src.sampler();
    let mut grid = Vec::with_capacity(quad.points);
    for (t, w) in quad.nodes(a, b) {
        let mut v = x(t);
        if let Some(h) = window {
            v = v * h.eval_fast(t);
        }
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Numerical(format!("non-finite sample at t = {t}")));
        }
        grid.push((t, v * w));
    }
    Ok(freqs
        .iter()
        .map(|&f| {
            let acc = grid
                .iter()
                .fold(Complex::<S>::zero(), |acc, &(t, v)| acc + v * (-(f * t)).cis2pi());
            (f, acc.norm_sqr())
        })
        .collect())
}

/// Energy `int |X(f)|^2 df` over `[lo, hi]` by the trapezoid rule on a tabulated spectrum.
pub fn band_energy<S: Real>(table: &[(S, S)], lo: S, hi: S) -> S {
    table
        .windows(2)
        .filter(|w| w[0].0 >= lo && w[1].0 <= hi)
        .fold(S::zero(), |acc, w| {
            acc + (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * S::lit(0.5)
        })
}
