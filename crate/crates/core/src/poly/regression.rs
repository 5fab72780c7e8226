//! Weighted linear least squares.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{lstsq, CMatrix, RankPolicy};
use crate::real::Real;

/// A weighted observation `(t, value, weight)`.
pub type WeightedSample<S> = (S, Complex<S>, S);

/// Relative pivot threshold for rank decisions.
pub fn default_rcond<S: Real>(cols: usize) -> S {
    S::epsilon() * S::lit(100.0 * cols.max(1) as f64)
}

/// Minimizes `sum_i w_i |row(t_i) . c - b_i|^2`.
///
/// `design(t, row)` fills the basis row at `t`.
pub fn weighted_least_squares<S: Real>(
    design: impl Fn(S, &mut [Complex<S>]),
    cols: usize,
    samples: &[WeightedSample<S>],
) -> Result<Vec<Complex<S>>> {
    if samples.len() < cols {
        return Err(Error::SingularDesign(format!(
            "{} samples for {cols} coefficients",
            samples.len()
        )));
    }
    if let Some(s) = samples.iter().find(|s| !(s.2 > S::zero())) {
        return Err(Error::Config(format!("weights must be positive, got {}", s.2)));
    }
    let a = CMatrix::from_rows(samples.len(), cols, |i, row| {
        let (t, _, w) = samples[i];
        design(t, row);
        let sw = w.sqrt();
        for z in row.iter_mut() {
            *z = *z * sw;
        }
    });
    let b: Vec<Complex<S>> = samples.iter().map(|&(_, v, w)| v * w.sqrt()).collect();
    Ok(lstsq(&a, &b, default_rcond(cols), RankPolicy::Strict)?.x)
}
