//! Edge-biased partitions of `[-1, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};
use crate::real::Real;

/// Intervals tiling `[-1, 1]` with weights `|I_j| / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalPartition<S> {
    pub intervals: Vec<(S, S)>,
    pub weights: Vec<S>,
    pub m: usize,
}

impl<S: Real> IntervalPartition<S> {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of steps taken on each side before the edge cap.
    pub fn steps_per_side(&self) -> usize {
        (self.len() - 2) / 2
    }
}

/// Partition density `m = ceil(10 max(d, 1) / eps)`.
pub fn density(d: usize, eps: f64) -> usize {
    (10.0 * d.max(1) as f64 / eps).ceil() as usize
}

/// Steps `y_{i+1} = y_i + sqrt(1 - y_i^2) / m` from 0 while `y_i <= 1 - 9/m^2`,
/// mirrors them, and caps both ends.
///
/// `eps` controls the density; values above 1 give coarser partitions
/// than the classical range.
pub fn generate_intervals<S: Real>(d: usize, eps: f64) -> Result<IntervalPartition<S>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return config_err(format!("eps must be positive, got {eps}"));
    }
    let m = density(d, eps);
    let mf = m as f64;
    let guard = 1.0 - 9.0 / (mf * mf);
    let mut ys = vec![0.0f64];
    let mut y = 0.0f64;
    while y <= guard {
        y += (1.0 - y * y).max(0.0).sqrt() / mf;
        ys.push(y);
    }
    let last = *ys.last().unwrap();
    let mut right: Vec<(f64, f64)> = ys.windows(2).map(|w| (w[0], w[1])).collect();
    if last < 1.0 {
        right.push((last, 1.0));
    } else if let Some(r) = right.last_mut() {
        r.1 = 1.0;
    }
    let mut intervals: Vec<(S, S)> = right.iter().rev().map(|&(a, b)| (S::lit(-b), S::lit(-a))).collect();
    intervals.extend(right.iter().map(|&(a, b)| (S::lit(a), S::lit(b))));
    let weights = intervals.iter().map(|&(a, b)| (b - a) * S::lit(0.5)).collect();
    Ok(IntervalPartition { intervals, weights, m })
}
