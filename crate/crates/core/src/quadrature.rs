//! Composite Simpson and Gauss-Legendre rules.

use std::ops::{Add, Mul};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Values that can be accumulated by a quadrature rule over scalar `S`.
pub trait Integrand<S>: Copy + Zero + Add<Output = Self> + Mul<S, Output = Self> {}

impl<S, V> Integrand<S> for V where V: Copy + Zero + Add<Output = V> + Mul<S, Output = V> {}

/// Uniform grid used by composite Simpson.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Number of grid points on `[0, T]`; bumped to the next odd count.
    pub points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { points: (1 << 14) + 1 }
    }
}

impl QuadratureSpec {
    pub fn with_points(points: usize) -> Self {
        Self { points }
    }

    /// Even number of Simpson panels (at least 2).
    pub fn intervals(&self) -> usize {
        let n = self.points.max(3) - 1;
        n + (n & 1)
    }

    /// Abscissae and weights on `[a, b]`.
    pub fn nodes<S: Real>(&self, a: S, b: S) -> Vec<(S, S)> {
        let n = self.intervals();
        let h = (b - a) / S::lit(n as f64);
        let third = h / S::lit(3.0);
        (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n {
                    third
                } else if i % 2 == 1 {
                    third * S::lit(4.0)
                } else {
                    third * S::lit(2.0)
                };
                (a + h * S::lit(i as f64), w)
            })
            .collect()
    }
}

/// Composite Simpson rule for `f` on `[a, b]`.
pub fn simpson<S: Real, V: Integrand<S>>(spec: &QuadratureSpec, a: S, b: S, mut f: impl FnMut(S) -> V) -> V {
    let n = spec.intervals();
    let h = (b - a) / S::lit(n as f64);
    let mut ends = f(a) + f(b);
    let mut odd = V::zero();
    let mut even = V::zero();
    for i in 1..n {
        let v = f(a + h * S::lit(i as f64));
        if i % 2 == 1 {
            odd = odd + v;
        } else {
            even = even + v;
        }
    }
    ends = ends + odd * S::lit(4.0) + even * S::lit(2.0);
    ends * (h / S::lit(3.0))
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<S> {
    nodes: Vec<S>,
    weights: Vec<S>,
}

impl<S: Real> GaussLegendre<S> {
    /// Builds an `n`-point rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self {
            nodes: nodes.into_iter().map(S::lit).collect(),
            weights: weights.into_iter().map(S::lit).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<V: Integrand<S>>(&self, a: S, b: S, mut f: impl FnMut(S) -> V) -> V {
        let half = (b - a) * S::lit(0.5);
        let mid = (a + b) * S::lit(0.5);
        let mut acc = V::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * w;
        }
        acc * half
    }

    /// Integral of `f` over `[a, b]` split into `panels` equal pieces.
    pub fn integrate_panels<V: Integrand<S>>(&self, a: S, b: S, panels: usize, mut f: impl FnMut(S) -> V) -> V {
        let panels = panels.max(1);
        let h = (b - a) / S::lit(panels as f64);
        let mut acc = V::zero();
        for p in 0..panels {
            let lo = a + h * S::lit(p as f64);
            acc = acc + self.integrate(lo, lo + h, &mut f);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
