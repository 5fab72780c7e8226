//! Complex polynomials on an interval, in Legendre or monomial form.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::quadrature::{simpson, GaussLegendre, QuadratureSpec};
use crate::real::Real;

/// Coefficient basis; both act on the variable mapped to `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    Legendre,
}

/// `P(t) = sum_k c_k phi_k(u)` with `u = (2t - lo - hi) / (hi - lo)`.
///
/// The domain `(-1, 1)` makes `u = t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial<S> {
    coeffs: Vec<Complex<S>>,
    basis: Basis,
    domain: (S, S),
}

impl<S: Real> Polynomial<S> {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Complex<S>>, basis: Basis, domain: (S, S)) -> Self {
        assert!(domain.1 > domain.0, "empty polynomial domain");
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::zero());
        }
        Self { coeffs, basis, domain }
    }

    pub fn zero(domain: (S, S)) -> Self {
        Self::new(vec![], Basis::Legendre, domain)
    }

    pub fn constant(c: Complex<S>, domain: (S, S)) -> Self {
        Self::new(vec![c], Basis::Monomial, domain)
    }

    /// Monomial coefficients in raw `t` (domain `(-1, 1)`).
    pub fn monomial(coeffs: Vec<Complex<S>>) -> Self {
        Self::new(coeffs, Basis::Monomial, (-S::one(), S::one()))
    }

    pub fn coeffs(&self) -> &[Complex<S>] {
        &self.coeffs
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn domain(&self) -> (S, S) {
        self.domain
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Maps `t` to the reference variable `u`.
    #[inline]
    pub fn to_reference(&self, t: S) -> S {
        let (lo, hi) = self.domain;
        (t + t - lo - hi) / (hi - lo)
    }

    /// `P(t)`.
    pub fn eval(&self, t: S) -> Complex<S> {
        let u = self.to_reference(t);
        match self.basis {
            Basis::Monomial => self.coeffs.iter().rev().fold(Complex::zero(), |acc, c| acc * u + *c),
            Basis::Legendre => clenshaw_legendre(&self.coeffs, u),
        }
    }

    /// Same polynomial with monomial coefficients in `u`.
    pub fn to_monomial(&self) -> Self {
        match self.basis {
            Basis::Monomial => self.clone(),
            Basis::Legendre => {
                let n = self.coeffs.len();
                let table = legendre_monomial_table::<S>(n);
                let mut out = vec![Complex::zero(); n];
                for (k, c) in self.coeffs.iter().enumerate() {
                    for (j, a) in table[k].iter().enumerate() {
                        out[j] = out[j] + *c * *a;
                    }
                }
                Self::new(out, Basis::Monomial, self.domain)
            }
        }
    }

    /// Mean of `|P|^2` over the domain (exact for the Legendre basis).
    pub fn mean_square(&self) -> S {
        match self.basis {
            Basis::Legendre => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm_sqr() / S::lit((2 * k + 1) as f64))
                .sum(),
            Basis::Monomial => {
                let (lo, hi) = self.domain;
                // |P|^2 has degree 2d, so d + 1 nodes are exact
                let gl = GaussLegendre::new(self.coeffs.len() + 1);
                gl.integrate(lo, hi, |t| self.eval(t).norm_sqr()) / (hi - lo)
            }
        }
    }

    /// Multiplies all coefficients by `c`.
    pub fn scale(&self, c: Complex<S>) -> Self {
        Self::new(self.coeffs.iter().map(|a| *a * c).collect(), self.basis, self.domain)
    }

    /// Coefficientwise sum; both operands must share basis and domain.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis);
        assert!(self.domain == other.domain);
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Complex<S>], i: usize| v.get(i).copied().unwrap_or_else(Complex::zero);
        Self::new(
            (0..n).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect(),
            self.basis,
            self.domain,
        )
    }
}

/// Legendre polynomials `L_0..L_{n-1}` at `u`.
pub fn legendre_values<S: Real>(n: usize, u: S, out: &mut [S]) {
    if n == 0 {
        return;
    }
    out[0] = S::one();
    if n > 1 {
        out[1] = u;
    }
    for k in 1..n.saturating_sub(1) {
        let kf = S::lit(k as f64);
        out[k + 1] = ((kf + kf + S::one()) * u * out[k] - kf * out[k - 1]) / (kf + S::one());
    }
}

fn clenshaw_legendre<S: Real>(c: &[Complex<S>], u: S) -> Complex<S> {
    // b_k = c_k + alpha_k(u) b_{k+1} + beta_{k+1} b_{k+2}
    // alpha_k = (2k+1) u / (k+1), beta_k = -k / (k+1)
    let mut b1 = Complex::zero();
    let mut b2 = Complex::zero();
    for k in (0..c.len()).rev() {
        let kf = S::lit(k as f64);
        let alpha = (kf + kf + S::one()) * u / (kf + S::one());
        let beta = -(kf + S::one()) / (kf + S::lit(2.0));
        let b0 = c[k] + b1 * alpha + b2 * beta;
        b2 = b1;
        b1 = b0;
    }
    b1
}

fn legendre_monomial_table<S: Real>(n: usize) -> Vec<Vec<S>> {
    let mut table: Vec<Vec<S>> = Vec::with_capacity(n);
    for k in 0..n {
        let row = match k {
            0 => vec![S::one()],
            1 => vec![S::zero(), S::one()],
            _ => {
                let kf = S::lit((k - 1) as f64);
                let mut r = vec![S::zero(); k + 1];
                for (j, a) in table[k - 1].iter().enumerate() {
                    r[j + 1] = r[j + 1] + (kf + kf + S::one()) * *a / (kf + S::one());
                }
                for (j, a) in table[k - 2].iter().enumerate() {
                    r[j] = r[j] - kf * *a / (kf + S::one());
                }
                r
            }
        };
        table.push(row);
    }
    table
}

/// Evaluates `p` at every point.
pub fn multipoint_evaluate<S: Real>(p: &Polynomial<S>, points: &[S]) -> Vec<Complex<S>> {
    points.iter().map(|&t| p.eval(t)).collect()
}

/// Grid maximum of `|P|^2` over its mean on `[lo, hi]`; 0 for the zero polynomial.
pub fn poly_max_avg_ratio<S: Real>(p: &Polynomial<S>, interval: (S, S)) -> S {
    if p.is_zero() {
        return S::zero();
    }
    let (lo, hi) = interval;
    let quad = QuadratureSpec::with_points(1 << 14 | 1);
    let mut max = S::zero();
    let integral = simpson(&quad, lo, hi, |t| {
        let v = p.eval(t).norm_sqr();
        if v > max {
            max = v;
        }
        v
    });
    let mean = integral / (hi - lo);
    if mean == S::zero() {
        S::zero()
    } else {
        max / mean
    }
}
