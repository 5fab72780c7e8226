//! Mixed exponential-times-polynomial signal models.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::Polynomial;
use crate::quadrature::QuadratureSpec;
use crate::real::Real;
use crate::signal::norm_t;

/// One carrier `exp(2 pi i f t)` times its envelope polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelTerm<S> {
    #[serde(rename = "f")]
    pub freq: S,
    pub poly: Polynomial<S>,
}

/// `x(t) = sum_i exp(2 pi i f_i t) P_i(t)` on `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedBasisModel<S> {
    #[serde(rename = "T")]
    pub t_len: S,
    pub terms: Vec<ModelTerm<S>>,
}

impl<S: Real> MixedBasisModel<S> {
    pub fn new(t_len: S, terms: Vec<ModelTerm<S>>) -> Self {
        Self { t_len, terms }
    }

    /// Single-carrier model.
    pub fn single(t_len: S, freq: S, poly: Polynomial<S>) -> Self {
        Self::new(t_len, vec![ModelTerm { freq, poly }])
    }

    pub fn eval(&self, t: S) -> Complex<S> {
        self.terms.iter().fold(Complex::zero(), |acc, term| {
            acc + term.poly.eval(t) * (term.freq * t).cis2pi()
        })
    }

    pub fn freqs(&self) -> Vec<S> {
        self.terms.iter().map(|t| t.freq).collect()
    }

    /// Largest envelope degree.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.poly.degree()).max().unwrap_or(0)
    }

    /// Number of fitted coefficients.
    pub fn param_count(&self) -> usize {
        self.terms.iter().map(|t| t.poly.coeffs().len()).sum()
    }

    /// `||model - truth||_T` by quadrature.
    pub fn distance_t(&self, truth: impl Fn(S) -> Complex<S>, quad: &QuadratureSpec) -> Result<S> {
        norm_t(|t| self.eval(t) - truth(t), self.t_len, quad)
    }
}
