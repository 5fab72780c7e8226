//! Recovery of Fourier-sparse continuous-time signals whose tones may be arbitrarily close.
//!
//! The pipeline windows the signal with a filter `H` of compact spectral
//! support, hashes frequencies into bins with a permutation and a bin filter
//! `G`, locates one carrier per bin by multi-scale phase voting, and fits a
//! mixed basis of exponentials times polynomials by least squares.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod config;
pub mod error;
pub mod fft;
pub mod filters;
pub mod generate;
pub mod hashing;
pub mod io;
pub mod k_cluster;
pub mod linalg;
pub mod model;
pub mod noise;
pub mod one_cluster;
pub mod poly;
pub mod quadrature;
pub mod real;
pub mod signal;
pub mod spectrum;
pub mod voting;

pub use error::{Error, Result};
pub use real::Real;

pub type Tone64 = signal::Tone<f64>;
pub type Signal64 = signal::FourierSparseSignal<f64>;
pub type Source64 = signal::SignalSource<f64>;
pub type Polynomial64 = poly::Polynomial<f64>;
pub type Model64 = model::MixedBasisModel<f64>;
pub type FilterH64 = filters::FilterH<f64>;
pub type FilterG64 = filters::FilterG<f64>;
pub type HashConfig64 = hashing::HashConfig<f64>;
pub type OneClusterParams64 = one_cluster::OneClusterParams<f64>;
pub type FrequencyList64 = k_cluster::FrequencyList<f64>;
pub type RecoveryReport64 = k_cluster::RecoveryReport<f64>;
