//! Robust polynomial interpolation.

mod partition;
mod polynomial;
mod regression;
mod robust;

pub use partition::{density, generate_intervals, IntervalPartition};
pub use polynomial::{legendre_values, multipoint_evaluate, poly_max_avg_ratio, Basis, Polynomial};
pub use regression::{default_rcond, weighted_least_squares, WeightedSample};
pub use robust::{
    boost_runs, complex_median, median, median_combine, robust_poly_learn, robust_poly_learn_boosted,
    robust_poly_learn_on, BoostedPolyFit, PolyFit, PolyLearnOptions,
};
