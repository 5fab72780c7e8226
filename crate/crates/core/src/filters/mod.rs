//! Window filters `H` and bin filters `G`.

mod bspline;
mod g;
mod h;
mod sinc_power;

pub use bspline::cardinal_bspline;
pub use g::{build_filter_g, FilterG, GKnobs};
pub use h::{build_filter_h, FilterH, HKnobs};
pub use sinc_power::SincPowerIntegral;
