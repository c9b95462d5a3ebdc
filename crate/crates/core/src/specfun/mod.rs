//! Special functions and the quadrature behind every expectation over the
//! channel-estimate distribution.

mod chi2;
mod e1;
mod quadrature;

pub use chi2::noncentral_chi2_cdf;
pub use e1::{exp_integral_e1, exp_scaled_e1, EULER_GAMMA};
pub use quadrature::{
    expect_exponential, Expectation, QuadratureRule, DEFAULT_ORDER, DEFAULT_TOLERANCE,
};
