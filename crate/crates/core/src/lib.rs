//! Achievable rates of the Rayleigh-fading dirty-paper (Costa) channel when the
//! receiver only holds a maximum-likelihood channel estimate and the
//! transmitter holds no channel information at all.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: exponential integral, non-central χ² CDF and the quadrature
//!   rules behind every expectation over the channel estimate.
//! * [`estimation`]: pilot-based channel estimation for the two training
//!   scenarios, optimal pilot design under interference and posterior
//!   statistics of the channel given its estimate.
//! * [`rates`]: composite channel parameters, conditional and ergodic DPC
//!   rates, the mean inflation parameter and the transmitter-blind optimum.
//! * [`simulate`]: seeded, schedule-independent Monte Carlo estimators used
//!   as brute-force ground truth for the closed forms.

pub mod error;
pub mod estimation;
pub mod rates;
pub mod simulate;
pub mod specfun;

pub use error::{Error, Result};
pub use estimation::{ChannelParams, EstimationQuality, Scenario, TrainingConfig};
pub use rates::{AlphaOrigin, CompositeTriple, DpcPolicy, RhoParam};
pub use simulate::{McEstimate, SimConfig};

/// Converts a power ratio in decibels to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
