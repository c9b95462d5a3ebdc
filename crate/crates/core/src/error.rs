use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} is outside the domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("no training length up to {limit} meets the failure tolerance")]
    Unsatisfiable { limit: u64 },

    #[error(
        "quadrature did not converge: orders {order} and {doubled} differ by {rel_change:e} \
         (tolerance {tolerance:e})"
    )]
    NonConvergence {
        order: usize,
        doubled: usize,
        rel_change: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be strictly positive and finite",
        })
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64, closed_low: bool) -> Result<f64> {
    let low_ok = if closed_low { value >= 0.0 } else { value > 0.0 };
    if value.is_finite() && low_ok && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: if closed_low {
                "must lie in [0, 1)"
            } else {
                "must lie in (0, 1)"
            },
        })
    }
}
