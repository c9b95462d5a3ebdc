use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Above this argument the scaled form switches to the asymptotic series.
const ASYMPTOTIC_FROM: f64 = 700.0;
const MAX_ITER: usize = 10_000;

fn check_domain(function: &'static str, z: f64) -> Result<()> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            value: z,
            expected: "finite z > 0",
        })
    }
}

/// Exponential integral `E₁(z) = ∫_z^∞ e^{-t}/t dt` for real `z > 0`.
///
/// Power series below 1, modified Lentz continued fraction above. For
/// `z` beyond roughly 745 the result underflows to zero; use
/// [`exp_scaled_e1`] when the product `e^z E₁(z)` is what is needed.
pub fn exp_integral_e1(z: f64) -> Result<f64> {
    check_domain("exp_integral_e1", z)?;
    if z < 1.0 {
        Ok(series(z))
    } else if z <= ASYMPTOTIC_FROM {
        Ok((-z).exp() * continued_fraction(z))
    } else {
        Ok((-z).exp() * asymptotic(z))
    }
}

/// `e^z · E₁(z)` without intermediate overflow.
///
/// Lies strictly between `1/(z+1)` and `1/z` and decreases monotonically.
pub fn exp_scaled_e1(z: f64) -> Result<f64> {
    check_domain("exp_scaled_e1", z)?;
    if z < 1.0 {
        Ok(z.exp() * series(z))
    } else if z <= ASYMPTOTIC_FROM {
        Ok(continued_fraction(z))
    } else {
        Ok(asymptotic(z))
    }
}

/// `-γ - ln z - Σ_{k≥1} (-z)^k / (k·k!)`, used for `0 < z < 1`.
fn series(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..MAX_ITER {
        let k = k as f64;
        term *= -z / k;
        let contribution = term / k;
        sum += contribution;
        if contribution.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Modified Lentz evaluation of
/// `e^z E₁(z) = 1/(z+1- 1/(z+3- 4/(z+5- …)))`, valid for `z ≥ 1`.
fn continued_fraction(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let i = i as f64;
        let an = -i * i;
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    h
}

/// `(1/z) Σ_k (-1)^k k! / z^k`, truncated at the smallest term.
fn asymptotic(z: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..MAX_ITER {
        let next = term * (-(k as f64) / z);
        if next.abs() >= term.abs() || next.abs() < f64::EPSILON * 1e-3 {
            break;
        }
        sum += next;
        term = next;
    }
    sum / z
}
