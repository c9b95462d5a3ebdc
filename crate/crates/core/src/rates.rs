//! Achievable DPC rates over the composite channel seen through an imperfect
//! channel estimate.
//!
//! Given `Ĥ`, the receiver's effective channel has signal power
//! `ℙ = δ²|Ĥ|²P̄`, interference power `ℚ = δ²|Ĥ|²Q` and noise
//! `ℕ = σ_Z² + δσ_E²(P̄+Q)`; estimation error turns into extra noise that
//! scales with everything transmitted. With `U = X + αS` and Gaussian inputs
//! the per-estimate rate is `I(U;Y) - I(U;S)`, and the ergodic rates take the
//! expectation over `|Ĥ|² ~ Exp(σ_h² + σ_E²)`.
//!
//! All rates are in bits per channel use.

use std::f64::consts::LOG2_E;

use crate::error::{Error, Result};
use crate::estimation::{ChannelParams, EstimationQuality};
use crate::specfun::{exp_scaled_e1, Expectation};

/// Upper end of the α grid; the objective is attached analytically at 1.
pub const ALPHA_MAX: f64 = 1.0 - 1e-6;
const ALPHA_GRID_POINTS: usize = 1001;
const ALPHA_TOLERANCE: f64 = 1e-8;
/// Past this ρ the mean-α complement is summed asymptotically.
const MEAN_ALPHA_ASYMPTOTIC_FROM: f64 = 50.0;

/// Effective powers `(ℙ, ℚ, ℕ)` of the composite channel for one estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeTriple {
    pub signal: f64,
    pub state: f64,
    pub noise: f64,
}

/// Where an inflation parameter came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaOrigin {
    /// Per-estimate optimum, only usable with the estimate at the transmitter.
    Conditional,
    MeanAlpha,
    OptimalAlpha,
    Manual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpcPolicy {
    pub alpha: f64,
    pub origin: AlphaOrigin,
}

impl DpcPolicy {
    pub fn new(alpha: f64, origin: AlphaOrigin) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, origin })
    }

    pub fn mean(ch: &ChannelParams, q: &EstimationQuality) -> Result<Self> {
        Self::new(mean_alpha(ch, q)?, AlphaOrigin::MeanAlpha)
    }

    pub fn optimal(ch: &ChannelParams, q: &EstimationQuality) -> Result<Self> {
        Self::new(optimal_alpha(ch, q)?, AlphaOrigin::OptimalAlpha)
    }
}

/// `ρ = ℕ/(δ²P̄(σ_h²+σ_E²))`: inverse effective SNR of the estimated channel.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RhoParam(f64);

impl RhoParam {
    pub fn new(ch: &ChannelParams, q: &EstimationQuality) -> Result<Self> {
        let value = effective_noise(ch, q)
            / (q.shrinkage * q.shrinkage * ch.input_power * (ch.fading_var + q.error_var));
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::Degenerate("ρ must be positive: noiseless channel with a perfect estimate"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in [0, 1]",
        })
    }
}

/// `ℕ = σ_Z² + δσ_E²(P̄+Q)`.
pub fn effective_noise(ch: &ChannelParams, q: &EstimationQuality) -> f64 {
    ch.noise_var + q.shrinkage * q.error_var * (ch.input_power + ch.state_power)
}

pub fn composite_triple(
    est_mag_sq: f64,
    ch: &ChannelParams,
    q: &EstimationQuality,
) -> CompositeTriple {
    let gain = q.shrinkage * q.shrinkage * est_mag_sq;
    CompositeTriple {
        signal: gain * ch.input_power,
        state: gain * ch.state_power,
        noise: effective_noise(ch, q),
    }
}

/// Per-estimate optimum `ℙ/(ℙ+ℕ)`.
pub fn alpha_star_conditional(t: &CompositeTriple) -> f64 {
    if t.signal == 0.0 {
        0.0
    } else {
        t.signal / (t.signal + t.noise)
    }
}

/// `I(U;Y) = log₂((ℙ+ℚ+ℕ)(ℙ+α²ℚ) / (ℙℚ(1-α)² + ℕ(ℙ+α²ℚ)))`.
pub fn mutual_info_uy(alpha: f64, t: &CompositeTriple) -> Result<f64> {
    check_alpha(alpha)?;
    if t.signal == 0.0 && alpha == 0.0 {
        return Err(Error::Degenerate("I(U;Y) is 0/0 when ℙ = 0 and α = 0"));
    }
    let inflated = t.signal + alpha * alpha * t.state;
    let numerator = (t.signal + t.state + t.noise) * inflated;
    let denominator = t.signal * t.state * (1.0 - alpha).powi(2) + t.noise * inflated;
    Ok((numerator / denominator).log2())
}

/// `I(U;S) = log₂((ℙ+α²ℚ)/ℙ)`.
pub fn mutual_info_us(alpha: f64, t: &CompositeTriple) -> Result<f64> {
    check_alpha(alpha)?;
    if t.signal == 0.0 {
        return Err(Error::Degenerate("I(U;S) is undefined when ℙ = 0"));
    }
    Ok((alpha * alpha * t.state / t.signal).ln_1p() * LOG2_E)
}

/// `log₂(ℙ(ℙ+ℚ+ℕ) / (ℙℚ(1-α)² + ℕ(ℙ+α²ℚ)))`; negative for badly chosen α.
pub fn rate_conditional(alpha: f64, t: &CompositeTriple) -> Result<f64> {
    check_alpha(alpha)?;
    if t.signal == 0.0 {
        return Err(Error::Degenerate("conditional rate is undefined when ℙ = 0"));
    }
    Ok(conditional_rate(alpha, t))
}

pub(crate) fn conditional_rate(alpha: f64, t: &CompositeTriple) -> f64 {
    let numerator = t.signal * (t.signal + t.state + t.noise);
    let denominator = t.signal * t.state * (1.0 - alpha).powi(2)
        + t.noise * (t.signal + alpha * alpha * t.state);
    (numerator / denominator).log2()
}

/// Runs `f(triple)` under the expectation over `|Ĥ|² = t(σ_h²+σ_E²)`, `t ~ Exp(1)`.
fn expect_over_estimate<F>(ch: &ChannelParams, q: &EstimationQuality, order: usize, f: F) -> Result<f64>
where
    F: Fn(&CompositeTriple) -> f64,
{
    let spread = ch.fading_var + q.error_var;
    Expectation::new(order).expect(|t| f(&composite_triple(t * spread, ch, q)))
}

/// Ergodic rate with the estimate known at both ends: `𝔼[log₂(1 + ℙ/ℕ)]`.
pub fn capacity_txrx(ch: &ChannelParams, q: &EstimationQuality, quad_order: usize) -> Result<f64> {
    if effective_noise(ch, q) == 0.0 {
        return Err(Error::Degenerate("capacity is unbounded without noise"));
    }
    expect_over_estimate(ch, q, quad_order, |t| (t.signal / t.noise).ln_1p() * LOG2_E)
}

/// Ergodic rate of DPC with a fixed, transmitter-blind α (literal integrand,
/// negative regions included).
pub fn capacity_rx(
    alpha: f64,
    ch: &ChannelParams,
    q: &EstimationQuality,
    quad_order: usize,
) -> Result<f64> {
    check_alpha(alpha)?;
    expect_over_estimate(ch, q, quad_order, |t| conditional_rate(alpha, t))
}

/// As [`capacity_rx`] but with each conditional rate clamped at zero.
///
/// The conditional rate is negative exactly when `g = δ²|Ĥ|²` lies below
/// `g₀ = α²ℕQ / (P̄(P̄ + Q(2α-α²)))`. By memorylessness of the
/// exponential the clamped expectation is `e^{-t₀}·𝔼[f(t₀ + t)]`, which keeps
/// the integrand smooth.
pub fn capacity_rx_clamped(
    alpha: f64,
    ch: &ChannelParams,
    q: &EstimationQuality,
    quad_order: usize,
) -> Result<f64> {
    check_alpha(alpha)?;
    let noise = effective_noise(ch, q);
    let (p, s) = (ch.input_power, ch.state_power);
    let threshold_gain = alpha * alpha * noise * s / (p * (p + s * alpha * (2.0 - alpha)));
    let spread = ch.fading_var + q.error_var;
    let t0 = threshold_gain / (q.shrinkage * q.shrinkage * spread);
    let tail = Expectation::new(quad_order).expect(|t| {
        conditional_rate(alpha, &composite_triple((t + t0) * spread, ch, q)).max(0.0)
    })?;
    Ok((-t0).exp() * tail)
}

/// Capacity with the channel known perfectly at both ends,
/// `𝔼[log₂(1 + |H|²P̄/σ_Z²)]` with `|H|² ~ Exp(σ_h²)`.
pub fn perfect_csi_capacity(ch: &ChannelParams, quad_order: usize) -> Result<f64> {
    if ch.noise_var == 0.0 {
        return Err(Error::Degenerate("capacity is unbounded without noise"));
    }
    let snr = ch.fading_var * ch.input_power / ch.noise_var;
    Expectation::new(quad_order).expect(|t| (t * snr).ln_1p() * LOG2_E)
}

/// `ᾱ = 𝔼[α*(Ĥ)] = 1 - ρ e^ρ E₁(ρ)`.
pub fn mean_alpha(ch: &ChannelParams, q: &EstimationQuality) -> Result<f64> {
    let rho = RhoParam::new(ch, q)?.value();
    if rho < MEAN_ALPHA_ASYMPTOTIC_FROM {
        return Ok(1.0 - rho * exp_scaled_e1(rho)?);
    }
    // 1 - ρe^ρE₁(ρ) = Σ_{k≥1} (-1)^{k+1} k!/ρ^k, summed to its smallest term.
    let mut term = 1.0 / rho;
    let mut sum = term;
    for k in 2..200 {
        let next = -term * k as f64 / rho;
        if next.abs() >= term.abs() || next.abs() < f64::EPSILON * sum * 1e-3 {
            break;
        }
        sum += next;
        term = next;
    }
    Ok(sum)
}

/// `J(α) = log₂(P̄/Q + α²) + log₂(e)·e^z E₁(z)` with `z = ρ(P̄/Q+α²)/(1-α)²`.
///
/// `C_Rx(α)` equals a constant minus `J(α)`, so minimising `J` maximises the
/// transmitter-blind rate. At `α = 1` the second term vanishes.
pub fn optimal_alpha_objective(alpha: f64, ch: &ChannelParams, q: &EstimationQuality) -> Result<f64> {
    check_alpha(alpha)?;
    let rho = RhoParam::new(ch, q)?.value();
    Ok(objective(alpha, rho, ch.input_power / ch.state_power))
}

fn objective(alpha: f64, rho: f64, power_ratio: f64) -> f64 {
    let spread = power_ratio + alpha * alpha;
    if alpha >= 1.0 {
        return spread.log2();
    }
    let z = rho * spread / ((1.0 - alpha) * (1.0 - alpha));
    // z > 0 by construction, so the scaled E₁ is always defined.
    let tail = exp_scaled_e1(z).unwrap_or(0.0);
    spread.log2() + LOG2_E * tail
}

/// Transmitter-blind optimal α.
///
/// No closed form exists. A 1001-point grid on `[0, 1-1e-6]` (plus the
/// analytic `α = 1` limit) locates the basin, golden-section search refines
/// it to 1e-8 inside the neighbouring grid cells.
pub fn optimal_alpha(ch: &ChannelParams, q: &EstimationQuality) -> Result<f64> {
    let rho = RhoParam::new(ch, q)?.value();
    let ratio = ch.input_power / ch.state_power;
    let j = |alpha: f64| objective(alpha, rho, ratio);

    let step = ALPHA_MAX / (ALPHA_GRID_POINTS - 1) as f64;
    let (best_index, best_value) = (0..ALPHA_GRID_POINTS)
        .map(|i| (i, j(i as f64 * step)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    if j(1.0) < best_value && best_index == ALPHA_GRID_POINTS - 1 {
        return Ok(ALPHA_MAX);
    }

    let lo = best_index.saturating_sub(1) as f64 * step;
    let hi = ((best_index + 1) as f64 * step).min(ALPHA_MAX);
    let refined = golden_section_min(&j, lo, hi, ALPHA_TOLERANCE);
    let grid_alpha = best_index as f64 * step;
    Ok(if j(refined) <= best_value { refined } else { grid_alpha })
}

/// Minimum of a unimodal `f` on `[lo, hi]`.
fn golden_section_min<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tolerance: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tolerance {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Closed forms of the ergodic rates through `E₁`, independent of quadrature.
pub mod closed_form {
    use super::*;

    /// `log₂(e)·e^ρ E₁(ρ)`.
    pub fn capacity_txrx(ch: &ChannelParams, q: &EstimationQuality) -> Result<f64> {
        let rho = RhoParam::new(ch, q)?.value();
        Ok(LOG2_E * exp_scaled_e1(rho)?)
    }

    /// `log₂(P̄/Q) + log₂(e)·e^{z₁}E₁(z₁) - J(α)` with `z₁ = ρP̄/(P̄+Q)`.
    pub fn capacity_rx(alpha: f64, ch: &ChannelParams, q: &EstimationQuality) -> Result<f64> {
        check_alpha(alpha)?;
        let rho = RhoParam::new(ch, q)?.value();
        let ratio = ch.input_power / ch.state_power;
        let z1 = rho * ch.input_power / (ch.input_power + ch.state_power);
        Ok(ratio.log2() + LOG2_E * exp_scaled_e1(z1)? - objective(alpha, rho, ratio))
    }

    /// `log₂(e)·e^z E₁(z)` with `z = σ_Z²/(P̄σ_h²)`.
    pub fn perfect_csi_capacity(ch: &ChannelParams) -> Result<f64> {
        let z = ch.noise_var / (ch.input_power * ch.fading_var);
        Ok(LOG2_E * exp_scaled_e1(z)?)
    }
}
