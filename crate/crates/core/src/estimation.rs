//! Pilot-based channel estimation.
//!
//! Two training scenarios are supported. With [`Scenario::PilotOnly`] the
//! receiver observes `y = H·x + z` and the least-squares (ML) estimate has
//! error variance `σ_Z²/(N·P_T)`. With [`Scenario::PilotPlusState`] the known
//! interference rides on the pilots, `y = H·(x + s) + z`; the transmitter
//! pre-cancels the sample mean of `s`, keeping `(1-Δ)·P_T` of useful pilot
//! power, and fails (sends nothing) when the cancellation would exceed the
//! pilot power budget.

use num_complex::Complex64;

use crate::error::{check_positive, check_unit_interval, Error, Result};
use crate::specfun::noncentral_chi2_cdf;

/// Largest training length searched before giving up.
pub const MAX_TRAINING_LENGTH: u64 = 1_000_000_000;

/// Powers of the fading channel `Y = H(X + S) + Z`, all linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// σ_h², variance of the circularly-symmetric Gaussian channel gain.
    pub fading_var: f64,
    /// σ_Z², additive noise variance.
    pub noise_var: f64,
    /// P̄, average input power.
    pub input_power: f64,
    /// Q, power of the interfering state known at the transmitter.
    pub state_power: f64,
}

impl ChannelParams {
    /// `noise_var` may be zero (noiseless oracles); every other power must be
    /// strictly positive.
    pub fn new(fading_var: f64, noise_var: f64, input_power: f64, state_power: f64) -> Result<Self> {
        check_positive("fading_var", fading_var)?;
        check_positive("input_power", input_power)?;
        check_positive("state_power", state_power)?;
        if !(noise_var.is_finite() && noise_var >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "noise_var",
                value: noise_var,
                reason: "must be finite and non-negative",
            });
        }
        Ok(Self {
            fading_var,
            noise_var,
            input_power,
            state_power,
        })
    }

    /// Unit fading and noise variance, `P̄ = 10^{snr_db/10}` and
    /// `Q = P̄·10^{q_over_p_db/10}`.
    pub fn from_snr_db(snr_db: f64, q_over_p_db: f64) -> Result<Self> {
        let input_power = crate::db_to_linear(snr_db);
        Self::new(1.0, 1.0, input_power, input_power * crate::db_to_linear(q_over_p_db))
    }

    pub fn snr(&self) -> f64 {
        self.input_power / self.noise_var
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Pilots are sent without the state; `Δ` is fixed at zero.
    PilotOnly,
    /// The state is superimposed on the pilots and pre-cancelled.
    PilotPlusState {
        /// Δ ∈ [0, 1): fraction of pilot power given up to cancellation.
        reduction: f64,
        /// γ ∈ (0, 1): tolerated probability of a training failure.
        failure_tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingConfig {
    /// N, number of pilot symbols.
    pub length: u64,
    /// P_T, average pilot power.
    pub pilot_power: f64,
    pub scenario: Scenario,
}

impl TrainingConfig {
    pub fn pilot_only(length: u64, pilot_power: f64) -> Result<Self> {
        check_length(length)?;
        check_positive("pilot_power", pilot_power)?;
        Ok(Self {
            length,
            pilot_power,
            scenario: Scenario::PilotOnly,
        })
    }

    pub fn pilot_plus_state(
        length: u64,
        pilot_power: f64,
        reduction: f64,
        failure_tolerance: f64,
    ) -> Result<Self> {
        check_length(length)?;
        check_positive("pilot_power", pilot_power)?;
        check_unit_interval("reduction", reduction, true)?;
        check_unit_interval("failure_tolerance", failure_tolerance, false)?;
        Ok(Self {
            length,
            pilot_power,
            scenario: Scenario::PilotPlusState {
                reduction,
                failure_tolerance,
            },
        })
    }

    /// Δ, zero for [`Scenario::PilotOnly`].
    pub fn reduction(&self) -> f64 {
        match self.scenario {
            Scenario::PilotOnly => 0.0,
            Scenario::PilotPlusState { reduction, .. } => reduction,
        }
    }

    /// Pilot amplitude the receiver normalises by: `√((1-Δ)·P_T)`.
    pub fn target_amplitude(&self) -> f64 {
        ((1.0 - self.reduction()) * self.pilot_power).sqrt()
    }
}

fn check_length(length: u64) -> Result<()> {
    if length == 0 {
        return Err(Error::InvalidParameter {
            name: "length",
            value: 0.0,
            reason: "training needs at least one pilot symbol",
        });
    }
    Ok(())
}

/// Quality of a channel estimate `Ĥ = H + E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationQuality {
    /// σ_E², variance of the estimation error.
    pub error_var: f64,
    /// δ = σ_h²/(σ_h² + σ_E²), the posterior shrinkage of `Ĥ`.
    pub shrinkage: f64,
    /// Effective training SNR, `1/σ_E²`.
    pub training_snr: f64,
}

impl EstimationQuality {
    pub fn from_error_var(error_var: f64, fading_var: f64) -> Result<Self> {
        if !(error_var.is_finite() && error_var >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "error_var",
                value: error_var,
                reason: "must be finite and non-negative",
            });
        }
        check_positive("fading_var", fading_var)?;
        Ok(Self {
            error_var,
            shrinkage: fading_var / (fading_var + error_var),
            training_snr: 1.0 / error_var,
        })
    }

    /// Noiseless estimate: `σ_E² = 0`, `δ = 1`.
    pub fn perfect() -> Self {
        Self {
            error_var: 0.0,
            shrinkage: 1.0,
            training_snr: f64::INFINITY,
        }
    }
}

/// `SNR_T = N·P_T/σ_Z²`, `σ_E² = 1/SNR_T`.
pub fn ml_estimation_quality(cfg: &TrainingConfig, ch: &ChannelParams) -> Result<EstimationQuality> {
    if cfg.scenario != Scenario::PilotOnly {
        return Err(Error::Degenerate(
            "ml_estimation_quality expects a pilot-only training configuration",
        ));
    }
    quality_for_power(cfg.length, cfg.pilot_power, ch)
}

/// `SNR_{T,Δ} = N·(1-Δ)·P_T/σ_Z²`, i.e. `σ_E²/(1-Δ)` of the pilot-only case.
pub fn scenario2_estimation_quality(
    cfg: &TrainingConfig,
    ch: &ChannelParams,
) -> Result<EstimationQuality> {
    match cfg.scenario {
        Scenario::PilotPlusState { reduction, .. } => {
            if reduction >= 1.0 {
                return Err(Error::Degenerate("Δ = 1 leaves no pilot power"));
            }
            quality_for_power(cfg.length, (1.0 - reduction) * cfg.pilot_power, ch)
        }
        Scenario::PilotOnly => Err(Error::Degenerate(
            "scenario2_estimation_quality expects a pilot-plus-state configuration",
        )),
    }
}

/// Dispatches on the configured scenario.
pub fn estimation_quality(cfg: &TrainingConfig, ch: &ChannelParams) -> Result<EstimationQuality> {
    match cfg.scenario {
        Scenario::PilotOnly => ml_estimation_quality(cfg, ch),
        Scenario::PilotPlusState { .. } => scenario2_estimation_quality(cfg, ch),
    }
}

fn quality_for_power(length: u64, useful_power: f64, ch: &ChannelParams) -> Result<EstimationQuality> {
    let energy = length as f64 * useful_power;
    EstimationQuality::from_error_var(ch.noise_var / energy, ch.fading_var)
}

/// η = 1/(N(1-Δ)): estimation-error variance relative to the noise.
pub fn noise_reduction_factor(length: u64, reduction: f64) -> Result<f64> {
    check_length(length)?;
    if reduction >= 1.0 {
        return Err(Error::Degenerate("Δ = 1 leaves no pilot power"));
    }
    check_unit_interval("reduction", reduction, true)?;
    Ok(1.0 / (length as f64 * (1.0 - reduction)))
}

/// Whether the cancelling pilot `√((1-Δ)P_T) - ⟨s_T⟩` fits the power budget.
pub fn training_succeeds(state_mean: Complex64, cfg: &TrainingConfig) -> bool {
    let symbol = Complex64::new(cfg.target_amplitude(), 0.0) - state_mean;
    // A pilot that exactly meets the budget must not fail on the last ulp.
    symbol.norm_sqr() <= cfg.pilot_power * (1.0 + 4.0 * f64::EPSILON)
}

/// Constant pilot symbol that pre-cancels the state's sample mean, or zero
/// when that would need more than `P_T` per symbol.
pub fn optimal_training_symbol(state_mean: Complex64, cfg: &TrainingConfig) -> Complex64 {
    if training_succeeds(state_mean, cfg) {
        Complex64::new(cfg.target_amplitude(), 0.0) - state_mean
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Probability over `s_T ~ CN(0, Q)ᴺ` that the cancelling pilot fits the
/// budget. `2N|x₀|²/Q` is non-central χ² with two degrees of freedom and
/// non-centrality `2N(1-Δ)P_T/Q`, evaluated at `r = 2N·P_T/Q`.
pub fn training_success_probability(
    length: u64,
    reduction: f64,
    pilot_power: f64,
    state_power: f64,
) -> Result<f64> {
    check_length(length)?;
    check_unit_interval("reduction", reduction, true)?;
    check_positive("pilot_power", pilot_power)?;
    check_positive("state_power", state_power)?;
    let scale = 2.0 * length as f64 * pilot_power / state_power;
    noncentral_chi2_cdf(scale, scale * (1.0 - reduction))
}

/// Smallest `N` with training success probability at least `1 - γ`.
///
/// Exponential bracketing then integer bisection; relies on the success
/// probability being nondecreasing in `N`.
pub fn required_training_length(
    reduction: f64,
    failure_tolerance: f64,
    pilot_power: f64,
    state_power: f64,
) -> Result<u64> {
    check_unit_interval("reduction", reduction, true)?;
    check_unit_interval("failure_tolerance", failure_tolerance, false)?;
    check_positive("pilot_power", pilot_power)?;
    check_positive("state_power", state_power)?;
    smallest_length(1, |n| {
        training_success_probability(n, reduction, pilot_power, state_power)
            .map(|p| p >= 1.0 - failure_tolerance)
    })
}

/// Smallest `Δ ∈ [0, 1)` for which `N` pilots meet the failure tolerance,
/// to an absolute tolerance of 1e-9. `None` when no `Δ < 1` works.
///
/// A smaller `Δ` keeps more pilot power and thus a smaller η, so the
/// smallest feasible reduction is the useful one.
pub fn achievable_delta(
    length: u64,
    failure_tolerance: f64,
    pilot_power: f64,
    state_power: f64,
) -> Result<Option<f64>> {
    const TOLERANCE: f64 = 1e-9;
    check_unit_interval("failure_tolerance", failure_tolerance, false)?;
    let feasible = |reduction: f64| {
        training_success_probability(length, reduction, pilot_power, state_power)
            .map(|p| p >= 1.0 - failure_tolerance)
    };
    if feasible(0.0)? {
        return Ok(Some(0.0));
    }
    let mut hi = 1.0 - TOLERANCE;
    if !feasible(hi)? {
        return Ok(None);
    }
    let mut lo = 0.0;
    while hi - lo > TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Outcome of a training design for a target noise reduction factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingDesign {
    pub length: u64,
    pub reduction: f64,
    pub eta: f64,
}

/// Shortest training reaching noise reduction factor `eta` with failure
/// probability at most `γ`.
///
/// Fixing `N(1-Δ) = 1/η` fixes the non-centrality, so success probability
/// grows with `N` and the search is a plain bracketing bisection.
pub fn training_length_for_eta(
    eta: f64,
    failure_tolerance: f64,
    pilot_power: f64,
    state_power: f64,
) -> Result<TrainingDesign> {
    check_positive("eta", eta)?;
    check_unit_interval("failure_tolerance", failure_tolerance, false)?;
    check_positive("pilot_power", pilot_power)?;
    check_positive("state_power", state_power)?;
    let effective = 1.0 / eta;
    let first = (effective.ceil() as u64).max(1);
    let length = smallest_length(first, |n| {
        let reduction = 1.0 - effective / n as f64;
        training_success_probability(n, reduction.max(0.0), pilot_power, state_power)
            .map(|p| p >= 1.0 - failure_tolerance)
    })?;
    Ok(TrainingDesign {
        length,
        reduction: (1.0 - effective / length as f64).max(0.0),
        eta,
    })
}

fn smallest_length(first: u64, mut ok: impl FnMut(u64) -> Result<bool>) -> Result<u64> {
    if first > MAX_TRAINING_LENGTH {
        return Err(Error::Unsatisfiable {
            limit: MAX_TRAINING_LENGTH,
        });
    }
    if ok(first)? {
        return Ok(first);
    }
    let mut lo = first;
    let mut hi = first;
    loop {
        if hi >= MAX_TRAINING_LENGTH {
            return Err(Error::Unsatisfiable {
                limit: MAX_TRAINING_LENGTH,
            });
        }
        hi = (hi * 2).min(MAX_TRAINING_LENGTH);
        if ok(hi)? {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Posterior of `H` given `Ĥ` is `CN(δĤ, δσ_E²)`; returns `(δ, δσ_E²)`.
pub fn posterior_params(ch: &ChannelParams, q: &EstimationQuality) -> (f64, f64) {
    let shrinkage = ch.fading_var / (ch.fading_var + q.error_var);
    (shrinkage, shrinkage * q.error_var)
}

/// Least-squares channel estimate `(xᴴy)/(xᴴx)`.
pub fn ml_estimate(pilots: &[Complex64], observations: &[Complex64]) -> Result<Complex64> {
    if pilots.len() != observations.len() {
        return Err(Error::Degenerate("pilot and observation lengths differ"));
    }
    let energy: f64 = pilots.iter().map(|x| x.norm_sqr()).sum();
    if energy == 0.0 {
        return Err(Error::Degenerate("all pilots are zero"));
    }
    let correlation: Complex64 = pilots
        .iter()
        .zip(observations)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(correlation / energy)
}

/// Mean estimator for pilot-plus-state training: `⟨y_T⟩/√((1-Δ)P_T)`.
///
/// With a successful cancelling pilot `⟨x_T⟩ + ⟨s_T⟩ = √((1-Δ)P_T)`, so the
/// error is `⟨z_T⟩/√((1-Δ)P_T)` with variance `σ_Z²/(N(1-Δ)P_T)`.
pub fn mean_estimate(observations: &[Complex64], reduction: f64, pilot_power: f64) -> Result<Complex64> {
    if observations.is_empty() {
        return Err(Error::Degenerate("no observations"));
    }
    if reduction >= 1.0 {
        return Err(Error::Degenerate("Δ = 1 leaves no pilot power"));
    }
    check_unit_interval("reduction", reduction, true)?;
    check_positive("pilot_power", pilot_power)?;
    let mean: Complex64 = observations.iter().sum::<Complex64>() / observations.len() as f64;
    Ok(mean / ((1.0 - reduction) * pilot_power).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_channel() -> ChannelParams {
        ChannelParams::new(1.0, 1.0, 1.0, 100.0).unwrap()
    }

    #[test]
    fn pilot_only_quality() {
        let cfg = TrainingConfig::pilot_only(10, 1.0).unwrap();
        let q = ml_estimation_quality(&cfg, &unit_channel()).unwrap();
        assert!((q.error_var - 0.1).abs() < 1e-15);
        assert!((q.training_snr - 10.0).abs() < 1e-12);
        assert!((q.shrinkage - 1.0 / 1.1).abs() < 1e-15);
    }

    #[test]
    fn long_training_approaches_perfect_estimate() {
        let cfg = TrainingConfig::pilot_only(1 << 40, 1.0).unwrap();
        let q = ml_estimation_quality(&cfg, &unit_channel()).unwrap();
        assert!(q.error_var < 1e-12);
        assert!(1.0 - q.shrinkage < 1e-12);
    }

    #[test]
    fn scenario_mismatch_is_rejected() {
        let only = TrainingConfig::pilot_only(10, 1.0).unwrap();
        let plus = TrainingConfig::pilot_plus_state(10, 1.0, 0.5, 0.01).unwrap();
        assert!(ml_estimation_quality(&plus, &unit_channel()).is_err());
        assert!(scenario2_estimation_quality(&only, &unit_channel()).is_err());
    }

    #[test]
    fn pilot_plus_state_quality() {
        let ch = unit_channel();
        let cfg = TrainingConfig::pilot_plus_state(10, 1.0, 0.5, 0.01).unwrap();
        let q = scenario2_estimation_quality(&cfg, &ch).unwrap();
        assert!((q.error_var - 0.2).abs() < 1e-15);

        let no_loss = TrainingConfig::pilot_plus_state(10, 1.0, 0.0, 0.01).unwrap();
        let reference = ml_estimation_quality(&TrainingConfig::pilot_only(10, 1.0).unwrap(), &ch).unwrap();
        assert_eq!(scenario2_estimation_quality(&no_loss, &ch).unwrap(), reference);
    }

    #[test]
    fn invalid_configs() {
        assert!(TrainingConfig::pilot_only(0, 1.0).is_err());
        assert!(TrainingConfig::pilot_only(1, 0.0).is_err());
        assert!(TrainingConfig::pilot_plus_state(1, 1.0, 1.0, 0.1).is_err());
        assert!(TrainingConfig::pilot_plus_state(1, 1.0, 0.1, 0.0).is_err());
        assert!(ChannelParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(1.0, 0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn noise_reduction() {
        assert_eq!(noise_reduction_factor(1, 0.0).unwrap(), 1.0);
        assert!((noise_reduction_factor(10, 0.0).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(noise_reduction_factor(10, 1.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn training_symbol_cases() {
        let cfg = TrainingConfig::pilot_plus_state(10, 2.0, 0.0, 0.01).unwrap();
        let x = optimal_training_symbol(Complex64::new(0.0, 0.0), &cfg);
        assert!((x - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-15);

        let cfg = TrainingConfig::pilot_plus_state(10, 2.0, 0.36, 0.01).unwrap();
        let exact = Complex64::new((0.64f64 * 2.0).sqrt(), 0.0);
        assert_eq!(optimal_training_symbol(exact, &cfg), Complex64::new(0.0, 0.0));
        assert!(training_succeeds(exact, &cfg));

        // |√((1-Δ)P_T) - s|² = (1.131 + 1)² > 2
        let far = Complex64::new(-1.0, 0.0);
        assert!(!training_succeeds(far, &cfg));
        assert_eq!(optimal_training_symbol(far, &cfg), Complex64::new(0.0, 0.0));
        // on the boundary the budget is met exactly
        let edge = exact - Complex64::new(0.0, 2f64.sqrt());
        assert!(training_succeeds(edge * (1.0 - 1e-12) + exact * 1e-12, &cfg));
    }

    #[test]
    fn loose_tolerance_needs_one_symbol() {
        assert_eq!(required_training_length(0.5, 1.0 - 1e-9, 1.0, 100.0).unwrap(), 1);
    }

    #[test]
    fn no_reduction_is_unsatisfiable_at_small_tolerance() {
        assert!(matches!(
            required_training_length(0.0, 1e-2, 1.0, 100.0),
            Err(Error::Unsatisfiable { .. })
        ));
    }

    #[test]
    fn achievable_delta_round_trip() {
        for n in [500u64, 800, 2000, 10_000] {
            let delta = achievable_delta(n, 1e-2, 1.0, 100.0).unwrap().unwrap();
            let n_star = required_training_length(delta, 1e-2, 1.0, 100.0).unwrap();
            assert!(n_star <= n, "N={n} Δ={delta} N*={n_star}");
        }
        assert_eq!(achievable_delta(100, 1e-2, 1.0, 100.0).unwrap(), None);
    }

    #[test]
    fn eta_design_hits_its_target() {
        let design = training_length_for_eta(0.1, 1e-2, 1.0, 100.0).unwrap();
        let eta = noise_reduction_factor(design.length, design.reduction).unwrap();
        assert!((eta - 0.1).abs() < 1e-12);
        let p = training_success_probability(design.length, design.reduction, 1.0, 100.0).unwrap();
        assert!(p >= 0.99);
        let shorter = design.length - 1;
        let p = training_success_probability(shorter, 1.0 - 10.0 / shorter as f64, 1.0, 100.0).unwrap();
        assert!(p < 0.99);
    }

    #[test]
    fn posterior_cases() {
        let ch = unit_channel();
        assert_eq!(posterior_params(&ch, &EstimationQuality::perfect()), (1.0, 0.0));
        let q = EstimationQuality::from_error_var(1.0, 1.0).unwrap();
        assert_eq!(posterior_params(&ch, &q), (0.5, 0.5));
    }

    #[test]
    fn ml_estimate_cases() {
        let h = Complex64::new(0.3, -1.2);
        let pilots = vec![Complex64::new(1.5, 0.5); 6];
        let clean: Vec<_> = pilots.iter().map(|x| h * x).collect();
        assert!((ml_estimate(&pilots, &clean).unwrap() - h).norm() < 1e-15);

        let x0 = Complex64::new(2.0, 0.0);
        let noise = [Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.0), Complex64::new(0.5, -0.1)];
        let pilots = vec![x0; 3];
        let obs: Vec<_> = noise.iter().map(|z| h * x0 + z).collect();
        let mean_noise: Complex64 = noise.iter().sum::<Complex64>() / 3.0;
        assert!((ml_estimate(&pilots, &obs).unwrap() - (h + mean_noise / x0)).norm() < 1e-15);

        assert!(ml_estimate(&[Complex64::new(0.0, 0.0)], &[h]).is_err());
        assert!(ml_estimate(&pilots, &obs[..2]).is_err());
    }

    #[test]
    fn mean_estimate_cases() {
        let h = Complex64::new(-0.7, 0.4);
        let (reduction, pilot_power) = (0.75, 4.0_f64);
        let nu = ((1.0 - reduction) * pilot_power).sqrt();
        let obs = vec![h * nu; 5];
        assert!((mean_estimate(&obs, reduction, pilot_power).unwrap() - h).norm() < 1e-15);
        let zeros = vec![Complex64::new(0.0, 0.0); 5];
        assert_eq!(mean_estimate(&zeros, reduction, pilot_power).unwrap(), Complex64::new(0.0, 0.0));
        assert!(mean_estimate(&obs, 1.0, pilot_power).is_err());
        assert!(mean_estimate(&[], 0.0, pilot_power).is_err());
    }

    proptest! {
        #[test]
        fn reduced_pilot_power_inflates_error(
            length in 1u64..10_000,
            pilot_power in 1e-3f64..1e3,
            noise_var in 1e-3f64..1e3,
            reduction in 0.0f64..0.999,
        ) {
            let ch = ChannelParams::new(1.0, noise_var, 1.0, 1.0).unwrap();
            let only = ml_estimation_quality(&TrainingConfig::pilot_only(length, pilot_power).unwrap(), &ch).unwrap();
            let plus = scenario2_estimation_quality(
                &TrainingConfig::pilot_plus_state(length, pilot_power, reduction, 0.1).unwrap(), &ch).unwrap();
            let ratio = plus.error_var / only.error_var;
            prop_assert!((ratio * (1.0 - reduction) - 1.0).abs() < 1e-12);
            prop_assert!(plus.error_var >= only.error_var);
            prop_assert!(plus.shrinkage > 0.0 && plus.shrinkage <= 1.0);
            prop_assert!((plus.error_var * plus.training_snr - 1.0).abs() < 1e-12);
        }

        #[test]
        fn required_length_monotone(gamma_lo in 1e-3f64..0.3, bump in 1.1f64..3.0, q in 10.0f64..300.0) {
            let gamma_hi = (gamma_lo * bump).min(0.9);
            let tight = required_training_length(0.5, gamma_lo, 1.0, q).unwrap();
            let loose = required_training_length(0.5, gamma_hi, 1.0, q).unwrap();
            prop_assert!(loose <= tight);
            let louder = required_training_length(0.5, gamma_lo, 1.0, q * bump).unwrap();
            prop_assert!(louder >= tight);
        }
    }
}
