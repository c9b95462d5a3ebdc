//! Seeded Monte Carlo estimators, the brute-force counterpart of every
//! closed form in [`crate::rates`] and [`crate::estimation`].
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). Every trial `i` owns the
//! substream `i` of the generator keyed by the seed, so a trial's draws never
//! depend on how trials are scheduled across threads. Trials are processed in
//! fixed blocks whose partial moments are merged in block order, which makes
//! every estimate a pure function of the [`SimConfig`], bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::{
    estimation_quality, ml_estimate, mean_estimate, optimal_training_symbol, posterior_params,
    training_succeeds, ChannelParams, EstimationQuality, Scenario, TrainingConfig,
};
use crate::rates::{alpha_star_conditional, composite_triple, conditional_rate};

const BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub channel: ChannelParams,
    pub training: TrainingConfig,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64, channel: ChannelParams, training: TrainingConfig) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameter {
                name: "trials",
                value: 0.0,
                reason: "at least one trial is required",
            });
        }
        Ok(Self { trials, seed, channel, training })
    }

    pub fn with_trials(self, trials: u64) -> Result<Self> {
        Self::new(trials, self.seed, self.channel, self.training)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn quality(&self) -> Result<EstimationQuality> {
        estimation_quality(&self.training, &self.channel)
    }
}

/// Sample mean with its standard error `s/√n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl McEstimate {
    /// Distance from `reference` in standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        let diff = (self.mean - reference).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }

    pub fn within(&self, reference: f64, sigmas: f64) -> bool {
        self.z_score(reference) <= sigmas
    }
}

/// Outcome of [`simulate_training`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingStats {
    /// `E|Ĥ - H|²` over trials whose training succeeded.
    pub error_var: McEstimate,
    pub bias_re: McEstimate,
    pub bias_im: McEstimate,
    /// Trials where no admissible pilot existed.
    pub failures: u64,
    pub trials: u64,
}

impl TrainingStats {
    /// Empirical failure frequency with its binomial standard error.
    pub fn failure_rate(&self) -> McEstimate {
        let p = self.failures as f64 / self.trials as f64;
        McEstimate {
            mean: p,
            std_error: (p * (1.0 - p) / self.trials as f64).sqrt(),
            trials: self.trials,
        }
    }
}

/// Residual statistics of the posterior-mean estimator `δĤ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorStats {
    /// `E|H - δĤ|²`, to be compared with `δσ_E²`.
    pub residual_var: McEstimate,
    /// Real and imaginary parts of `E[(H - δĤ)·conj(Ĥ)]`, zero in theory.
    pub cross_re: McEstimate,
    pub cross_im: McEstimate,
    pub failures: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let weight = other.count as f64 / count as f64;
        Self {
            count,
            mean: self.mean + delta * weight,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * weight,
        }
    }

    fn estimate(self) -> McEstimate {
        let std_error = if self.count > 1 {
            (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
        } else {
            0.0
        };
        let mean = if self.count == 0 { f64::NAN } else { self.mean };
        McEstimate { mean, std_error, trials: self.count }
    }
}

struct Tally<const K: usize> {
    moments: [Moments; K],
    skipped: u64,
}

impl<const K: usize> Tally<K> {
    fn empty() -> Self {
        Self { moments: [Moments::default(); K], skipped: 0 }
    }

    fn merge(mut self, other: Self) -> Self {
        for (mine, theirs) in self.moments.iter_mut().zip(other.moments) {
            *mine = mine.merge(theirs);
        }
        self.skipped += other.skipped;
        self
    }
}

/// Runs `trial` once per trial index on its own substream; `None` marks a
/// trial excluded from the moments (counted in `skipped`).
fn run_trials<const K: usize, F>(trials: u64, seed: u64, trial: F) -> Tally<K>
where
    F: Fn(&mut ChaCha8Rng) -> Option<[f64; K]> + Sync,
{
    let base = ChaCha8Rng::seed_from_u64(seed);
    let blocks = trials.div_ceil(BLOCK);
    let partial: Vec<Tally<K>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut tally = Tally::empty();
            let end = ((block + 1) * BLOCK).min(trials);
            for index in block * BLOCK..end {
                let mut rng = base.clone();
                rng.set_stream(index);
                match trial(&mut rng) {
                    Some(values) => {
                        for (m, v) in tally.moments.iter_mut().zip(values) {
                            m.push(v);
                        }
                    }
                    None => tally.skipped += 1,
                }
            }
            tally
        })
        .collect();
    partial.into_iter().fold(Tally::empty(), Tally::merge)
}

/// Draws from `CN(0, variance)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// One full training round: returns `(H, Ĥ)`, or `None` when the state made
/// every admissible pilot impossible.
fn training_round(rng: &mut ChaCha8Rng, ch: &ChannelParams, cfg: &TrainingConfig) -> Option<(Complex64, Complex64)> {
    let n = cfg.length as usize;
    let h = complex_normal(rng, ch.fading_var);
    match cfg.scenario {
        Scenario::PilotOnly => {
            let pilot = Complex64::new(cfg.pilot_power.sqrt(), 0.0);
            let pilots = vec![pilot; n];
            let observations: Vec<Complex64> = pilots
                .iter()
                .map(|&x| h * x + complex_normal(rng, ch.noise_var))
                .collect();
            ml_estimate(&pilots, &observations).ok().map(|est| (h, est))
        }
        Scenario::PilotPlusState { reduction, .. } => {
            let states: Vec<Complex64> = (0..n).map(|_| complex_normal(rng, ch.state_power)).collect();
            let state_mean = states.iter().sum::<Complex64>() / n as f64;
            if !training_succeeds(state_mean, cfg) {
                return None;
            }
            let pilot = optimal_training_symbol(state_mean, cfg);
            let observations: Vec<Complex64> = states
                .iter()
                .map(|&s| h * (pilot + s) + complex_normal(rng, ch.noise_var))
                .collect();
            mean_estimate(&observations, reduction, cfg.pilot_power).ok().map(|est| (h, est))
        }
    }
}

/// Runs the configured training `cfg.trials` times and measures the
/// estimation error of the matching estimator.
pub fn simulate_training(cfg: &SimConfig) -> TrainingStats {
    let tally = run_trials::<3, _>(cfg.trials, cfg.seed, |rng| {
        training_round(rng, &cfg.channel, &cfg.training).map(|(h, est)| {
            let err = est - h;
            [err.norm_sqr(), err.re, err.im]
        })
    });
    let [error_var, bias_re, bias_im] = tally.moments.map(Moments::estimate);
    TrainingStats { error_var, bias_re, bias_im, failures: tally.skipped, trials: cfg.trials }
}

/// Checks the posterior mean `δĤ` of the channel given its estimate by
/// running the full training chain.
pub fn mc_posterior(cfg: &SimConfig) -> Result<PosteriorStats> {
    let (shrinkage, _) = posterior_params(&cfg.channel, &cfg.quality()?);
    let tally = run_trials::<3, _>(cfg.trials, cfg.seed, |rng| {
        training_round(rng, &cfg.channel, &cfg.training).map(|(h, est)| {
            let residual = h - est * shrinkage;
            let cross = residual * est.conj();
            [residual.norm_sqr(), cross.re, cross.im]
        })
    });
    let [residual_var, cross_re, cross_im] = tally.moments.map(Moments::estimate);
    Ok(PosteriorStats { residual_var, cross_re, cross_im, failures: tally.skipped })
}

/// Training failure frequency for [`Scenario::PilotPlusState`], drawing the
/// state mean straight from its law `CN(0, Q/N)` instead of `N` symbols.
///
/// Cheap enough for long training sequences; [`simulate_training`] is the
/// symbol-by-symbol counterpart.
pub fn mc_failure_rate(cfg: &SimConfig) -> Result<McEstimate> {
    if !matches!(cfg.training.scenario, Scenario::PilotPlusState { .. }) {
        return Err(Error::InvalidParameter {
            name: "scenario",
            value: 0.0,
            reason: "failure rate only applies to pilot-plus-state training",
        });
    }
    let mean_var = cfg.channel.state_power / cfg.training.length as f64;
    let tally = run_trials::<1, _>(cfg.trials, cfg.seed, |rng| {
        let failed = !training_succeeds(complex_normal(rng, mean_var), &cfg.training);
        Some([if failed { 1.0 } else { 0.0 }])
    });
    Ok(tally.moments[0].estimate())
}

/// Averages `f(|Ĥ|²)` over `Ĥ ~ CN(0, σ_h² + σ_E²)`.
fn mc_over_estimate<F>(cfg: &SimConfig, quality: &EstimationQuality, f: F) -> McEstimate
where
    F: Fn(f64) -> f64 + Sync,
{
    let spread = cfg.channel.fading_var + quality.error_var;
    let tally = run_trials::<1, _>(cfg.trials, cfg.seed, |rng| {
        Some([f(complex_normal(rng, spread).norm_sqr())])
    });
    tally.moments[0].estimate()
}

/// Sampling form of the transmitter-blind ergodic rate at a fixed `α`.
pub fn mc_rate(alpha: f64, cfg: &SimConfig) -> Result<McEstimate> {
    mc_rate_with(alpha, cfg, &cfg.quality()?)
}

/// As [`mc_rate`] with an explicitly supplied estimation quality.
pub fn mc_rate_with(alpha: f64, cfg: &SimConfig, quality: &EstimationQuality) -> Result<McEstimate> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter { name: "alpha", value: alpha, reason: "must lie in [0, 1]" });
    }
    let ch = cfg.channel;
    Ok(mc_over_estimate(cfg, quality, |mag_sq| {
        conditional_rate(alpha, &composite_triple(mag_sq, &ch, quality))
    }))
}

/// Sample mean of the per-estimate optimal `α`.
pub fn mc_mean_alpha(cfg: &SimConfig) -> Result<McEstimate> {
    mc_mean_alpha_with(cfg, &cfg.quality()?)
}

pub fn mc_mean_alpha_with(cfg: &SimConfig, quality: &EstimationQuality) -> Result<McEstimate> {
    let ch = cfg.channel;
    Ok(mc_over_estimate(cfg, quality, |mag_sq| {
        alpha_star_conditional(&composite_triple(mag_sq, &ch, quality))
    }))
}

/// Sampling form of the rate with the estimate known at both ends.
pub fn mc_capacity_txrx(cfg: &SimConfig) -> Result<McEstimate> {
    mc_capacity_txrx_with(cfg, &cfg.quality()?)
}

pub fn mc_capacity_txrx_with(cfg: &SimConfig, quality: &EstimationQuality) -> Result<McEstimate> {
    let ch = cfg.channel;
    Ok(mc_over_estimate(cfg, quality, |mag_sq| {
        let t = composite_triple(mag_sq, &ch, quality);
        (t.signal / t.noise).ln_1p() * std::f64::consts::LOG2_E
    }))
}

/// Sampling form of the perfect-CSI fading capacity.
pub fn mc_perfect_csi(cfg: &SimConfig) -> McEstimate {
    let snr = cfg.channel.input_power / cfg.channel.noise_var;
    mc_over_estimate(cfg, &EstimationQuality::perfect(), |mag_sq| {
        (mag_sq * snr).ln_1p() * std::f64::consts::LOG2_E
    })
}
