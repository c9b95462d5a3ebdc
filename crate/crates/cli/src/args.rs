use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpc_core::specfun::DEFAULT_ORDER;

#[derive(Debug, Parser)]
#[command(name = "dpc", version, about = "Achievable rates of fading dirty-paper channels with estimated CSI")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Noise reduction factor η against training length for several failure tolerances
    Fig1(Fig1Args),
    /// Transmitter-blind optimal α and mean α against SNR
    Fig2(Fig2Args),
    /// Achievable rates against SNR for several training lengths
    Fig3(Fig3Args),
    /// Achievable rates against SNR for several state powers
    Fig4(Fig4Args),
    /// Closed forms against Monte Carlo; exits 2 on any failed check
    Validate(ValidateArgs),
    /// Training length and noise reduction for a target Δ or η
    TrainingDesign(TrainingDesignArgs),
    /// Every rate at a single operating point
    Rates(RatesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Base quadrature order; each expectation is checked against twice this order
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub quad_order: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Monte Carlo trials per point (with --mc)
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Add Monte Carlo columns next to the closed forms
    #[arg(long)]
    pub mc: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SnrSweepArgs {
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub snr_start: f64,
    #[arg(long, default_value_t = 40.0, allow_hyphen_values = true)]
    pub snr_stop: f64,
    #[arg(long, default_value_t = 91)]
    pub snr_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    /// Pilots observed without the state
    PilotOnly,
    /// Pilots observed through the state, pre-cancelled by the pilot design
    PilotPlusState,
}

#[derive(Debug, Clone, Args)]
pub struct TrainingArgs {
    #[arg(long, value_enum, default_value_t = ScenarioArg::PilotOnly)]
    pub scenario: ScenarioArg,
    /// Training power over data power P_T/P̄ in dB
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub pt_over_p_db: f64,
    /// Power reduction Δ for pilot-plus-state training; by default the
    /// smallest Δ meeting --gamma at each length
    #[arg(long)]
    pub reduction: Option<f64>,
    /// Training failure tolerance γ for pilot-plus-state training
    #[arg(long, default_value_t = 1e-2)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Fig1Args {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3])]
    pub gammas: Vec<f64>,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub q_over_pt_db: f64,
    /// Training power P_T (linear)
    #[arg(long, default_value_t = 1.0)]
    pub pt: f64,
    #[arg(long, default_value_t = 10)]
    pub n_min: u64,
    #[arg(long, default_value_t = 10_000)]
    pub n_max: u64,
    /// Log-spaced grid of this many lengths instead of the decade grid
    #[arg(long)]
    pub n_points: Option<usize>,
    /// Explicit training lengths, overriding the grid
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Args)]
pub struct Fig2Args {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub snr: SnrSweepArgs,
    #[command(flatten)]
    pub training: TrainingArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 10, 20])]
    pub ns: Vec<u64>,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub q_over_p_db: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Fig3Args {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub snr: SnrSweepArgs,
    #[command(flatten)]
    pub training: TrainingArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 10, 20])]
    pub ns: Vec<u64>,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub q_over_p_db: f64,
    /// Also report rates with negative conditional rates clamped at zero
    #[arg(long)]
    pub clamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Fig4Args {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub snr: SnrSweepArgs,
    #[command(flatten)]
    pub training: TrainingArgs,
    /// State powers Q/P̄ in dB
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [20.0, 30.0, 40.0])]
    pub q_list: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub n: u64,
    #[arg(long)]
    pub clamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub quad_order: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 200_000)]
    pub trials: u64,
    /// Acceptance band in standard errors
    #[arg(long, default_value_t = 4.0)]
    pub sigmas: f64,
    /// Relative error injected into the closed-form shrinkage (sensitivity canary)
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub perturb_shrinkage: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["delta", "eta"])))]
pub struct TrainingDesignArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Power reduction Δ; the report gives the shortest length achieving it
    #[arg(long)]
    pub delta: Option<f64>,
    /// Noise reduction target η; the report gives the shortest length achieving it
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, default_value_t = 1e-2)]
    pub gamma: f64,
    /// Training power P_T (linear)
    #[arg(long, default_value_t = 1.0)]
    pub pt: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub q_over_pt_db: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise_var: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub training: TrainingArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub q_over_p_db: f64,
    #[arg(long)]
    pub n: u64,
    /// Extra fixed inflation parameter to evaluate
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub clamp: bool,
}
