//! Operating points: channel, training and the resulting estimate quality,
//! plus the single-point commands.

use anyhow::Result;
use dpc_core::estimation::{
    achievable_delta, estimation_quality, required_training_length, training_length_for_eta,
    training_success_probability, ChannelParams, EstimationQuality, TrainingConfig,
};
use dpc_core::rates::{
    capacity_rx, capacity_rx_clamped, capacity_txrx, mean_alpha, optimal_alpha, perfect_csi_capacity,
};
use dpc_core::simulate::{mc_capacity_txrx, mc_mean_alpha, mc_perfect_csi, mc_rate, McEstimate, SimConfig};
use dpc_core::db_to_linear;

use crate::args::{CommonArgs, RatesArgs, ScenarioArg, TrainingArgs, TrainingDesignArgs};
use crate::table::{Cell, Table};
use crate::UsageError;

#[derive(Debug, Clone, Copy)]
pub struct OperatingPoint {
    pub channel: ChannelParams,
    pub training: TrainingConfig,
    pub quality: EstimationQuality,
}

impl OperatingPoint {
    /// `None` when pilot-plus-state training cannot meet γ at this length.
    pub fn new(snr_db: f64, q_over_p_db: f64, length: u64, args: &TrainingArgs) -> Result<Option<Self>> {
        let channel = ChannelParams::from_snr_db(snr_db, q_over_p_db)?;
        let pilot_power = channel.input_power * db_to_linear(args.pt_over_p_db);
        let training = match args.scenario {
            ScenarioArg::PilotOnly => TrainingConfig::pilot_only(length, pilot_power)?,
            ScenarioArg::PilotPlusState => {
                let reduction = match args.reduction {
                    Some(reduction) => reduction,
                    None => match achievable_delta(length, args.gamma, pilot_power, channel.state_power)? {
                        Some(reduction) => reduction,
                        None => return Ok(None),
                    },
                };
                TrainingConfig::pilot_plus_state(length, pilot_power, reduction, args.gamma)?
            }
        };
        let quality = estimation_quality(&training, &channel)?;
        Ok(Some(Self { channel, training, quality }))
    }

    pub fn sim(&self, common: &CommonArgs) -> Result<SimConfig> {
        Ok(SimConfig::new(common.trials, common.seed, self.channel, self.training)?)
    }
}

/// Closed-form rates at one operating point.
#[derive(Debug, Clone, Copy)]
pub struct PointRates {
    pub alpha_star: f64,
    pub alpha_mean: f64,
    pub perfect_csi: f64,
    pub c_txrx: f64,
    pub c_rx_opt: f64,
    pub c_rx_mean: f64,
}

impl PointRates {
    pub fn compute(p: &OperatingPoint, quad_order: usize) -> Result<Self> {
        let (ch, q) = (&p.channel, &p.quality);
        let alpha_star = optimal_alpha(ch, q)?;
        let alpha_mean = mean_alpha(ch, q)?;
        Ok(Self {
            alpha_star,
            alpha_mean,
            perfect_csi: perfect_csi_capacity(ch, quad_order)?,
            c_txrx: capacity_txrx(ch, q, quad_order)?,
            c_rx_opt: capacity_rx(alpha_star, ch, q, quad_order)?,
            c_rx_mean: capacity_rx(alpha_mean, ch, q, quad_order)?,
        })
    }

    /// `(c_rx_opt, c_rx_mean)` with negative conditional rates clamped.
    pub fn clamped(&self, p: &OperatingPoint, quad_order: usize) -> Result<(f64, f64)> {
        Ok((
            capacity_rx_clamped(self.alpha_star, &p.channel, &p.quality, quad_order)?,
            capacity_rx_clamped(self.alpha_mean, &p.channel, &p.quality, quad_order)?,
        ))
    }
}

/// Monte Carlo counterparts of [`PointRates`].
#[derive(Debug, Clone, Copy)]
pub struct PointMc {
    pub alpha_mean: McEstimate,
    pub perfect_csi: McEstimate,
    pub c_txrx: McEstimate,
    pub c_rx_opt: McEstimate,
    pub c_rx_mean: McEstimate,
}

impl PointMc {
    pub fn compute(p: &OperatingPoint, rates: &PointRates, common: &CommonArgs) -> Result<Self> {
        let cfg = p.sim(common)?;
        Ok(Self {
            alpha_mean: mc_mean_alpha(&cfg)?,
            perfect_csi: mc_perfect_csi(&cfg),
            c_txrx: mc_capacity_txrx(&cfg)?,
            c_rx_opt: mc_rate(rates.alpha_star, &cfg)?,
            c_rx_mean: mc_rate(rates.alpha_mean, &cfg)?,
        })
    }
}

pub fn mc_cells(estimate: &McEstimate) -> [Cell; 2] {
    [Cell::Real(estimate.mean), Cell::Real(estimate.std_error)]
}

pub fn training_design(args: &TrainingDesignArgs) -> Result<Table> {
    let state_power = args.pt * db_to_linear(args.q_over_pt_db);
    let (length, reduction) = match (args.delta, args.eta) {
        (Some(delta), None) => (required_training_length(delta, args.gamma, args.pt, state_power)?, delta),
        (None, Some(eta)) => {
            let design = training_length_for_eta(eta, args.gamma, args.pt, state_power)?;
            (design.length, design.reduction)
        }
        _ => return Err(UsageError("give exactly one of --delta or --eta".into()).into()),
    };
    if !(args.noise_var.is_finite() && args.noise_var >= 0.0) {
        return Err(UsageError(format!("--noise-var must be nonnegative, got {}", args.noise_var)).into());
    }
    let eta = 1.0 / (length as f64 * (1.0 - reduction));
    let error_var = args.noise_var / (length as f64 * args.pt);
    let success = training_success_probability(length, reduction, args.pt, state_power)?;

    let mut table = Table::new(
        [
            "n_star",
            "delta",
            "eta",
            "error_var_pilot_only",
            "error_var_pilot_plus_state",
            "success_probability",
            "n_pilot_only_same_eta",
        ]
        .map(String::from)
        .to_vec(),
    );
    table.push(vec![
        Cell::Int(length),
        Cell::Real(reduction),
        Cell::Real(eta),
        Cell::Real(error_var),
        Cell::Real(error_var / (1.0 - reduction)),
        Cell::Real(success),
        Cell::Int((1.0 / eta - 1e-9).ceil() as u64),
    ]);
    Ok(table)
}

pub fn rates(args: &RatesArgs) -> Result<Table> {
    let point = OperatingPoint::new(args.snr_db, args.q_over_p_db, args.n, &args.training)?
        .ok_or_else(|| UsageError(format!("no Δ < 1 meets γ = {} with N = {}", args.training.gamma, args.n)))?;
    let order = args.common.quad_order;
    let r = PointRates::compute(&point, order)?;

    let mut header = vec![
        "snr_db", "q_over_p_db", "n", "delta", "error_var", "shrinkage", "alpha_star", "alpha_mean",
        "perfect_csi", "c_txrx", "c_rx_opt", "c_rx_mean",
    ];
    let mut row = vec![
        Cell::Real(args.snr_db),
        Cell::Real(args.q_over_p_db),
        Cell::Int(args.n),
        Cell::Real(point.training.reduction()),
        Cell::Real(point.quality.error_var),
        Cell::Real(point.quality.shrinkage),
        Cell::Real(r.alpha_star),
        Cell::Real(r.alpha_mean),
        Cell::Real(r.perfect_csi),
        Cell::Real(r.c_txrx),
        Cell::Real(r.c_rx_opt),
        Cell::Real(r.c_rx_mean),
    ];
    if let Some(alpha) = args.alpha {
        header.extend(["alpha", "c_rx_alpha"]);
        row.extend([Cell::Real(alpha), Cell::Real(capacity_rx(alpha, &point.channel, &point.quality, order)?)]);
    }
    if args.clamp {
        let (opt, mean) = r.clamped(&point, order)?;
        header.extend(["c_rx_opt_clamped", "c_rx_mean_clamped"]);
        row.extend([Cell::Real(opt), Cell::Real(mean)]);
    }
    if args.common.mc {
        let mc = PointMc::compute(&point, &r, &args.common)?;
        header.extend([
            "alpha_mean_mc", "alpha_mean_mc_se", "perfect_csi_mc", "perfect_csi_mc_se", "c_txrx_mc",
            "c_txrx_mc_se", "c_rx_opt_mc", "c_rx_opt_mc_se", "c_rx_mean_mc", "c_rx_mean_mc_se",
        ]);
        for estimate in [mc.alpha_mean, mc.perfect_csi, mc.c_txrx, mc.c_rx_opt, mc.c_rx_mean] {
            row.extend(mc_cells(&estimate));
        }
    }
    let mut table = Table::new(header.into_iter().map(String::from).collect());
    table.push(row);
    Ok(table)
}
