//! Closed forms against Monte Carlo.
//!
//! Each check compares a closed-form or quadrature value with a seeded Monte
//! Carlo estimate and passes when they agree within `--sigmas` standard
//! errors. Training failure frequency is one-sided: it may fall below γ but
//! not exceed γ by more than three binomial standard deviations.

use anyhow::Result;
use dpc_core::db_to_linear;
use dpc_core::estimation::{
    achievable_delta, estimation_quality, ChannelParams, EstimationQuality, TrainingConfig,
};
use dpc_core::rates::{capacity_rx, capacity_txrx, mean_alpha, optimal_alpha, perfect_csi_capacity};
use dpc_core::simulate::{
    mc_capacity_txrx, mc_failure_rate, mc_mean_alpha, mc_perfect_csi, mc_posterior, mc_rate, simulate_training,
    McEstimate, SimConfig,
};
use rayon::prelude::*;

use crate::args::ValidateArgs;
use crate::table::{Cell, Table};
use crate::UsageError;

const FAILURE_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub reference: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub z_score: f64,
    pub passed: bool,
}

impl Check {
    fn two_sided(name: String, reference: f64, mc: McEstimate, sigmas: f64) -> Self {
        let z_score = mc.z_score(reference);
        Self { name, reference, estimate: mc.mean, std_error: mc.std_error, z_score, passed: z_score <= sigmas }
    }

    fn at_most(name: String, tolerance: f64, mc: McEstimate, trials: u64) -> Self {
        let sigma = (tolerance * (1.0 - tolerance) / trials as f64).sqrt();
        let z_score = (mc.mean - tolerance) / sigma;
        Self {
            name,
            reference: tolerance,
            estimate: mc.mean,
            std_error: mc.std_error,
            z_score,
            passed: z_score <= FAILURE_SIGMAS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> Table {
        let header = ["check", "reference", "estimate", "std_error", "z_score", "result"];
        let rows = self
            .checks
            .iter()
            .map(|c| {
                vec![
                    Cell::Text(c.name.clone()),
                    Cell::Real(c.reference),
                    Cell::Real(c.estimate),
                    Cell::Real(c.std_error),
                    Cell::Real(c.z_score),
                    Cell::from(if c.passed { "pass" } else { "fail" }),
                ]
            })
            .collect();
        Table::with_rows(header.map(String::from).to_vec(), rows)
    }

    pub fn summary(&self) -> String {
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        format!("{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Rate configurations: (SNR dB, Q/P̄ dB, N, pilot-plus-state).
const RATE_POINTS: [(f64, f64, u64, bool); 6] = [
    (10.0, 20.0, 10, false),
    (20.0, 20.0, 1, false),
    (0.0, 10.0, 20, false),
    (30.0, 30.0, 10, false),
    (18.0, 20.0, 10, false),
    (15.0, 20.0, 500, true),
];

const GAMMA: f64 = 1e-2;
const STATE_LENGTH: u64 = 500;

fn perturbed(q: EstimationQuality, factor: f64) -> EstimationQuality {
    EstimationQuality { shrinkage: q.shrinkage * factor, ..q }
}

fn training_for(ch: &ChannelParams, n: u64, with_state: bool) -> Result<TrainingConfig> {
    if !with_state {
        return Ok(TrainingConfig::pilot_only(n, ch.input_power)?);
    }
    let delta = achievable_delta(n, GAMMA, ch.input_power, ch.state_power)?
        .ok_or_else(|| anyhow::anyhow!("no feasible Δ at N = {n}"))?;
    Ok(TrainingConfig::pilot_plus_state(n, ch.input_power, delta, GAMMA)?)
}

fn rate_checks(args: &ValidateArgs, factor: f64, point: (f64, f64, u64, bool)) -> Result<Vec<Check>> {
    let (snr, q_db, n, with_state) = point;
    let ch = ChannelParams::from_snr_db(snr, q_db)?;
    let training = training_for(&ch, n, with_state)?;
    let cfg = SimConfig::new(args.trials, args.seed, ch, training)?;
    let q = perturbed(estimation_quality(&training, &ch)?, factor);
    let order = args.quad_order;
    let tag = format!(
        "snr{}_q{}_n{}{}",
        crate::table::label(snr),
        crate::table::label(q_db),
        n,
        if with_state { "_state" } else { "" }
    );
    let alpha_star = optimal_alpha(&ch, &q)?;
    let alpha_mean = mean_alpha(&ch, &q)?;
    let s = args.sigmas;
    Ok(vec![
        Check::two_sided(format!("mean_alpha/{tag}"), alpha_mean, mc_mean_alpha(&cfg)?, s),
        Check::two_sided(format!("capacity_txrx/{tag}"), capacity_txrx(&ch, &q, order)?, mc_capacity_txrx(&cfg)?, s),
        Check::two_sided(
            format!("capacity_rx_opt/{tag}"),
            capacity_rx(alpha_star, &ch, &q, order)?,
            mc_rate(alpha_star, &cfg)?,
            s,
        ),
        Check::two_sided(
            format!("capacity_rx_mean/{tag}"),
            capacity_rx(alpha_mean, &ch, &q, order)?,
            mc_rate(alpha_mean, &cfg)?,
            s,
        ),
        Check::two_sided(format!("capacity_rx_zero/{tag}"), capacity_rx(0.0, &ch, &q, order)?, mc_rate(0.0, &cfg)?, s),
        Check::two_sided(format!("perfect_csi/{tag}"), perfect_csi_capacity(&ch, order)?, mc_perfect_csi(&cfg), s),
    ])
}

fn estimation_checks(args: &ValidateArgs, factor: f64) -> Result<Vec<Check>> {
    let s = args.sigmas;
    let mut checks = Vec::new();
    let unit = ChannelParams::new(1.0, 1.0, 1.0, db_to_linear(20.0))?;
    let configs = [
        ("pilot_only_n10", TrainingConfig::pilot_only(10, 1.0)?),
        ("pilot_only_n1", TrainingConfig::pilot_only(1, 1.0)?),
        ("pilot_plus_state_n500", training_for(&unit, STATE_LENGTH, true)?),
    ];
    for (tag, training) in configs {
        let cfg = SimConfig::new(args.trials, args.seed, unit, training)?;
        let exact = estimation_quality(&training, &unit)?;
        let q = perturbed(exact, factor);
        let stats = simulate_training(&cfg);
        checks.push(Check::two_sided(format!("error_var/{tag}"), exact.error_var, stats.error_var, s));
        checks.push(Check::two_sided(format!("bias_re/{tag}"), 0.0, stats.bias_re, s));
        checks.push(Check::two_sided(format!("bias_im/{tag}"), 0.0, stats.bias_im, s));

        // closed-form predictions for the residual H - δĤ given the supplied δ
        let posterior_var = q.shrinkage * q.error_var;
        let post = mc_posterior(&cfg)?;
        checks.push(Check::two_sided(format!("posterior_var/{tag}"), posterior_var, post.residual_var, s));
        let cross_reference = unit.fading_var - q.shrinkage * (unit.fading_var + q.error_var);
        checks.push(Check::two_sided(format!("posterior_orthogonality/{tag}"), cross_reference, post.cross_re, s));

        if let dpc_core::estimation::Scenario::PilotPlusState { failure_tolerance, .. } = training.scenario {
            checks.push(Check::at_most(
                format!("failure_rate_symbols/{tag}"),
                failure_tolerance,
                stats.failure_rate(),
                cfg.trials,
            ));
            checks.push(Check::at_most(
                format!("failure_rate_direct/{tag}"),
                failure_tolerance,
                mc_failure_rate(&cfg)?,
                cfg.trials,
            ));
        }
    }
    Ok(checks)
}

pub fn run_suite(args: &ValidateArgs) -> Result<Report> {
    if args.trials < 2 {
        return Err(UsageError("--trials must be at least 2".into()).into());
    }
    if args.sigmas.is_nan() || args.sigmas <= 0.0 {
        return Err(UsageError("--sigmas must be positive".into()).into());
    }
    let factor = 1.0 + args.perturb_shrinkage.unwrap_or(0.0);
    let rate: Vec<Vec<Check>> = RATE_POINTS
        .par_iter()
        .map(|&point| rate_checks(args, factor, point))
        .collect::<Result<_>>()?;
    let mut checks: Vec<Check> = rate.into_iter().flatten().collect();
    checks.extend(estimation_checks(args, factor)?);
    Ok(Report { checks })
}
