//! Figure sweeps.

use anyhow::{Context, Result};
use dpc_core::db_to_linear;
use dpc_core::estimation::{achievable_delta, noise_reduction_factor, ChannelParams, TrainingConfig};
use dpc_core::simulate::{mc_failure_rate, SimConfig};
use rayon::prelude::*;

use crate::args::{CommonArgs, Fig1Args, Fig2Args, Fig3Args, Fig4Args, SnrSweepArgs};
use crate::point::{mc_cells, OperatingPoint, PointMc, PointRates};
use crate::sweep::{decade_grid, Axis, Scale, SweepSpec};
use crate::table::{label, Cell, Table};
use crate::UsageError;

fn snr_grid(args: &SnrSweepArgs) -> Result<Vec<f64>> {
    Ok(SweepSpec::new(Axis::SnrDb, args.snr_start, args.snr_stop, args.snr_points, Scale::Linear)?.values())
}

fn check_quad_order(common: &CommonArgs) -> Result<()> {
    if common.quad_order == 0 {
        return Err(UsageError("--quad-order must be positive".into()).into());
    }
    if common.mc && common.trials == 0 {
        return Err(UsageError("--trials must be positive".into()).into());
    }
    Ok(())
}

fn nonempty<T>(values: &[T], flag: &str) -> Result<()> {
    if values.is_empty() {
        return Err(UsageError(format!("{flag} needs at least one value")).into());
    }
    Ok(())
}

fn strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn fig1_lengths(args: &Fig1Args) -> Result<Vec<u64>> {
    if let Some(list) = &args.n_list {
        nonempty(list, "--n-list")?;
        if list.contains(&0) {
            return Err(UsageError("training lengths must be positive".into()).into());
        }
        return Ok(list.clone());
    }
    if args.n_min == 0 || args.n_min >= args.n_max {
        return Err(UsageError(format!("need 0 < --n-min < --n-max, got {}..{}", args.n_min, args.n_max)).into());
    }
    Ok(match args.n_points {
        Some(points) => {
            SweepSpec::new(Axis::TrainLen, args.n_min as f64, args.n_max as f64, points, Scale::LogDb)?
                .integer_values()
        }
        None => decade_grid(args.n_min, args.n_max),
    })
}

/// η against `N`: pilot-only (`1/N`) and, per γ, the smallest feasible Δ and
/// its η. Lengths too short for any Δ leave the cells empty.
pub fn fig1(args: &Fig1Args) -> Result<Table> {
    check_quad_order(&args.common)?;
    nonempty(&args.gammas, "--gammas")?;
    let lengths = fig1_lengths(args)?;
    let state_power = args.pt * db_to_linear(args.q_over_pt_db);
    let mut header = strings(&["n", "eta_pilot_only"]);
    for &gamma in &args.gammas {
        let tag = label(gamma);
        header.push(format!("delta_gamma_{tag}"));
        header.push(format!("eta_gamma_{tag}"));
        if args.common.mc {
            header.push(format!("failure_mc_gamma_{tag}"));
            header.push(format!("failure_mc_se_gamma_{tag}"));
        }
    }
    let channel = ChannelParams::new(1.0, 1.0, args.pt, state_power)?;

    let rows: Vec<Vec<Cell>> = lengths
        .par_iter()
        .map(|&n| -> Result<Vec<Cell>> {
            let mut row = vec![Cell::Int(n), Cell::Real(noise_reduction_factor(n, 0.0)?)];
            for &gamma in &args.gammas {
                let delta = achievable_delta(n, gamma, args.pt, state_power)?;
                row.push(Cell::maybe(delta));
                row.push(Cell::maybe(delta.map(|d| noise_reduction_factor(n, d)).transpose()?));
                if args.common.mc {
                    match delta {
                        Some(d) => {
                            let training = TrainingConfig::pilot_plus_state(n, args.pt, d, gamma)?;
                            let cfg = SimConfig::new(args.common.trials, args.common.seed, channel, training)?;
                            row.extend(mc_cells(&mc_failure_rate(&cfg)?));
                        }
                        None => row.extend([Cell::Empty, Cell::Empty]),
                    }
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table::with_rows(header, rows))
}

/// α* and ᾱ against SNR, one pair per training length.
pub fn fig2(args: &Fig2Args) -> Result<Table> {
    check_quad_order(&args.common)?;
    nonempty(&args.ns, "--ns")?;
    let mut header = strings(&["snr_db"]);
    for n in &args.ns {
        header.push(format!("alpha_star_n{n}"));
        header.push(format!("alpha_mean_n{n}"));
        if args.common.mc {
            header.push(format!("alpha_mean_mc_n{n}"));
            header.push(format!("alpha_mean_mc_se_n{n}"));
        }
    }
    let rows = snr_grid(&args.snr)?
        .par_iter()
        .map(|&snr| -> Result<Vec<Cell>> {
            let mut row = vec![Cell::Real(snr)];
            for &n in &args.ns {
                match OperatingPoint::new(snr, args.q_over_p_db, n, &args.training)? {
                    Some(point) => {
                        let alpha_star = dpc_core::rates::optimal_alpha(&point.channel, &point.quality)?;
                        let alpha_mean = dpc_core::rates::mean_alpha(&point.channel, &point.quality)?;
                        row.extend([Cell::Real(alpha_star), Cell::Real(alpha_mean)]);
                        if args.common.mc {
                            let cfg = point.sim(&args.common)?;
                            row.extend(mc_cells(&dpc_core::simulate::mc_mean_alpha(&cfg)?));
                        }
                    }
                    None => row.extend(std::iter::repeat_n(Cell::Empty, if args.common.mc { 4 } else { 2 })),
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table::with_rows(header, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Txrx,
    RxOpt,
    RxMean,
    Perfect,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Txrx => "c_txrx",
            Quantity::RxOpt => "c_rx_opt",
            Quantity::RxMean => "c_rx_mean",
            Quantity::Perfect => "perfect_csi",
        }
    }
}

/// Columns contributed by one curve family (a training length or a state
/// power) in figures 3 and 4.
struct RateColumns {
    quantities: &'static [Quantity],
    clamp: bool,
    mc: bool,
}

impl RateColumns {
    fn header(&self, suffix: &str) -> Vec<String> {
        let mut names: Vec<String> = self.quantities.iter().map(|q| q.name().to_owned()).collect();
        if self.clamp {
            names.extend(["c_rx_opt_clamped".to_owned(), "c_rx_mean_clamped".to_owned()]);
        }
        if self.mc {
            for q in self.quantities {
                names.push(format!("{}_mc", q.name()));
                names.push(format!("{}_mc_se", q.name()));
            }
        }
        names.into_iter().map(|name| format!("{name}_{suffix}")).collect()
    }

    fn cells(&self, point: Option<&OperatingPoint>, common: &CommonArgs) -> Result<Vec<Cell>> {
        let Some(point) = point else {
            return Ok(vec![Cell::Empty; self.header("").len()]);
        };
        let order = common.quad_order;
        let r = PointRates::compute(point, order).with_context(|| format!("rates at {point:?}"))?;
        let mut cells: Vec<Cell> = self
            .quantities
            .iter()
            .map(|q| {
                Cell::Real(match q {
                    Quantity::Txrx => r.c_txrx,
                    Quantity::RxOpt => r.c_rx_opt,
                    Quantity::RxMean => r.c_rx_mean,
                    Quantity::Perfect => r.perfect_csi,
                })
            })
            .collect();
        if self.clamp {
            let (opt, mean) = r.clamped(point, order)?;
            cells.extend([Cell::Real(opt), Cell::Real(mean)]);
        }
        if self.mc {
            let mc = PointMc::compute(point, &r, common)?;
            for q in self.quantities {
                cells.extend(mc_cells(match q {
                    Quantity::Txrx => &mc.c_txrx,
                    Quantity::RxOpt => &mc.c_rx_opt,
                    Quantity::RxMean => &mc.c_rx_mean,
                    Quantity::Perfect => &mc.perfect_csi,
                }));
            }
        }
        Ok(cells)
    }
}

/// Perfect-CSI capacity and, per training length, the rates with the
/// estimate at both ends, with the optimal α and with the mean α.
pub fn fig3(args: &Fig3Args) -> Result<Table> {
    check_quad_order(&args.common)?;
    nonempty(&args.ns, "--ns")?;
    let columns = RateColumns {
        quantities: &[Quantity::Txrx, Quantity::RxOpt, Quantity::RxMean],
        clamp: args.clamp,
        mc: args.common.mc,
    };
    let mut header = strings(&["snr_db", "perfect_csi"]);
    if args.common.mc {
        header.extend(strings(&["perfect_csi_mc", "perfect_csi_mc_se"]));
    }
    for n in &args.ns {
        header.extend(columns.header(&format!("n{n}")));
    }
    let rows = snr_grid(&args.snr)?
        .par_iter()
        .map(|&snr| -> Result<Vec<Cell>> {
            let channel = ChannelParams::from_snr_db(snr, args.q_over_p_db)?;
            let order = args.common.quad_order;
            let mut row = vec![Cell::Real(snr), Cell::Real(dpc_core::rates::perfect_csi_capacity(&channel, order)?)];
            if args.common.mc {
                let training = TrainingConfig::pilot_only(1, channel.input_power)?;
                let cfg = SimConfig::new(args.common.trials, args.common.seed, channel, training)?;
                row.extend(mc_cells(&dpc_core::simulate::mc_perfect_csi(&cfg)));
            }
            for &n in &args.ns {
                let point = OperatingPoint::new(snr, args.q_over_p_db, n, &args.training)?;
                row.extend(columns.cells(point.as_ref(), &args.common)?);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table::with_rows(header, rows))
}

/// Per state power: optimal-α rate, rate with the estimate at both ends and
/// the perfect-CSI capacity.
pub fn fig4(args: &Fig4Args) -> Result<Table> {
    check_quad_order(&args.common)?;
    nonempty(&args.q_list, "--q-list")?;
    let columns = RateColumns {
        quantities: &[Quantity::RxOpt, Quantity::Txrx, Quantity::Perfect],
        clamp: args.clamp,
        mc: args.common.mc,
    };
    let mut header = strings(&["snr_db"]);
    for &q in &args.q_list {
        header.extend(columns.header(&format!("q{}", label(q))));
    }
    let rows = snr_grid(&args.snr)?
        .par_iter()
        .map(|&snr| -> Result<Vec<Cell>> {
            let mut row = vec![Cell::Real(snr)];
            for &q in &args.q_list {
                let point = OperatingPoint::new(snr, q, args.n, &args.training)?;
                row.extend(columns.cells(point.as_ref(), &args.common)?);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table::with_rows(header, rows))
}
