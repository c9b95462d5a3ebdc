//! Command-line front end for `dpc-core`: figure sweeps, single-point
//! queries, training design and the closed-form versus Monte Carlo suite.
//!
//! Every command produces a CSV [`table::Table`]. Sweep points are computed
//! in parallel and merged in axis order, so output bytes depend only on the
//! flags and the seed.

pub mod args;
pub mod figures;
pub mod point;
pub mod sweep;
pub mod table;
pub mod validate;

use std::fmt;

use anyhow::Result;

use args::{Cli, Command};

/// Malformed command-line input that clap cannot catch on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ValidationFailed,
}

pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

/// Exit status for an error escaping [`run`].
pub fn exit_code_for(error: &anyhow::Error) -> i32 {
    let numerical = error.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<dpc_core::Error>(),
            Some(dpc_core::Error::NonConvergence { .. } | dpc_core::Error::Degenerate(_))
        )
    });
    if numerical {
        exit_code::NUMERICAL
    } else {
        exit_code::USAGE
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Fig1(args) => figures::fig1(&args)?.emit(args.common.out.as_deref())?,
        Command::Fig2(args) => figures::fig2(&args)?.emit(args.common.out.as_deref())?,
        Command::Fig3(args) => figures::fig3(&args)?.emit(args.common.out.as_deref())?,
        Command::Fig4(args) => figures::fig4(&args)?.emit(args.common.out.as_deref())?,
        Command::TrainingDesign(args) => point::training_design(&args)?.emit(args.out.as_deref())?,
        Command::Rates(args) => point::rates(&args)?.emit(args.common.out.as_deref())?,
        Command::Validate(args) => {
            let report = validate::run_suite(&args)?;
            report.table().emit(args.out.as_deref())?;
            eprintln!("{}", report.summary());
            if !report.passed() {
                return Ok(Outcome::ValidationFailed);
            }
        }
    }
    Ok(Outcome::Success)
}
