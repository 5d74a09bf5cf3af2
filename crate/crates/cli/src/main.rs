//! `qshot`: shot-count estimates, budgets, and Monte Carlo checks from the command line.
//!
//! Exit codes: 0 success, 1 validation FAIL (or infeasible budget with
//! `--strict`), 2 input or domain error, 3 degenerate input.
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod curves;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// Outcome of a command that did not simply succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable files, or values outside a formula's domain.
    Input(String),
    /// Well-formed input for which no finite answer exists.
    Degenerate(String),
    /// A check ran and did not pass; details were already printed.
    Check,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Input(_) => 2,
            Failure::Degenerate(_) => 3,
        }
    }
}

impl From<qshot::Error> for Failure {
    fn from(e: qshot::Error) -> Self {
        match e {
            qshot::Error::DegenerateStates => Failure::Degenerate(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Shots(a) => commands::shots(&a),
        Command::Qcb(a) => commands::qcb(&a),
        Command::Chisq(a) => commands::chisq(&a),
        Command::Noise(a) => commands::noise(&a),
        Command::Budget(a) => commands::budget(&a),
        Command::Validate(a) => commands::validate(&a),
        Command::Curve(a) => curves::curve(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Degenerate(msg) => eprintln!("notice: {msg}"),
                Failure::Check => {}
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
