//! Measurement-shot estimation for verifying quantum programs.
//!
//! The crate turns distinguishability measures between an actual and an
//! expected quantum state (fidelity, trace distance, the quantum Chernoff
//! quantity `Q`) into the number of shots each verification test needs:
//!
//! - [`shot_estimators`]: closed-form counts for the inverse, swap, and
//!   generic QCB-based tests, plus trace-distance reformulations.
//! - [`stat_power`]: chi-square effect sizes, noncentral-chi-square sample
//!   sizes, and the noise-calibrated binomial planner.
//! - [`budget`]: splits a program-level fidelity target into per-block
//!   Bures-angle budgets and per-block shot counts.
//! - [`mc_validator`]: seeded Monte Carlo oracles that check the analytic
//!   counts empirically.
//!
//! [`numerics`] and [`states`] hold the linear-algebra and state machinery
//! the rest is built on.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
mod error;
pub mod mc_validator;
pub mod numerics;
pub mod report;
pub mod rng;
pub mod shot_estimators;
pub mod stat_power;
pub mod states;
pub mod tolerances;

pub use error::{Error, Result};
