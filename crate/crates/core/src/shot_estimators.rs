//! Closed-form shot counts.
//!
//! Every formula has the shape `N ~ c * ln(P_e) / ln(x)` where `x < 1` is a
//! per-shot acceptance or overlap quantity. `x = 1` means the states cannot
//! be told apart and is reported as [`Error::DegenerateStates`]; `x = 0`
//! means one shot always suffices.

use std::fmt;

use serde::Serialize;

use crate::error::{check_open_unit, check_unit};
use crate::states::check_regime_factor;
use crate::tolerances::MAX_FEASIBLE_SHOTS;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    FromQ,
    Pure,
    MixedLower,
    MixedUpper,
    InverseIdeal,
    InverseReal,
    SwapIdeal,
    SwapReal,
    PureFromTraceDistance,
    PureMixedLowerFromTraceDistance,
    PureMixedUpperFromTraceDistance,
    MixedLowerFromTraceDistance,
    MixedUpperFromTraceDistance,
    ChiSquare,
    ChiSquareSmallDiscrepancy,
    ChiSquareFidelityAttaining,
    TwoProportion,
}

impl Formula {
    pub fn id(self) -> &'static str {
        match self {
            Formula::FromQ => "from_q",
            Formula::Pure => "pure",
            Formula::MixedLower => "mixed_lower",
            Formula::MixedUpper => "mixed_upper",
            Formula::InverseIdeal => "inverse_ideal",
            Formula::InverseReal => "inverse_real",
            Formula::SwapIdeal => "swap_ideal",
            Formula::SwapReal => "swap_real",
            Formula::PureFromTraceDistance => "pure_from_trace_distance",
            Formula::PureMixedLowerFromTraceDistance => "pure_mixed_lower_from_trace_distance",
            Formula::PureMixedUpperFromTraceDistance => "pure_mixed_upper_from_trace_distance",
            Formula::MixedLowerFromTraceDistance => "mixed_lower_from_trace_distance",
            Formula::MixedUpperFromTraceDistance => "mixed_upper_from_trace_distance",
            Formula::ChiSquare => "chi_square",
            Formula::ChiSquareSmallDiscrepancy => "chi_square_small_discrepancy",
            Formula::ChiSquareFidelityAttaining => "chi_square_fidelity_attaining",
            Formula::TwoProportion => "two_proportion",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A shot count: the real-valued formula output and its integer rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotEstimate {
    pub raw: f64,
    /// `max(1, ceil(raw))`, saturating at `u64::MAX` when infeasible.
    pub shots: u64,
    pub formula: Formula,
    /// Read as a hard lower-bound requirement rather than an asymptotic estimate.
    pub conservative: bool,
}

impl ShotEstimate {
    pub fn from_raw(raw: f64, formula: Formula) -> Self {
        debug_assert!(raw >= 0.0, "negative shot count {raw}");
        let raw = raw.max(0.0);
        let shots = if raw > MAX_FEASIBLE_SHOTS {
            u64::MAX
        } else {
            (raw.ceil() as u64).max(1)
        };
        Self {
            raw,
            shots,
            formula,
            conservative: false,
        }
    }

    /// Single shot for perfectly distinguishable states.
    pub fn single_shot(formula: Formula) -> Self {
        Self::from_raw(0.0, formula)
    }

    /// Marks the estimate as a lower-bound requirement (`N >= ...`); the value is unchanged.
    pub fn conservative(mut self) -> Self {
        self.conservative = true;
        self
    }

    pub fn interpretation(&self) -> &'static str {
        if self.conservative {
            "lower-bound requirement"
        } else {
            "asymptotic estimate"
        }
    }

    /// False when the count exceeds 2^63 and only `raw` is meaningful.
    pub fn is_feasible(&self) -> bool {
        self.raw <= MAX_FEASIBLE_SHOTS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotBounds {
    pub lower: ShotEstimate,
    pub upper: ShotEstimate,
}

impl ShotBounds {
    fn new(lower: ShotEstimate, upper: ShotEstimate) -> Self {
        debug_assert!(
            lower.raw <= upper.raw * (1.0 + 1e-12),
            "{lower:?} > {upper:?}"
        );
        Self { lower, upper }
    }

    pub fn contains(&self, raw: f64) -> bool {
        self.lower.raw <= raw && raw <= self.upper.raw
    }
}

/// `factor * ln(p_e) / ln(acceptance)` with the degenerate and orthogonal cases split out.
fn log_ratio(factor: f64, p_e: f64, ln_acceptance: f64, formula: Formula) -> Result<ShotEstimate> {
    if ln_acceptance == 0.0 {
        return Err(Error::DegenerateStates);
    }
    if ln_acceptance == f64::NEG_INFINITY {
        return Ok(ShotEstimate::single_shot(formula));
    }
    Ok(ShotEstimate::from_raw(
        factor * p_e.ln() / ln_acceptance,
        formula,
    ))
}

fn check_fidelity(fidelity: f64) -> Result<()> {
    check_unit("fidelity", fidelity)?;
    if fidelity == 1.0 {
        return Err(Error::DegenerateStates);
    }
    Ok(())
}

fn check_trace_distance(t: f64) -> Result<()> {
    check_unit("trace distance", t)?;
    if t == 0.0 {
        return Err(Error::DegenerateStates);
    }
    Ok(())
}

/// `N ~ ln(P_e) / ln(Q)` from the quantum Chernoff quantity.
pub fn shots_from_q(q: f64, p_e: f64) -> Result<ShotEstimate> {
    check_open_unit("P_e", p_e)?;
    if q >= 1.0 {
        return Err(Error::DegenerateStates);
    }
    if !(q > 0.0) {
        return Err(Error::domain(format!(
            "Q = {q} must be positive; orthogonal states need a single shot"
        )));
    }
    log_ratio(1.0, p_e, q.ln(), Formula::FromQ)
}

/// `N ~ ln(P_e) / ln(F)`, valid whenever at least one state is pure.
pub fn shots_pure(fidelity: f64, p_e: f64) -> Result<ShotEstimate> {
    fidelity_formula(fidelity, p_e, 1.0, Formula::Pure)
}

fn fidelity_formula(
    fidelity: f64,
    p_e: f64,
    factor: f64,
    formula: Formula,
) -> Result<ShotEstimate> {
    check_fidelity(fidelity)?;
    check_open_unit("P_e", p_e)?;
    log_ratio(factor, p_e, fidelity.ln(), formula)
}

/// Bounds for two mixed states: `ln P_e / ln(1 - sqrt(1 - F))` to `2 ln P_e / ln F`.
pub fn shots_mixed_bounds(fidelity: f64, p_e: f64) -> Result<ShotBounds> {
    check_fidelity(fidelity)?;
    check_open_unit("P_e", p_e)?;
    let q_lower = 1.0 - (1.0 - fidelity).sqrt();
    let lower = log_ratio(1.0, p_e, q_lower.ln(), Formula::MixedLower)?;
    let upper = log_ratio(2.0, p_e, fidelity.ln(), Formula::MixedUpper)?;
    Ok(ShotBounds::new(lower, upper))
}

/// Ideal inverse test; identical to [`shots_pure`].
pub fn shots_inverse_ideal(fidelity: f64, p_e: f64) -> Result<ShotEstimate> {
    fidelity_formula(fidelity, p_e, 1.0, Formula::InverseIdeal)
}

/// Inverse test on a noisy device: `R ln(P_e) / ln(F)`.
pub fn shots_inverse_real(fidelity: f64, p_e: f64, regime_factor: f64) -> Result<ShotEstimate> {
    check_regime_factor(regime_factor)?;
    fidelity_formula(fidelity, p_e, regime_factor, Formula::InverseReal)
}

fn swap_formula(fidelity: f64, p_e: f64, factor: f64, formula: Formula) -> Result<ShotEstimate> {
    check_fidelity(fidelity)?;
    check_open_unit("P_e", p_e)?;
    // ln(1/2 + F/2) = ln(1 - (1 - F)/2)
    log_ratio(factor, p_e, (-0.5 * (1.0 - fidelity)).ln_1p(), formula)
}

/// Ideal swap test: `ln(P_e) / ln(1/2 + F/2)`. Finite even at `F = 0`.
pub fn shots_swap_ideal(fidelity: f64, p_e: f64) -> Result<ShotEstimate> {
    swap_formula(fidelity, p_e, 1.0, Formula::SwapIdeal)
}

/// Swap test on a noisy device: `R ln(P_e) / ln(1/2 + F/2)`.
pub fn shots_swap_real(fidelity: f64, p_e: f64, regime_factor: f64) -> Result<ShotEstimate> {
    check_regime_factor(regime_factor)?;
    swap_formula(fidelity, p_e, regime_factor, Formula::SwapReal)
}

/// Swap-to-inverse shot ratio `ln F / ln(1/2 + F/2)`; tends to 2 as `F -> 1`.
pub fn swap_to_inverse_ratio(fidelity: f64) -> Result<f64> {
    check_open_unit("fidelity", fidelity)?;
    Ok(fidelity.ln() / (-0.5 * (1.0 - fidelity)).ln_1p())
}

/// Pure-pure count in terms of trace distance: `ln(P_e) / ln(1 - T^2)`.
pub fn shots_pure_from_trace_distance(t: f64, p_e: f64) -> Result<ShotEstimate> {
    check_trace_distance(t)?;
    check_open_unit("P_e", p_e)?;
    log_ratio(1.0, p_e, (-t * t).ln_1p(), Formula::PureFromTraceDistance)
}

/// Pure-mixed bounds: `ln P_e / ln(1 - T)` to `ln P_e / ln(1 - T^2)`.
pub fn shots_pure_mixed_bounds_from_trace_distance(t: f64, p_e: f64) -> Result<ShotBounds> {
    check_trace_distance(t)?;
    check_open_unit("P_e", p_e)?;
    let lower = log_ratio(
        1.0,
        p_e,
        (-t).ln_1p(),
        Formula::PureMixedLowerFromTraceDistance,
    )?;
    let upper = log_ratio(
        1.0,
        p_e,
        (-t * t).ln_1p(),
        Formula::PureMixedUpperFromTraceDistance,
    )?;
    Ok(ShotBounds::new(lower, upper))
}

/// Mixed-mixed bounds: `ln P_e / ln(1 - sqrt(2T - T^2))` to `2 ln P_e / ln(1 - T^2)`.
pub fn shots_mixed_bounds_from_trace_distance(t: f64, p_e: f64) -> Result<ShotBounds> {
    check_trace_distance(t)?;
    check_open_unit("P_e", p_e)?;
    let root = (2.0 * t - t * t).sqrt();
    let lower = log_ratio(
        1.0,
        p_e,
        (-root).ln_1p(),
        Formula::MixedLowerFromTraceDistance,
    )?;
    let upper = log_ratio(
        2.0,
        p_e,
        (-t * t).ln_1p(),
        Formula::MixedUpperFromTraceDistance,
    )?;
    Ok(ShotBounds::new(lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn from_q_examples() {
        let e = shots_from_q(0.5, 0.5).unwrap();
        assert_eq!((e.raw, e.shots), (1.0, 1));
        assert_eq!(shots_from_q(0.999, 0.01).unwrap().raw.round(), 4603.0);
        assert_eq!(shots_from_q(0.9995, 0.01).unwrap().raw.round(), 9208.0);
        assert_eq!(shots_from_q(1.0, 0.01), Err(Error::DegenerateStates));
        assert!(matches!(shots_from_q(0.0, 0.01), Err(Error::Domain(_))));
        assert!(matches!(shots_from_q(0.5, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn pure_examples() {
        assert_eq!(shots_pure(0.999, 0.01).unwrap().raw.round(), 4603.0);
        assert_eq!(shots_pure(0.99, 0.01).unwrap().raw.round(), 458.0);
        let orth = shots_pure(0.0, 0.01).unwrap();
        assert_eq!((orth.raw, orth.shots), (0.0, 1));
        assert_eq!(shots_pure(1.0, 0.01), Err(Error::DegenerateStates));
        assert!(shots_pure(1.2, 0.01).is_err());
    }

    #[test]
    fn mixed_bounds_examples() {
        let b = shots_mixed_bounds(0.99, 0.01).unwrap();
        // reference values from 30-digit evaluation
        assert!(close(b.lower.raw, 43.708_690, 1e-5), "{}", b.lower.raw);
        assert!(close(b.upper.raw, 916.421_153, 1e-5), "{}", b.upper.raw);
        let pure = shots_pure(0.99, 0.01).unwrap();
        assert!(close(b.upper.raw / pure.raw, 2.0, 1e-15));
        let orth = shots_mixed_bounds(0.0, 0.01).unwrap();
        assert_eq!((orth.lower.shots, orth.upper.shots), (1, 1));
        assert_eq!(shots_mixed_bounds(1.0, 0.01), Err(Error::DegenerateStates));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            shots_inverse_ideal(0.999, 0.01).unwrap().raw.round(),
            4603.0
        );
        assert_eq!(shots_inverse_ideal(0.99, 0.01).unwrap().raw.round(), 458.0);
        assert_eq!(shots_inverse_ideal(0.5, 0.5).unwrap().shots, 1);
        let ideal = shots_inverse_ideal(0.97, 0.02).unwrap();
        let real = shots_inverse_real(0.97, 0.02, 1.0).unwrap();
        assert_eq!(ideal.raw, real.raw);
        assert_eq!(
            shots_inverse_real(0.99, 0.01, 2.0).unwrap().raw.round(),
            916.0
        );
        assert_eq!(
            shots_inverse_real(0.999, 0.01, 2.0).unwrap().raw.round(),
            9206.0
        );
        assert!(shots_inverse_real(0.99, 0.01, 2.5).is_err());
        assert!(shots_inverse_real(0.99, 0.01, 0.9).is_err());
    }

    #[test]
    fn swap_examples() {
        assert_eq!(shots_swap_ideal(0.999, 0.01).unwrap().raw.round(), 9208.0);
        assert_eq!(shots_swap_ideal(0.99, 0.01).unwrap().raw.round(), 919.0);
        let orth = shots_swap_ideal(0.0, 0.01).unwrap();
        assert!(close(orth.raw, 0.01f64.ln() / 0.5f64.ln(), 1e-12));
        assert_eq!(orth.shots, 7);
        assert_eq!(shots_swap_ideal(1.0, 0.01), Err(Error::DegenerateStates));

        let ideal = shots_swap_ideal(0.95, 0.03).unwrap();
        assert_eq!(shots_swap_real(0.95, 0.03, 1.0).unwrap().raw, ideal.raw);
        assert_eq!(shots_swap_real(0.99, 0.01, 2.0).unwrap().shots, 1838);
        assert_eq!(
            shots_swap_real(0.999, 0.01, 2.0).unwrap().raw.round(),
            18416.0
        );
        assert!(shots_swap_real(0.99, 0.01, 3.0).is_err());
    }

    #[test]
    fn swap_ratio_values() {
        // 2 - (F - 1)/2 to first order
        assert!(close(swap_to_inverse_ratio(0.999).unwrap(), 2.0005, 1e-6));
        let r = swap_to_inverse_ratio(0.99).unwrap();
        let from_examples =
            shots_swap_ideal(0.99, 0.01).unwrap().raw / shots_pure(0.99, 0.01).unwrap().raw;
        assert!(close(r, from_examples, 1e-12));
        assert!(close(r, 2.005, 1e-4));
        assert!(close(
            swap_to_inverse_ratio(1.0 - 1e-12).unwrap(),
            2.0,
            1e-9
        ));
        assert!(swap_to_inverse_ratio(1.0).is_err());
        assert!(swap_to_inverse_ratio(0.0).is_err());
    }

    #[test]
    fn trace_distance_pure() {
        assert_eq!(shots_pure_from_trace_distance(1.0, 0.01).unwrap().shots, 1);
        let t = (1.0f64 - 0.999).sqrt();
        assert_eq!(
            shots_pure_from_trace_distance(t, 0.01).unwrap().raw.round(),
            4603.0
        );
        let half = shots_pure_from_trace_distance(0.5f64.sqrt(), 0.5).unwrap();
        assert!(close(half.raw, 1.0, 1e-12));
        assert_eq!(
            shots_pure_from_trace_distance(0.0, 0.5),
            Err(Error::DegenerateStates)
        );
    }

    #[test]
    fn trace_distance_bounds() {
        let pm = shots_pure_mixed_bounds_from_trace_distance(1.0, 0.05).unwrap();
        assert_eq!((pm.lower.shots, pm.upper.shots), (1, 1));
        let pm = shots_pure_mixed_bounds_from_trace_distance(0.1, 0.05).unwrap();
        assert!(close(pm.lower.raw, 28.433_159, 1e-5), "{}", pm.lower.raw);
        assert!(close(pm.upper.raw, 298.072_852, 1e-5), "{}", pm.upper.raw);

        let mm = shots_mixed_bounds_from_trace_distance(1.0, 0.05).unwrap();
        assert_eq!(mm.lower.shots, 1);
        let mm = shots_mixed_bounds_from_trace_distance(0.1, 0.05).unwrap();
        assert!(close(mm.lower.raw, 5.232_667, 1e-5), "{}", mm.lower.raw);
        assert!(close(mm.upper.raw, 596.145_704, 1e-5), "{}", mm.upper.raw);
        assert!(close(mm.upper.raw, 2.0 * pm.upper.raw, 1e-12));
        assert_eq!(
            shots_mixed_bounds_from_trace_distance(0.0, 0.05),
            Err(Error::DegenerateStates)
        );
    }

    #[test]
    fn conservative_flag_only_relabels() {
        let e = shots_pure(0.99, 0.01).unwrap();
        let c = e.conservative();
        assert_eq!(e.raw, c.raw);
        assert_eq!(e.shots, c.shots);
        assert_eq!(e.interpretation(), "asymptotic estimate");
        assert_eq!(c.interpretation(), "lower-bound requirement");
    }

    #[test]
    fn infeasible_counts_saturate() {
        let e = ShotEstimate::from_raw(1e30, Formula::Pure);
        assert!(!e.is_feasible());
        assert_eq!(e.shots, u64::MAX);
        assert_eq!(e.raw, 1e30);
    }
}
