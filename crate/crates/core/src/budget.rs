//! Program-level error budgeting with the Bures angle.
//!
//! A program fidelity target `F_prog` is an angle budget
//! `theta_star = arccos sqrt(F_prog)`. Because the Bures angle obeys the
//! triangle inequality, the budget can be split additively: each block
//! instance `j` gets `theta_j = (w_j / W) * theta_star` with
//! `W = sum_j n_j w_j`, so `sum_j n_j theta_j = theta_star`. The per-block
//! fidelity target is `cos^2(theta_j)`, which then feeds the inverse, swap,
//! and chi-square shot formulas.
//!
//! Heavier blocks receive larger angles, looser targets, and fewer shots.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{check_open_unit, check_unit};
use crate::report::{format_sig, Table};
use crate::shot_estimators::{Formula, ShotEstimate};
use crate::stat_power::lambda_noncentral;
use crate::states::check_regime_factor;
use crate::{Error, Result};

/// Tolerance on `sum_j n_j theta_j = theta_star`.
pub const BUDGET_IDENTITY_TOL: f64 = 1e-9;

/// One block (function or archetype) of the program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub name: String,
    /// Number of instances of this block in the program.
    #[serde(default = "one")]
    pub multiplicity: u64,
    /// One-qubit gate count.
    #[serde(default)]
    pub g1: u64,
    /// Two-qubit gate count.
    #[serde(default)]
    pub g2: u64,
    #[serde(default)]
    pub depth: u64,
    /// Overrides the gate-driven weight when set.
    #[serde(default, rename = "weight", skip_serializing_if = "Option::is_none")]
    pub explicit_weight: Option<f64>,
}

fn one() -> u64 {
    1
}

impl BlockSpec {
    pub fn from_gates(name: impl Into<String>, multiplicity: u64, g1: u64, g2: u64) -> Self {
        Self {
            name: name.into(),
            multiplicity,
            g1,
            g2,
            depth: 0,
            explicit_weight: None,
        }
    }

    pub fn weighted(name: impl Into<String>, multiplicity: u64, weight: f64) -> Self {
        Self {
            name: name.into(),
            multiplicity,
            g1: 0,
            g2: 0,
            depth: 0,
            explicit_weight: Some(weight),
        }
    }
}

/// Per-operation error rates of the target hardware.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareRates {
    #[serde(default)]
    pub r1: f64,
    #[serde(default)]
    pub r2: f64,
    /// Idle error rate per layer of depth.
    #[serde(default)]
    pub gamma: f64,
}

impl HardwareRates {
    pub fn new(r1: f64, r2: f64, gamma: f64) -> Result<Self> {
        let h = Self { r1, r2, gamma };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<()> {
        check_unit("r1", self.r1)?;
        check_unit("r2", self.r2)?;
        check_unit("gamma", self.gamma)
    }
}

/// `w_j = g1 r1 + g2 r2 + depth gamma`, unless an explicit weight is given.
pub fn block_weight(block: &BlockSpec, rates: &HardwareRates) -> Result<f64> {
    rates.validate()?;
    let w = match block.explicit_weight {
        Some(w) => {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::domain(format!(
                    "block {:?} weight {w} must be positive and finite",
                    block.name
                )));
            }
            w
        }
        None => {
            block.g1 as f64 * rates.r1
                + block.g2 as f64 * rates.r2
                + block.depth as f64 * rates.gamma
        }
    };
    if w == 0.0 {
        return Err(Error::ZeroWeight {
            block: block.name.clone(),
        });
    }
    Ok(w)
}

/// Global angle budget `arccos sqrt(F_prog)`.
pub fn theta_star(f_prog: f64) -> Result<f64> {
    check_unit("program fidelity", f_prog)?;
    Ok(f_prog.sqrt().acos())
}

/// Per-block fidelity target `cos^2(theta)`.
pub fn fidelity_target(theta: f64) -> Result<f64> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::domain(format!(
            "angle {theta} must lie in [0, pi/2)"
        )));
    }
    Ok(theta.cos().powi(2))
}

/// Leading-order small-angle shot counts, kept as cross-checks on the exact values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorShots {
    /// `-R ln P_e / theta^2`
    pub inverse: f64,
    /// `-2 R ln P_e / theta^2`
    pub swap: f64,
    /// `lambda / (4 theta^2)`
    pub chisq_small: f64,
    /// `16 lambda / theta^4`
    pub chisq_attaining: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockAllocation {
    pub name: String,
    pub multiplicity: u64,
    pub weight: f64,
    /// Angle budget of one instance, in radians.
    pub theta: f64,
    pub f_target: f64,
    pub shots_inverse: ShotEstimate,
    pub shots_swap: ShotEstimate,
    pub shots_chisq_small: ShotEstimate,
    pub shots_chisq_attaining: ShotEstimate,
    pub taylor: TaylorShots,
    pub taylor_shots_inverse: u64,
}

impl BlockAllocation {
    pub fn is_feasible(&self) -> bool {
        [
            &self.shots_inverse,
            &self.shots_swap,
            &self.shots_chisq_small,
            &self.shots_chisq_attaining,
        ]
        .iter()
        .all(|e| e.is_feasible())
    }
}

/// Shots summed over all block instances, per test kind.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ShotTotals {
    pub inverse: f64,
    pub swap: f64,
    pub chisq_small: f64,
    pub chisq_attaining: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetReport {
    pub f_prog: f64,
    pub theta_star: f64,
    pub total_weight: f64,
    /// `sum_j n_j theta_j`; equals `theta_star` up to rounding.
    pub total_angle_used: f64,
    pub p_e: f64,
    pub regime_factor: f64,
    pub chisq_bins: usize,
    pub chisq_lambda: f64,
    pub allocations: Vec<BlockAllocation>,
    pub total_shots: ShotTotals,
}

impl BudgetReport {
    pub fn infeasible_blocks(&self) -> impl Iterator<Item = &BlockAllocation> {
        self.allocations.iter().filter(|a| !a.is_feasible())
    }

    /// Aligned text table, six significant digits.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "F_prog = {}  theta_star = {} rad  W = {}  P_e = {}  R = {}  lambda(k={}) = {}",
            format_sig(self.f_prog, 6),
            format_sig(self.theta_star, 6),
            format_sig(self.total_weight, 6),
            format_sig(self.p_e, 6),
            format_sig(self.regime_factor, 6),
            self.chisq_bins,
            format_sig(self.chisq_lambda, 6),
        );
        out.push('\n');
        let mut table = Table::new([
            "block",
            "n",
            "weight",
            "theta",
            "F_target",
            "N_inverse",
            "N_swap",
            "N_chisq_small",
            "N_chisq_attaining",
        ]);
        for a in &self.allocations {
            table.push([
                a.name.clone(),
                a.multiplicity.to_string(),
                format_sig(a.weight, 6),
                format_sig(a.theta, 6),
                format_sig(a.f_target, 10),
                shots_cell(&a.shots_inverse),
                shots_cell(&a.shots_swap),
                shots_cell(&a.shots_chisq_small),
                shots_cell(&a.shots_chisq_attaining),
            ]);
        }
        out.push_str(&table.render());
        let _ = writeln!(
            out,
            "\nsum n_j theta_j = {} rad; total shots: inverse {}, swap {}, chisq_small {}, chisq_attaining {}",
            format_sig(self.total_angle_used, 6),
            format_sig(self.total_shots.inverse, 6),
            format_sig(self.total_shots.swap, 6),
            format_sig(self.total_shots.chisq_small, 6),
            format_sig(self.total_shots.chisq_attaining, 6),
        );
        out
    }

    /// One CSV row per block, full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "name,multiplicity,weight,theta,f_target,n_inverse,n_swap,n_chisq_small,n_chisq_attaining,\
             raw_inverse,raw_swap,raw_chisq_small,raw_chisq_attaining,taylor_inverse,feasible\n",
        );
        for a in &self.allocations {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                csv_field(&a.name),
                a.multiplicity,
                a.weight,
                a.theta,
                a.f_target,
                a.shots_inverse.shots,
                a.shots_swap.shots,
                a.shots_chisq_small.shots,
                a.shots_chisq_attaining.shots,
                a.shots_inverse.raw,
                a.shots_swap.raw,
                a.shots_chisq_small.raw,
                a.shots_chisq_attaining.raw,
                a.taylor.inverse,
                a.is_feasible(),
            );
        }
        out
    }
}

fn shots_cell(e: &ShotEstimate) -> String {
    if e.is_feasible() {
        e.shots.to_string()
    } else {
        format!("infeasible ({})", format_sig(e.raw, 3))
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Chi-square settings used for the per-block chi-square counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChisqSettings {
    pub bins: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for ChisqSettings {
    fn default() -> Self {
        Self {
            bins: 16,
            alpha: 0.01,
            beta: 0.01,
        }
    }
}

/// Splits the program budget across blocks and converts each share to shot counts.
#[allow(clippy::too_many_arguments)]
pub fn allocate(
    blocks: &[BlockSpec],
    rates: &HardwareRates,
    f_prog: f64,
    p_e: f64,
    regime_factor: f64,
    chisq_bins: usize,
    alpha: f64,
    beta: f64,
) -> Result<BudgetReport> {
    if blocks.is_empty() {
        return Err(Error::domain("program has no blocks"));
    }
    check_open_unit("program fidelity", f_prog).map_err(|e| {
        if f_prog == 1.0 {
            Error::ZeroBudget
        } else {
            e
        }
    })?;
    check_open_unit("P_e", p_e)?;
    check_regime_factor(regime_factor)?;
    if chisq_bins < 2 {
        return Err(Error::domain(format!(
            "chi-square bins {chisq_bins} must be at least 2"
        )));
    }
    check_open_unit("beta", beta)?;
    if let Some(b) = blocks.iter().find(|b| b.multiplicity == 0) {
        return Err(Error::domain(format!(
            "block {:?} has zero multiplicity",
            b.name
        )));
    }

    let budget = theta_star(f_prog)?;
    if budget == 0.0 {
        return Err(Error::ZeroBudget);
    }
    let weights = blocks
        .iter()
        .map(|b| block_weight(b, rates))
        .collect::<Result<Vec<_>>>()?;
    let total_weight: f64 = blocks
        .iter()
        .zip(&weights)
        .map(|(b, w)| b.multiplicity as f64 * w)
        .sum();
    let lambda = lambda_noncentral((chisq_bins - 1) as u32, alpha, 1.0 - beta)?;
    let ln_pe = p_e.ln();

    let mut allocations = Vec::with_capacity(blocks.len());
    let mut total_angle_used = 0.0;
    let mut totals = ShotTotals::default();
    for (block, &weight) in blocks.iter().zip(&weights) {
        let theta = weight / total_weight * budget;
        let f_target = fidelity_target(theta)?;

        // sin-based forms keep full precision for tiny angles
        let sin2 = theta.sin().powi(2);
        let one_minus_cos = 2.0 * (0.5 * theta).sin().powi(2);
        let inverse = ShotEstimate::from_raw(
            regime_factor * ln_pe / (-sin2).ln_1p(),
            Formula::InverseReal,
        );
        let swap = ShotEstimate::from_raw(
            regime_factor * ln_pe / (-0.5 * sin2).ln_1p(),
            Formula::SwapReal,
        );
        let chisq_small = ShotEstimate::from_raw(
            lambda / (8.0 * one_minus_cos),
            Formula::ChiSquareSmallDiscrepancy,
        )
        .conservative();
        let chisq_attaining = ShotEstimate::from_raw(
            lambda / (0.25 * one_minus_cos * one_minus_cos),
            Formula::ChiSquareFidelityAttaining,
        );

        let theta2 = theta * theta;
        let taylor = TaylorShots {
            inverse: -regime_factor * ln_pe / theta2,
            swap: -2.0 * regime_factor * ln_pe / theta2,
            chisq_small: lambda / (4.0 * theta2),
            chisq_attaining: 16.0 * lambda / (theta2 * theta2),
        };

        let n = block.multiplicity as f64;
        total_angle_used += n * theta;
        totals.inverse += n * count(&inverse);
        totals.swap += n * count(&swap);
        totals.chisq_small += n * count(&chisq_small);
        totals.chisq_attaining += n * count(&chisq_attaining);

        allocations.push(BlockAllocation {
            name: block.name.clone(),
            multiplicity: block.multiplicity,
            weight,
            theta,
            f_target,
            shots_inverse: inverse,
            shots_swap: swap,
            shots_chisq_small: chisq_small,
            shots_chisq_attaining: chisq_attaining,
            taylor_shots_inverse: ShotEstimate::from_raw(taylor.inverse, Formula::InverseReal)
                .shots,
            taylor,
        });
    }
    debug_assert!((total_angle_used - budget).abs() <= BUDGET_IDENTITY_TOL);

    Ok(BudgetReport {
        f_prog,
        theta_star: budget,
        total_weight,
        total_angle_used,
        p_e,
        regime_factor,
        chisq_bins,
        chisq_lambda: lambda,
        allocations,
        total_shots: totals,
    })
}

fn count(e: &ShotEstimate) -> f64 {
    if e.is_feasible() {
        e.shots as f64
    } else {
        e.raw
    }
}

/// Program description read from a JSON spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramSpec {
    pub fidelity_target: f64,
    pub p_e: f64,
    #[serde(default = "unit_regime")]
    pub regime_factor: f64,
    #[serde(default)]
    pub chisq: ChisqSettings,
    #[serde(default)]
    pub hardware: HardwareRates,
    pub blocks: Vec<BlockSpec>,
}

fn unit_regime() -> f64 {
    1.0
}

fn spec_error(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Spec {
        path: path.into(),
        message: message.into(),
    }
}

impl ProgramSpec {
    /// Parses and validates; errors carry a JSON-pointer path to the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: ProgramSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = json_pointer(e.path());
            spec_error(pointer, e.into_inner().to_string())
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |path: &str, x: f64| {
            if x > 0.0 && x < 1.0 {
                Ok(())
            } else {
                Err(spec_error(path, format!("{x} must lie in (0, 1)")))
            }
        };
        let unit = |path: &str, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(spec_error(path, format!("{x} must lie in [0, 1]")))
            }
        };
        open_unit("/fidelity_target", self.fidelity_target)?;
        open_unit("/p_e", self.p_e)?;
        if !(1.0..=2.0).contains(&self.regime_factor) {
            return Err(spec_error(
                "/regime_factor",
                format!("{} must lie in [1, 2]", self.regime_factor),
            ));
        }
        if self.chisq.bins < 2 {
            return Err(spec_error("/chisq/bins", "need at least 2 bins"));
        }
        open_unit("/chisq/alpha", self.chisq.alpha)?;
        open_unit("/chisq/beta", self.chisq.beta)?;
        unit("/hardware/r1", self.hardware.r1)?;
        unit("/hardware/r2", self.hardware.r2)?;
        unit("/hardware/gamma", self.hardware.gamma)?;
        if self.blocks.is_empty() {
            return Err(spec_error("/blocks", "program has no blocks"));
        }
        for (i, block) in self.blocks.iter().enumerate() {
            if block.multiplicity == 0 {
                return Err(spec_error(
                    format!("/blocks/{i}/multiplicity"),
                    "must be at least 1",
                ));
            }
            if let Some(w) = block.explicit_weight {
                if !(w > 0.0) || !w.is_finite() {
                    return Err(spec_error(
                        format!("/blocks/{i}/weight"),
                        format!("zero weight: {w} must be positive"),
                    ));
                }
            }
            match block_weight(block, &self.hardware) {
                Err(Error::ZeroWeight { block }) => {
                    return Err(spec_error(
                        format!("/blocks/{i}"),
                        format!("zero weight: block {block:?} has no gates, depth, or explicit weight under these rates"),
                    ))
                }
                Err(e) => return Err(spec_error(format!("/blocks/{i}"), e.to_string())),
                Ok(_) => {}
            }
        }
        Ok(())
    }

    pub fn allocate(&self) -> Result<BudgetReport> {
        allocate(
            &self.blocks,
            &self.hardware,
            self.fidelity_target,
            self.p_e,
            self.regime_factor,
            self.chisq.bins,
            self.chisq.alpha,
            self.chisq.beta,
        )
    }
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        out.push('/');
        match segment {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_rates() -> HardwareRates {
        HardwareRates::new(1e-11, 1e-10, 0.0).unwrap()
    }

    #[test]
    fn theta_star_values() {
        assert_eq!(theta_star(1.0).unwrap(), 0.0);
        assert!((theta_star(0.99).unwrap() - 0.100).abs() < 5e-4);
        assert!((theta_star(0.0).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(theta_star(1.5).is_err());
    }

    #[test]
    fn gate_driven_weights() {
        let rates = example_rates();
        let a = BlockSpec::from_gates("A", 10, 50_000, 10_000);
        let b = BlockSpec::from_gates("B", 40, 20_000, 4_000);
        assert!((block_weight(&a, &rates).unwrap() / 1.5e-6 - 1.0).abs() < 1e-12);
        assert!((block_weight(&b, &rates).unwrap() / 6.0e-7 - 1.0).abs() < 1e-12);
        let idle = BlockSpec {
            depth: 100,
            ..BlockSpec::from_gates("idle", 1, 0, 0)
        };
        let rates = HardwareRates::new(1e-11, 1e-10, 1e-8).unwrap();
        assert!((block_weight(&idle, &rates).unwrap() - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn zero_weight_is_rejected() {
        let empty = BlockSpec::from_gates("empty", 1, 0, 0);
        assert_eq!(
            block_weight(&empty, &example_rates()),
            Err(Error::ZeroWeight {
                block: "empty".into()
            })
        );
        let explicit = BlockSpec::weighted("w", 1, 2.0);
        assert_eq!(block_weight(&explicit, &example_rates()).unwrap(), 2.0);
    }

    #[test]
    fn fidelity_target_values() {
        assert_eq!(fidelity_target(0.0).unwrap(), 1.0);
        assert!((fidelity_target(0.050).unwrap() - 0.9975).abs() < 1e-4);
        assert!((fidelity_target(0.017).unwrap() - 0.9997).abs() < 1e-4);
        for theta in [1e-4, 1e-3, 1e-2, 0.05] {
            let f = fidelity_target(theta).unwrap();
            assert!((f - (1.0 - theta * theta)).abs() <= theta.powi(4) + 1e-15);
        }
        assert!(fidelity_target(std::f64::consts::FRAC_PI_2).is_err());
        assert!(fidelity_target(-0.1).is_err());
    }

    #[test]
    fn zero_budget_and_bad_inputs() {
        let blocks = [BlockSpec::weighted("a", 1, 1.0)];
        let rates = HardwareRates::default();
        assert_eq!(
            allocate(&blocks, &rates, 1.0, 0.05, 1.0, 16, 0.01, 0.01),
            Err(Error::ZeroBudget)
        );
        assert!(allocate(&[], &rates, 0.99, 0.05, 1.0, 16, 0.01, 0.01).is_err());
        assert!(allocate(&blocks, &rates, 0.99, 0.05, 2.5, 16, 0.01, 0.01).is_err());
        assert!(allocate(&blocks, &rates, 0.99, 0.05, 1.0, 1, 0.01, 0.01).is_err());
    }

    #[test]
    fn few_blocks_example() {
        let blocks: Vec<_> = [1.0, 2.0, 3.0]
            .iter()
            .enumerate()
            .map(|(i, &w)| BlockSpec::weighted(format!("f{}", i + 1), 1, w))
            .collect();
        let report = allocate(
            &blocks,
            &HardwareRates::default(),
            0.99,
            0.05,
            1.0,
            16,
            0.01,
            0.01,
        )
        .unwrap();
        let thetas: Vec<f64> = report.allocations.iter().map(|a| a.theta).collect();
        for (got, want) in thetas.iter().zip([0.017, 0.033, 0.050]) {
            assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        }
        assert!((report.total_angle_used - report.theta_star).abs() < 1e-12);
        for a in &report.allocations {
            assert!((a.f_target - a.theta.cos().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn spec_parsing_reports_paths() {
        let good = r#"{
            "fidelity_target": 0.99, "p_e": 0.05, "regime_factor": 1,
            "chisq": {"bins": 16, "alpha": 0.01, "beta": 0.01},
            "hardware": {"r1": 1e-11, "r2": 1e-10, "gamma": 0},
            "blocks": [{"name": "A", "multiplicity": 10, "g1": 50000, "g2": 10000, "depth": 0}]
        }"#;
        let spec = ProgramSpec::from_json(good).unwrap();
        assert_eq!(spec.blocks[0].multiplicity, 10);

        let bad_type = good.replace("\"g2\": 10000", "\"g2\": \"many\"");
        match ProgramSpec::from_json(&bad_type) {
            Err(Error::Spec { path, .. }) => assert_eq!(path, "/blocks/0/g2"),
            other => panic!("unexpected {other:?}"),
        }

        let zero = good.replace("\"g1\": 50000, \"g2\": 10000", "\"g1\": 0, \"g2\": 0");
        match ProgramSpec::from_json(&zero) {
            Err(Error::Spec { path, message }) => {
                assert_eq!(path, "/blocks/0");
                assert!(message.contains("zero weight"));
            }
            other => panic!("unexpected {other:?}"),
        }

        let bad_range = good.replace("\"p_e\": 0.05", "\"p_e\": 1.5");
        match ProgramSpec::from_json(&bad_range) {
            Err(Error::Spec { path, .. }) => assert_eq!(path, "/p_e"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_and_table_render() {
        let blocks = [
            BlockSpec::weighted("a,b", 2, 1.0),
            BlockSpec::weighted("c", 1, 3.0),
        ];
        let report = allocate(
            &blocks,
            &HardwareRates::default(),
            0.99,
            0.05,
            1.0,
            16,
            0.01,
            0.01,
        )
        .unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("\"a,b\",2,"));
        let table = report.to_table();
        assert!(table.contains("N_inverse"));
        assert!(table.contains("theta_star"));
    }

    #[test]
    fn infeasible_counts_are_flagged() {
        let blocks = [
            BlockSpec::weighted("tiny", 1, 1e-12),
            BlockSpec::weighted("big", 1, 1.0),
        ];
        let report = allocate(
            &blocks,
            &HardwareRates::default(),
            0.99,
            0.05,
            1.0,
            16,
            0.01,
            0.01,
        )
        .unwrap();
        let names: Vec<&str> = report
            .infeasible_blocks()
            .map(|a| a.name.as_str())
            .collect();
        assert_eq!(names, vec!["tiny"]);
        assert!(report.to_table().contains("infeasible"));
    }
}
