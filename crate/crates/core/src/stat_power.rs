//! Classical statistics for distribution-based and noise-calibrated tests.
//!
//! Chi-square side: Pearson effect size `w^2`, Hellinger distance, the
//! noncentrality `lambda(df, alpha, power)` of a noncentral chi-square, and
//! shot counts `N = lambda / w^2`, including the two fidelity-linked special
//! cases. Binomial side: the normal-approximation two-proportion planner and
//! an exact one-sided binomial decision against a calibrated baseline.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_open_unit, check_unit};
use crate::numerics::{
    ln_gamma, normal_quantile, regularized_gamma_p, regularized_gamma_q, solve_increasing,
};
use crate::shot_estimators::{Formula, ShotEstimate};
use crate::tolerances::{DISTRIBUTION_FILE_SUM, DISTRIBUTION_SUM, NONCENTRAL_TAIL};
use crate::{Error, Result};

/// Cochran's minimum expected count per bin.
pub const MIN_EXPECTED_COUNT: f64 = 5.0;
/// Smallest total sample size for which the chi-square approximation is trusted.
pub const MIN_TOTAL_COUNT: u64 = 13;

/// Probability vector over `k` outcome bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::validated(probs, DISTRIBUTION_SUM)
    }

    /// Accepts a looser sum tolerance (for values read from files), then renormalizes.
    pub fn renormalized(probs: Vec<f64>) -> Result<Self> {
        let d = Self::validated(probs, DISTRIBUTION_FILE_SUM)?;
        let total: f64 = d.probs.iter().sum();
        Ok(Self {
            probs: d.probs.into_iter().map(|p| p / total).collect(),
        })
    }

    /// Parses a JSON array of probabilities.
    pub fn from_json(text: &str) -> Result<Self> {
        let probs: Vec<f64> = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("malformed distribution file: {e}")))?;
        Self::renormalized(probs)
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("a distribution needs at least one bin"));
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
        })
    }

    fn validated(probs: Vec<f64>, tolerance: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("a distribution needs at least one bin"));
        }
        if let Some(i) = probs.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::domain(format!(
                "probability {} at bin {i} must be finite and nonnegative",
                probs[i]
            )));
        }
        let total: f64 = probs.iter().sum();
        if !((total - 1.0).abs() <= tolerance) {
            return Err(Error::domain(format!(
                "probabilities sum to {total}, not 1 within {tolerance:e}"
            )));
        }
        Ok(Self { probs })
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let probs = Vec::<f64>::deserialize(deserializer)?;
        Distribution::renormalized(probs).map_err(serde::de::Error::custom)
    }
}

fn check_same_k(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.k() == q.k() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: p.k(),
            right: q.k(),
        })
    }
}

/// Pearson effect size `w^2 = sum (p_i - q_i)^2 / q_i`.
pub fn chi2_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_same_k(p, q)?;
    p.probs()
        .iter()
        .zip(q.probs())
        .enumerate()
        .map(|(bin, (&pi, &qi))| {
            if qi > 0.0 {
                Ok((pi - qi).powi(2) / qi)
            } else {
                Err(Error::ZeroExpectedBin { bin })
            }
        })
        .sum()
}

/// Bhattacharyya coefficient `sum sqrt(p_i q_i)`.
pub fn bhattacharyya_coefficient(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_same_k(p, q)?;
    let bc: f64 = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok(bc.min(1.0))
}

/// Hellinger distance `sqrt(1 - BC(p, q))`.
pub fn hellinger_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    Ok((1.0 - bhattacharyya_coefficient(p, q)?).max(0.0).sqrt())
}

/// Central chi-square CDF.
pub fn chi2_cdf(x: f64, df: f64) -> Result<f64> {
    regularized_gamma_p(0.5 * df, 0.5 * x.max(0.0))
}

/// Central chi-square upper-tail probability.
pub fn chi2_sf(x: f64, df: f64) -> Result<f64> {
    regularized_gamma_q(0.5 * df, 0.5 * x.max(0.0))
}

/// Central chi-square quantile.
pub fn chi2_quantile(p: f64, df: f64) -> Result<f64> {
    check_open_unit("probability", p)?;
    if !(df > 0.0) {
        return Err(Error::domain(format!(
            "degrees of freedom {df} must be positive"
        )));
    }
    solve_increasing(|x| chi2_cdf(x, df).unwrap_or(f64::NAN), p, 0.0, df)
}

/// Poisson(`lambda / 2`) mixture weights of the noncentral chi-square,
/// folded against a per-index function of the shifted degrees of freedom.
///
/// The sum runs outward from the Poisson mode and stops once the retained
/// weight reaches `1 - 1e-12`.
fn poisson_mixture(lambda: f64, mut term: impl FnMut(u64) -> Result<f64>) -> Result<f64> {
    let h = 0.5 * lambda;
    if h == 0.0 {
        return term(0);
    }
    let ln_h = h.ln();
    let weight = |j: u64| (-h + j as f64 * ln_h - ln_gamma(j as f64 + 1.0)).exp();
    let mode = h.floor() as u64;

    let mut total = 0.0;
    let mut mass = 0.0;
    let mut j = mode;
    loop {
        let w = weight(j);
        total += w * term(j)?;
        mass += w;
        // below-mode weights decay geometrically; stop once they are negligible
        if j == 0 || w < NONCENTRAL_TAIL * 1e-6 {
            break;
        }
        j -= 1;
    }
    let limit = mode + 1_000 + (50.0 * h.sqrt()) as u64;
    let mut j = mode + 1;
    while 1.0 - mass > NONCENTRAL_TAIL {
        if j > limit {
            return Err(Error::NoConvergence {
                what: "noncentral chi-square series",
                iterations: (limit - mode) as usize,
            });
        }
        let w = weight(j);
        total += w * term(j)?;
        mass += w;
        j += 1;
    }
    Ok(total)
}

/// Noncentral chi-square CDF as a Poisson mixture of central CDFs.
pub fn noncentral_chi2_cdf(x: f64, df: f64, lambda: f64) -> Result<f64> {
    check_noncentral(df, lambda)?;
    poisson_mixture(lambda, |j| chi2_cdf(x, df + 2.0 * j as f64)).map(|v| v.clamp(0.0, 1.0))
}

/// Noncentral chi-square upper tail; summed directly so small tails keep their precision.
pub fn noncentral_chi2_sf(x: f64, df: f64, lambda: f64) -> Result<f64> {
    check_noncentral(df, lambda)?;
    poisson_mixture(lambda, |j| chi2_sf(x, df + 2.0 * j as f64)).map(|v| v.clamp(0.0, 1.0))
}

fn check_noncentral(df: f64, lambda: f64) -> Result<()> {
    if !(df > 0.0) {
        return Err(Error::domain(format!(
            "degrees of freedom {df} must be positive"
        )));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!(
            "noncentrality {lambda} must be finite and nonnegative"
        )));
    }
    Ok(())
}

/// Power of the level-`alpha` Pearson test when the statistic is noncentral with `lambda`.
pub fn chisq_power(df: u32, alpha: f64, lambda: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    let critical = chi2_quantile(1.0 - alpha, df as f64)?;
    noncentral_chi2_sf(critical, df as f64, lambda)
}

/// Noncentrality `lambda` at which a level-`alpha` chi-square test with `df`
/// degrees of freedom reaches the requested power.
///
/// The critical value is the central `1 - alpha` quantile; power is the
/// noncentral upper tail beyond it.
pub fn lambda_noncentral(df: u32, alpha: f64, power: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::domain("degrees of freedom must be at least 1"));
    }
    check_open_unit("alpha", alpha)?;
    check_open_unit("power", power)?;
    if power < alpha {
        return Err(Error::domain(format!(
            "power {power} cannot be below the test level alpha = {alpha}"
        )));
    }
    let dff = df as f64;
    let critical = chi2_quantile(1.0 - alpha, dff)?;
    let power_at = |lambda| noncentral_chi2_sf(critical, dff, lambda).unwrap_or(f64::NAN);
    // the critical value is only known to ~1e-9, so power at zero can land a hair above alpha
    if power_at(0.0) >= power {
        return Ok(0.0);
    }
    solve_increasing(power_at, power, 0.0, dff.max(1.0))
}

/// Sample-size plan for a chi-square goodness-of-fit test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquarePlan {
    pub k: usize,
    pub df: u32,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub w2: f64,
    pub estimate: ShotEstimate,
}

impl ChiSquarePlan {
    pub fn shots(&self) -> u64 {
        self.estimate.shots
    }
}

/// `N = lambda(k - 1, alpha, 1 - beta) / w^2`.
pub fn shots_chisq(w2: f64, k: usize, alpha: f64, beta: f64) -> Result<ChiSquarePlan> {
    shots_chisq_as(w2, k, alpha, beta, Formula::ChiSquare)
}

pub(crate) fn shots_chisq_as(
    w2: f64,
    k: usize,
    alpha: f64,
    beta: f64,
    formula: Formula,
) -> Result<ChiSquarePlan> {
    if !(w2 > 0.0) || !w2.is_finite() {
        return Err(Error::domain(format!(
            "effect size w^2 = {w2} must be positive"
        )));
    }
    if k < 2 {
        return Err(Error::domain(format!(
            "chi-square test needs at least 2 bins, got {k}"
        )));
    }
    check_open_unit("beta", beta)?;
    let df = (k - 1) as u32;
    let lambda = lambda_noncentral(df, alpha, 1.0 - beta)?;
    Ok(ChiSquarePlan {
        k,
        df,
        alpha,
        beta,
        lambda,
        w2,
        estimate: ShotEstimate::from_raw(lambda / w2, formula),
    })
}

/// `w^2 = (1 - sqrt F)^2 / 4`: a readout whose classical overlap attains the fidelity.
pub fn w2_fidelity_attaining(fidelity: f64) -> Result<f64> {
    check_unit("fidelity", fidelity)?;
    Ok(0.25 * (1.0 - fidelity.sqrt()).powi(2))
}

/// `w^2 = 8 (1 - sqrt F)`: upper envelope for nearby distributions.
pub fn w2_small_discrepancy(fidelity: f64) -> Result<f64> {
    check_unit("fidelity", fidelity)?;
    Ok(8.0 * (1.0 - fidelity.sqrt()))
}

/// Optimistic (upper) chi-square shot count for a fidelity-attaining readout.
pub fn shots_chisq_fidelity_attaining(
    fidelity: f64,
    k: usize,
    alpha: f64,
    beta: f64,
) -> Result<ChiSquarePlan> {
    let w2 = w2_fidelity_attaining(fidelity)?;
    if w2 == 0.0 {
        return Err(Error::DegenerateStates);
    }
    shots_chisq_as(w2, k, alpha, beta, Formula::ChiSquareFidelityAttaining)
}

/// Lower-bound chi-square shot count in the small-discrepancy regime.
pub fn shots_chisq_small_discrepancy(
    fidelity: f64,
    k: usize,
    alpha: f64,
    beta: f64,
) -> Result<ChiSquarePlan> {
    let w2 = w2_small_discrepancy(fidelity)?;
    if w2 == 0.0 {
        return Err(Error::DegenerateStates);
    }
    shots_chisq_as(w2, k, alpha, beta, Formula::ChiSquareSmallDiscrepancy).map(|mut plan| {
        plan.estimate = plan.estimate.conservative();
        plan
    })
}

/// Pearson statistic of observed counts against expected probabilities, with `df = k - 1`.
pub fn pearson_statistic(observed: &[u64], expected: &Distribution) -> Result<(f64, usize)> {
    if observed.len() != expected.k() {
        return Err(Error::DimensionMismatch {
            left: observed.len(),
            right: expected.k(),
        });
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(Error::domain("no observations"));
    }
    let n = n as f64;
    let mut chi2 = 0.0;
    for (bin, (&o, &q)) in observed.iter().zip(expected.probs()).enumerate() {
        let e = n * q;
        if !(e > 0.0) {
            return Err(Error::ZeroExpectedBin { bin });
        }
        chi2 += (o as f64 - e).powi(2) / e;
    }
    Ok((chi2, expected.k() - 1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidityWarning {
    SmallSample { n: u64 },
    LowExpectedCount { bin: usize, expected: f64 },
}

impl fmt::Display for ValidityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidityWarning::SmallSample { n } => write!(
                f,
                "N = {n} is below {MIN_TOTAL_COUNT}; the chi-square approximation is unreliable"
            ),
            ValidityWarning::LowExpectedCount { bin, expected } => write!(
                f,
                "bin {bin} expects {expected:.3} counts (< {MIN_EXPECTED_COUNT}); \
                 merge bins so that all expected counts exceed {MIN_EXPECTED_COUNT}"
            ),
        }
    }
}

/// Heuristic checks on a (planned or observed) sample size: `N >= 13` and `N q_i >= 5`.
pub fn chisq_validity(n: u64, q: &Distribution) -> Vec<ValidityWarning> {
    let mut warnings = Vec::new();
    if n < MIN_TOTAL_COUNT {
        warnings.push(ValidityWarning::SmallSample { n });
    }
    for (bin, &p) in q.probs().iter().enumerate() {
        let expected = n as f64 * p;
        if expected < MIN_EXPECTED_COUNT {
            warnings.push(ValidityWarning::LowExpectedCount { bin, expected });
        }
    }
    warnings
}

/// Shot plan for detecting a drop of the success rate from `q0` to `q1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinomialPlan {
    pub q0: f64,
    pub q1: f64,
    pub alpha: f64,
    pub beta: f64,
    pub one_sided: bool,
    pub estimate: ShotEstimate,
}

impl BinomialPlan {
    pub fn shots(&self) -> u64 {
        self.estimate.shots
    }
}

/// Per-group sample size of a one-sided two-proportion z-test, no continuity correction.
///
/// `n = [z_{1-a} sqrt(2 pbar (1 - pbar)) + z_{1-b} sqrt(q0 (1 - q0) + q1 (1 - q1))]^2 / (q0 - q1)^2`.
pub fn two_proportion_shots(q0: f64, q1: f64, alpha: f64, beta: f64) -> Result<BinomialPlan> {
    check_unit("q0", q0)?;
    check_unit("q1", q1)?;
    check_open_unit("alpha", alpha)?;
    check_open_unit("beta", beta)?;
    if !(q0 > q1) {
        return Err(Error::BaselineNotAboveTarget { q0, q1 });
    }
    if !(q1 > 0.0) {
        return Err(Error::domain(format!(
            "target probability q1 = {q1} must be positive"
        )));
    }
    let z_alpha = normal_quantile(1.0 - alpha)?;
    let z_beta = normal_quantile(1.0 - beta)?;
    let pbar = 0.5 * (q0 + q1);
    let null_sd = (2.0 * pbar * (1.0 - pbar)).sqrt();
    let alt_sd = (q0 * (1.0 - q0) + q1 * (1.0 - q1)).sqrt();
    let raw = ((z_alpha * null_sd + z_beta * alt_sd) / (q0 - q1)).powi(2);
    Ok(BinomialPlan {
        q0,
        q1,
        alpha,
        beta,
        one_sided: true,
        estimate: ShotEstimate::from_raw(raw, Formula::TwoProportion),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinomialDecision {
    pub reject: bool,
    pub p_value: f64,
}

/// `k ln(y)` with `0 ln(0) = 0`.
fn xlogy(k: f64, y: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * y.ln()
    }
}

/// `P[Bin(n, p) <= x]`, summed term by term in log space.
pub fn binomial_cdf(x: u64, n: u64, p: f64) -> Result<f64> {
    check_unit("p", p)?;
    if x >= n {
        return Ok(1.0);
    }
    let mut ln_choose = 0.0;
    let mut ln_terms = Vec::with_capacity(x as usize + 1);
    for k in 0..=x {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let ln_term = ln_choose + xlogy(k as f64, p) + xlogy((n - k) as f64, 1.0 - p);
        ln_terms.push(ln_term);
    }
    let top = ln_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let sum: f64 = ln_terms.iter().map(|t| (t - top).exp()).sum();
    Ok((top + sum.ln()).exp().clamp(0.0, 1.0))
}

/// One-sided exact binomial test of `H0: rate = q0` against `H1: rate < q0`.
///
/// `p_value = P[Bin(n, q0) <= zero_count]`; rejects when `p_value <= alpha`.
pub fn binomial_decision(zero_count: u64, n: u64, q0: f64, alpha: f64) -> Result<BinomialDecision> {
    if zero_count > n {
        return Err(Error::domain(format!(
            "zero count {zero_count} exceeds shot count {n}"
        )));
    }
    if !(q0 > 0.0 && q0 <= 1.0) {
        return Err(Error::domain(format!(
            "baseline q0 = {q0} must lie in (0, 1]"
        )));
    }
    check_open_unit("alpha", alpha)?;
    let p_value = binomial_cdf(zero_count, n, q0)?;
    Ok(BinomialDecision {
        reject: p_value <= alpha,
        p_value,
    })
}

/// Largest zero count that [`binomial_decision`] rejects, if any.
pub fn binomial_rejection_threshold(n: u64, q0: f64, alpha: f64) -> Result<Option<u64>> {
    let mut threshold = None;
    for x in 0..=n {
        if binomial_decision(x, n, q0, alpha)?.reject {
            threshold = Some(x);
        } else {
            break;
        }
    }
    Ok(threshold)
}

/// Exact probability that [`binomial_decision`] rejects when the true rate is `q1`.
pub fn binomial_exact_power(n: u64, q0: f64, q1: f64, alpha: f64) -> Result<f64> {
    check_unit("q1", q1)?;
    match binomial_rejection_threshold(n, q0, alpha)? {
        Some(c) => binomial_cdf(c, n, q1),
        None => Ok(0.0),
    }
}
