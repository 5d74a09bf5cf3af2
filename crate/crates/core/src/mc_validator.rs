//! Monte Carlo checks of the analytic shot estimates.
//!
//! Each simulator runs `trials` independent trials. Trial `t` draws from
//! [`Stream::for_trial`]`(seed, t)`, so the result is the same regardless of
//! how rayon schedules the work. Proportion-type results report
//! `standard_error = sqrt(p (1 - p) / trials)` and `ci95 = p +- 1.96 SE`.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_open_unit, check_unit};
use crate::rng::{Stream, ALGORITHM};
use crate::stat_power::{
    binomial_rejection_threshold, chi2_quantile, chisq_validity, pearson_statistic, Distribution,
    ValidityWarning,
};
use crate::states::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("Monte Carlo needs at least one trial"));
        }
        Ok(Self { trials, seed })
    }

    pub fn rng_algorithm(&self) -> &'static str {
        ALGORITHM
    }

    fn check(&self) -> Result<()> {
        Self::new(self.trials, self.seed).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McResult {
    pub estimate: f64,
    pub standard_error: f64,
    pub trials: u64,
    pub ci95: (f64, f64),
}

impl McResult {
    pub fn from_hits(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        Self {
            estimate: p,
            standard_error: se,
            trials,
            ci95: (p - 1.96 * se, p + 1.96 * se),
        }
    }

    /// Distance from `expected` in units of the binomial standard error at `expected`.
    ///
    /// Using the expected rate rather than the estimate keeps the band
    /// meaningful when the estimate is 0 or 1.
    pub fn z_score(&self, expected: f64) -> f64 {
        let se = (expected * (1.0 - expected) / self.trials as f64).sqrt();
        let diff = self.estimate - expected;
        if se == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(diff)
            }
        } else {
            diff / se
        }
    }

    pub fn within(&self, expected: f64, standard_errors: f64) -> bool {
        self.z_score(expected).abs() <= standard_errors
    }
}

fn count_hits(cfg: &McConfig, trial: impl Fn(&mut Stream) -> bool + Sync) -> u64 {
    (0..cfg.trials)
        .into_par_iter()
        .filter(|&t| trial(&mut Stream::for_trial(cfg.seed, t)))
        .count() as u64
}

/// A miss happens when `shots` independent Bernoulli(`accept`) outcomes all accept.
fn miss_rate(accept: f64, shots: u64, cfg: &McConfig) -> McResult {
    let hits = count_hits(cfg, |rng| (0..shots).all(|_| rng.bernoulli(accept)));
    McResult::from_hits(hits, cfg.trials)
}

fn check_miss_inputs(fidelity: f64, shots: u64, cfg: &McConfig) -> Result<()> {
    cfg.check()?;
    check_unit("fidelity", fidelity)?;
    if fidelity == 1.0 {
        return Err(Error::domain("fidelity must be below 1"));
    }
    if shots == 0 {
        return Err(Error::domain("need at least one shot"));
    }
    Ok(())
}

/// Fraction of trials in which `shots` inverse tests all return the all-zero string. Expected `F^N`.
pub fn simulate_inverse_miss_rate(fidelity: f64, shots: u64, cfg: &McConfig) -> Result<McResult> {
    check_miss_inputs(fidelity, shots, cfg)?;
    Ok(miss_rate(fidelity, shots, cfg))
}

/// Fraction of trials in which `shots` swap tests all accept. Expected `(1/2 + F/2)^N`.
pub fn simulate_swap_miss_rate(fidelity: f64, shots: u64, cfg: &McConfig) -> Result<McResult> {
    check_miss_inputs(fidelity, shots, cfg)?;
    Ok(miss_rate(0.5 + 0.5 * fidelity, shots, cfg))
}

/// Chi-square rejection rate together with the validity warnings for `(shots, q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChisqPowerResult {
    pub result: McResult,
    pub critical_value: f64,
    pub warnings: Vec<ValidityWarning>,
}

/// Draws `Multinomial(shots, p)` samples and tests each against `q` at level `alpha`.
pub fn simulate_chisq_power(
    p: &Distribution,
    q: &Distribution,
    shots: u64,
    alpha: f64,
    cfg: &McConfig,
) -> Result<ChisqPowerResult> {
    cfg.check()?;
    check_open_unit("alpha", alpha)?;
    if p.k() != q.k() {
        return Err(Error::DimensionMismatch {
            left: p.k(),
            right: q.k(),
        });
    }
    if p.k() < 2 {
        return Err(Error::domain("chi-square test needs at least 2 bins"));
    }
    if shots == 0 {
        return Err(Error::domain("need at least one shot"));
    }
    if let Some(bin) = q.probs().iter().position(|&x| !(x > 0.0)) {
        return Err(Error::ZeroExpectedBin { bin });
    }
    let critical_value = chi2_quantile(1.0 - alpha, (p.k() - 1) as f64)?;
    let hits = count_hits(cfg, |rng| {
        let counts = rng.multinomial(shots, p.probs());
        let (statistic, _) = pearson_statistic(&counts, q).expect("inputs validated above");
        statistic > critical_value
    });
    Ok(ChisqPowerResult {
        result: McResult::from_hits(hits, cfg.trials),
        critical_value,
        warnings: chisq_validity(shots, q),
    })
}

/// Rate at which the exact binomial test against baseline `q0` flags a device whose true rate is `q1`.
pub fn simulate_binomial_detection(
    q0: f64,
    q1: f64,
    shots: u64,
    alpha: f64,
    cfg: &McConfig,
) -> Result<McResult> {
    cfg.check()?;
    check_unit("q0", q0)?;
    check_unit("q1", q1)?;
    if !(q0 > q1) {
        return Err(Error::BaselineNotAboveTarget { q0, q1 });
    }
    if !(q1 > 0.0) {
        return Err(Error::domain(format!(
            "target probability q1 = {q1} must be positive"
        )));
    }
    if shots == 0 {
        return Err(Error::domain("need at least one shot"));
    }
    // The p-value is increasing in the zero count, so the decision reduces to a threshold.
    let threshold = binomial_rejection_threshold(shots, q0, alpha)?;
    let hits = match threshold {
        None => 0,
        Some(c) => count_hits(cfg, |rng| rng.binomial(shots, q1) <= c),
    };
    Ok(McResult::from_hits(hits, cfg.trials))
}

/// Grid minimum of `Tr(rho^s sigma^(1-s))` over `grid_points` evenly spaced `s` in `[0, 1]`.
///
/// Spectra come from nalgebra's Hermitian eigensolver rather than the
/// crate's own Jacobi routine, so this is an independent check on
/// [`crate::states::qcb_q`]. Eigenvalues below `dim * eps * max` are treated
/// as exact zeros (outside the support). Returns `(q, s)`.
pub fn qcb_grid_oracle(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    grid_points: usize,
) -> Result<(f64, f64)> {
    if grid_points < 2 {
        return Err(Error::domain("grid needs at least 2 points"));
    }
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let n = rho.dim();
    let (a, u) = spectrum(rho);
    let (b, v) = spectrum(sigma);
    let overlaps = u.adjoint() * &v;
    // Terms w_ij a_i^s b_j^(1-s), stored as (w_ij, ln a_i, ln b_j) on the joint support.
    let terms: Vec<(f64, f64, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let w = overlaps[(i, j)].norm_sqr();
            (a[i] > 0.0 && b[j] > 0.0 && w > 0.0).then(|| (w, a[i].ln(), b[j].ln()))
        })
        .collect();

    let g = |s: f64| -> f64 {
        terms
            .iter()
            .map(|&(w, ln_a, ln_b)| w * (s * ln_a + (1.0 - s) * ln_b).exp())
            .sum()
    };
    let cells = (grid_points - 1) as f64;
    let best = (0..grid_points)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 / cells;
            (g(s), s)
        })
        .reduce(
            || (f64::INFINITY, 0.0),
            |x, y| {
                if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) {
                    y
                } else {
                    x
                }
            },
        );
    Ok(best)
}

fn spectrum(rho: &DensityMatrix) -> (Vec<f64>, DMatrix<Complex<f64>>) {
    let n = rho.dim();
    let m = rho.matrix();
    let dense = DMatrix::from_fn(n, n, |i, j| {
        let z = m[(i, j)];
        Complex::new(z.re, z.im)
    });
    let eig = SymmetricEigen::new(dense);
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cutoff = n as f64 * f64::EPSILON * top;
    let values = eig
        .eigenvalues
        .iter()
        .map(|&x| if x > cutoff { x } else { 0.0 })
        .collect();
    (values, eig.eigenvectors)
}
