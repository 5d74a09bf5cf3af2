//! Quantum states and the distinguishability measures built on them:
//! Uhlmann fidelity, trace distance, the quantum Chernoff quantity `Q`,
//! the Bures angle, and the acceptance probabilities of the inverse and
//! swap tests.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::check_unit;
use crate::numerics::{clamp_psd_eigenvalue, support_power, zero_rounding_eigenvalues};
use crate::numerics::{
    hermitian_eigendecomposition, minimize_unimodal, ComplexMatrix, EigenDecomposition,
};
use crate::rng::Stream;
use crate::tolerances::{
    FIDELITY_DRIFT, HERMITIAN, PSD_EIGENVALUE, QCB_GRID_POINTS, QCB_REFINE_TOL, STATE_NORMALIZATION,
};
use crate::{Error, Result};

/// Largest register handled by the state types.
pub const MAX_QUBITS: u32 = 8;

/// Normalized amplitude vector of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    qubits: u32,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let qubits = qubits_for_dim(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !((norm - 1.0).abs() <= STATE_NORMALIZATION) {
            return Err(Error::InvalidState(format!(
                "normalization: sum of |a_i|^2 is {norm}, not 1 within {STATE_NORMALIZATION:e}"
            )));
        }
        Ok(Self { qubits, amplitudes })
    }

    /// Computational basis state `|index>` on `qubits` qubits.
    pub fn basis(qubits: u32, index: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::domain(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes)
    }

    /// Scales an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState(
                "zero vector cannot be normalized".into(),
            ));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn to_density(&self) -> DensityMatrix {
        let matrix = ComplexMatrix::outer(&self.amplitudes);
        DensityMatrix::new(matrix).expect("a normalized pure state is a valid density matrix")
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix on `n` qubits.
///
/// The spectrum is computed once at construction and reused by every
/// functional that needs it.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    qubits: u32,
    matrix: ComplexMatrix,
    spectrum: EigenDecomposition,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let qubits = qubits_for_dim(matrix.dim())?;
        let deviation = matrix.hermiticity_deviation();
        if !(deviation <= HERMITIAN) {
            return Err(Error::InvalidState(format!(
                "hermiticity: max |rho - rho^dagger| is {deviation:e}, above {HERMITIAN:e}"
            )));
        }
        let trace = matrix.trace().re;
        if !((trace - 1.0).abs() <= STATE_NORMALIZATION) {
            return Err(Error::InvalidState(format!(
                "unit trace: trace is {trace}, not 1 within {STATE_NORMALIZATION:e}"
            )));
        }
        let mut spectrum = hermitian_eigendecomposition(&matrix)?;
        for l in &mut spectrum.eigenvalues {
            *l = clamp_psd_eigenvalue(*l).map_err(|_| {
                Error::InvalidState(format!(
                    "positivity: eigenvalue {l:e} is below -{PSD_EIGENVALUE:e}"
                ))
            })?;
        }
        zero_rounding_eigenvalues(&mut spectrum.eigenvalues);
        Ok(Self {
            qubits,
            matrix,
            spectrum,
        })
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probs))
    }

    /// Maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(qubits: u32) -> Result<Self> {
        let dim = 1usize << qubits;
        Self::new(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues (ascending; small negatives and rounding-level values set to 0).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.spectrum.eigenvectors
    }

    /// `rho^p` for `p` in `[0, 1]` with the `0^0 = 0` support convention.
    pub fn power(&self, p: f64) -> ComplexMatrix {
        self.spectrum.map_spectrum(|l| support_power(l, p))
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.eigenvalues.iter().map(|l| l * l).sum()
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() <= 1e-10
    }
}

/// Outcome of the minimization over `s` of `Tr(rho^s sigma^(1-s))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QcbResult {
    pub q: f64,
    pub s_star: f64,
    /// `-ln q`; infinite for states with disjoint supports.
    pub exponent: f64,
}

/// Device noise as seen by the inverse or swap test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Probability that the all-zero (or ancilla-zero) outcome survives the noise.
    pub p_f: f64,
    /// Regime factor `R` in `[1, 2]`: 1 for pure or pure-mixed, up to 2 for mixed-mixed.
    pub regime_factor: f64,
}

impl NoiseModel {
    /// `R` is capped at 2; heavier noise regimes go through the raw QCB shot formula.
    pub fn new(p_f: f64, regime_factor: f64) -> Result<Self> {
        check_unit("p_f", p_f)?;
        check_regime_factor(regime_factor)?;
        Ok(Self { p_f, regime_factor })
    }

    pub fn ideal() -> Self {
        Self {
            p_f: 1.0,
            regime_factor: 1.0,
        }
    }
}

pub(crate) fn check_regime_factor(r: f64) -> Result<()> {
    if (1.0..=2.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "regime factor R = {r} must lie in [1, 2]"
        )))
    }
}

fn qubits_for_dim(dim: usize) -> Result<u32> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!(
            "dimension: {dim} is not a power of two"
        )));
    }
    let qubits = dim.trailing_zeros();
    if qubits > MAX_QUBITS {
        return Err(Error::InvalidState(format!(
            "dimension: {qubits} qubits exceeds the supported maximum of {MAX_QUBITS}"
        )));
    }
    Ok(qubits)
}

fn check_same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

fn clamp_drift(name: &str, value: f64) -> Result<f64> {
    if (-FIDELITY_DRIFT..=1.0 + FIDELITY_DRIFT).contains(&value) {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(Error::InvalidState(format!(
            "{name} evaluated to {value}, outside [0, 1] beyond numerical drift"
        )))
    }
}

/// Uhlmann fidelity `(Tr |sqrt(rho) sqrt(sigma)|)^2`.
///
/// The nuclear norm is the sum of singular values of `sqrt(rho) sqrt(sigma)`,
/// taken as square roots of the eigenvalues of its Gram matrix.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let product = &rho.power(0.5) * &sigma.power(0.5);
    let gram = &product.adjoint() * &product;
    let mut eig = hermitian_eigendecomposition(&gram)?;
    zero_rounding_eigenvalues(&mut eig.eigenvalues);
    let nuclear: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
    clamp_drift("fidelity", nuclear * nuclear)
}

/// `|<phi|psi>|^2`.
pub fn fidelity_pure(psi: &PureState, phi: &PureState) -> Result<f64> {
    Ok(phi.inner(psi)?.norm_sqr().min(1.0))
}

/// `(1/2) ||rho - sigma||_1` from the spectrum of the difference.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let diff = rho.matrix() - sigma.matrix();
    let eig = hermitian_eigendecomposition(&diff)?;
    let t = 0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
    clamp_drift("trace distance", t)
}

/// Precomputed form of `g(s) = Tr(rho^s sigma^(1-s))`.
///
/// With `rho = sum_i a_i |u_i><u_i|` and `sigma = sum_j b_j |v_j><v_j|`,
/// `g(s) = sum_ij a_i^s b_j^(1-s) |<u_i|v_j>|^2`.
pub struct ChernoffTrace {
    rho_eigs: Vec<f64>,
    sigma_eigs: Vec<f64>,
    overlaps: Vec<f64>,
}

impl ChernoffTrace {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        check_same_dim(rho.dim(), sigma.dim())?;
        let n = rho.dim();
        let u = rho.eigenvectors();
        let v = sigma.eigenvectors();
        let mut overlaps = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let z: Complex64 = (0..n).map(|k| u[(k, i)].conj() * v[(k, j)]).sum();
                overlaps[i * n + j] = z.norm_sqr();
            }
        }
        Ok(Self {
            rho_eigs: rho.eigenvalues().to_vec(),
            sigma_eigs: sigma.eigenvalues().to_vec(),
            overlaps,
        })
    }

    pub fn eval(&self, s: f64) -> f64 {
        let n = self.rho_eigs.len();
        let a: Vec<f64> = self.rho_eigs.iter().map(|&l| support_power(l, s)).collect();
        let b: Vec<f64> = self
            .sigma_eigs
            .iter()
            .map(|&l| support_power(l, 1.0 - s))
            .collect();
        let mut total = 0.0;
        for (&ai, row) in a.iter().zip(self.overlaps.chunks_exact(n)) {
            if ai == 0.0 {
                continue;
            }
            let inner: f64 = row.iter().zip(&b).map(|(o, bj)| o * bj).sum();
            total += ai * inner;
        }
        total
    }
}

/// Minimizes `Tr(rho^s sigma^(1-s))` over `s` in `[0, 1]`.
///
/// A 33-point grid locates the basin, then golden-section search refines
/// within one grid cell of the best point.
pub fn qcb_q(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<QcbResult> {
    let g = ChernoffTrace::new(rho, sigma)?;
    let cells = (QCB_GRID_POINTS - 1) as f64;
    let (mut best_s, mut best_q) = (0.0, f64::INFINITY);
    for i in 0..QCB_GRID_POINTS {
        let s = i as f64 / cells;
        let value = g.eval(s);
        if value < best_q {
            best_s = s;
            best_q = value;
        }
    }
    let lo = (best_s - 1.0 / cells).max(0.0);
    let hi = (best_s + 1.0 / cells).min(1.0);
    let (s_refined, q_refined) = minimize_unimodal(|s| g.eval(s), lo, hi, QCB_REFINE_TOL)?;
    if q_refined < best_q {
        best_s = s_refined;
        best_q = q_refined;
    }
    let q = clamp_drift("Q", best_q)?;
    Ok(QcbResult {
        q,
        s_star: best_s,
        exponent: -q.ln(),
    })
}

/// Bounds on `Q` from fidelity for mixed pairs: `(1 - sqrt(1 - F), sqrt(F))`.
pub fn q_bounds_mixed(fidelity: f64) -> Result<(f64, f64)> {
    check_unit("fidelity", fidelity)?;
    Ok((1.0 - (1.0 - fidelity).sqrt(), fidelity.sqrt()))
}

/// Fuchs-van de Graaf bounds on trace distance: `(1 - sqrt(F), sqrt(1 - F))`.
pub fn fuchs_van_de_graaf_bounds(fidelity: f64) -> Result<(f64, f64)> {
    check_unit("fidelity", fidelity)?;
    Ok((1.0 - fidelity.sqrt(), (1.0 - fidelity).sqrt()))
}

/// Bures angle `arccos sqrt(F)`.
pub fn bures_angle(fidelity: f64) -> Result<f64> {
    check_unit("fidelity", fidelity)?;
    Ok(fidelity.sqrt().acos())
}

/// Probability that the swap-test ancilla reads 0: `1/2 + F/2`.
pub fn swap_acceptance(fidelity: f64) -> Result<f64> {
    check_unit("fidelity", fidelity)?;
    Ok(0.5 + 0.5 * fidelity)
}

/// Probability of the all-zero outcome in the inverse test, `|<psi_E|psi_A>|^2`.
pub fn inverse_success_probability(
    psi_actual: &PureState,
    psi_expected: &PureState,
) -> Result<f64> {
    fidelity_pure(psi_actual, psi_expected)
}

/// State as read from a JSON state file.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl LoadedState {
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(p) => p.to_density(),
            LoadedState::Density(d) => d.clone(),
        }
    }

    pub fn qubits(&self) -> u32 {
        match self {
            LoadedState::Pure(p) => p.qubits(),
            LoadedState::Density(d) => d.qubits(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

/// On-disk state: `{"kind": "pure"|"density", "n": int, "data": [[re, im], ...]}`.
///
/// Density data is row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub kind: StateKind,
    pub n: u32,
    pub data: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidState(format!("malformed state file: {e}")))
    }

    pub fn into_state(self) -> Result<LoadedState> {
        if self.n > MAX_QUBITS {
            return Err(Error::InvalidState(format!(
                "n: {} qubits exceeds the supported maximum of {MAX_QUBITS}",
                self.n
            )));
        }
        let dim = 1usize << self.n;
        let expected = match self.kind {
            StateKind::Pure => dim,
            StateKind::Density => dim * dim,
        };
        if self.data.len() != expected {
            return Err(Error::InvalidState(format!(
                "data length: expected {expected} entries for a {:?} state on {} qubits, found {}",
                self.kind,
                self.n,
                self.data.len()
            )));
        }
        if let Some(i) = self
            .data
            .iter()
            .position(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(Error::InvalidState(format!("data[{i}] is not finite")));
        }
        let entries: Vec<Complex64> = self
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        match self.kind {
            StateKind::Pure => PureState::new(entries).map(LoadedState::Pure),
            StateKind::Density => DensityMatrix::new(ComplexMatrix::from_row_major(entries)?)
                .map(LoadedState::Density),
        }
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self {
            kind: StateKind::Pure,
            n: state.qubits(),
            data: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_density(state: &DensityMatrix) -> Self {
        Self {
            kind: StateKind::Density,
            n: state.qubits(),
            data: state
                .matrix()
                .as_slice()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
        }
    }
}

/// Parses and validates a JSON state file.
pub fn parse_state(text: &str) -> Result<LoadedState> {
    StateFile::from_json(text)?.into_state()
}

/// Seeded random states for property tests and examples.
pub mod random {
    use super::*;

    /// Haar-distributed pure state from a normalized complex Gaussian vector.
    pub fn pure_state(rng: &mut Stream, qubits: u32) -> PureState {
        let dim = 1usize << qubits;
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
            .collect();
        PureState::normalized(v).expect("gaussian vector is nonzero")
    }

    /// Full-rank mixed state `A A^dagger / Tr(A A^dagger)` with Gaussian `A`.
    pub fn mixed_state(rng: &mut Stream, qubits: u32) -> DensityMatrix {
        let dim = 1usize << qubits;
        let entries: Vec<Complex64> = (0..dim * dim)
            .map(|_| Complex64::new(rng.standard_normal(), rng.standard_normal()))
            .collect();
        let a = ComplexMatrix::from_row_major(entries).expect("square by construction");
        let mut w = &a * &a.adjoint();
        // symmetrize away rounding before normalizing
        for i in 0..dim {
            w[(i, i)] = Complex64::new(w[(i, i)].re, 0.0);
            for j in i + 1..dim {
                w[(j, i)] = w[(i, j)].conj();
            }
        }
        let trace = w.trace().re;
        DensityMatrix::new(w.scale(1.0 / trace)).expect("Wishart matrix is a valid state")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn plus() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(s), c(s)]).unwrap()
    }

    #[test]
    fn fidelity_of_identical_states() {
        let mut rng = Stream::new(3);
        let rho = random::mixed_state(&mut rng, 2);
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_of_orthogonal_states() {
        let zero = PureState::basis(1, 0).unwrap().to_density();
        let one = PureState::basis(1, 1).unwrap().to_density();
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-15);
    }

    #[test]
    fn fidelity_commuting_case() {
        let a = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        let expected = (0.375f64.sqrt() + 0.125f64.sqrt()).powi(2);
        let f = fidelity(&a, &b).unwrap();
        assert!((f - expected).abs() < 1e-12);
        assert!((f - 0.93301).abs() < 1e-5);
    }

    #[test]
    fn pure_fidelity_examples() {
        let zero = PureState::basis(1, 0).unwrap();
        assert_eq!(fidelity_pure(&zero, &zero).unwrap(), 1.0);
        assert!((fidelity_pure(&zero, &plus()).unwrap() - 0.5).abs() < 1e-15);
        let ket01 = PureState::basis(2, 1).unwrap();
        let ket10 = PureState::basis(2, 2).unwrap();
        assert_eq!(fidelity_pure(&ket01, &ket10).unwrap(), 0.0);
        assert!(matches!(
            fidelity_pure(&zero, &ket01),
            Err(Error::DimensionMismatch { left: 4, right: 2 })
        ));
    }

    #[test]
    fn trace_distance_examples() {
        let a = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        assert!(trace_distance(&a, &a).unwrap().abs() < 1e-15);
        assert!((trace_distance(&a, &b).unwrap() - 0.25).abs() < 1e-14);
        let zero = PureState::basis(1, 0).unwrap().to_density();
        let t = trace_distance(&zero, &plus().to_density()).unwrap();
        assert!((t - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qcb_identical_states() {
        let rho = DensityMatrix::from_diagonal(&[0.3, 0.7]).unwrap();
        let r = qcb_q(&rho, &rho).unwrap();
        assert!((r.q - 1.0).abs() < 1e-12);
        assert!(r.exponent.abs() < 1e-12);
    }

    #[test]
    fn qcb_pure_pair_is_overlap() {
        let zero = PureState::basis(1, 0).unwrap();
        let r = qcb_q(&zero.to_density(), &plus().to_density()).unwrap();
        assert!((r.q - 0.5).abs() < 1e-10);
    }

    #[test]
    fn qcb_symmetric_commuting_pair() {
        let a = DensityMatrix::from_diagonal(&[0.75, 0.25]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.25, 0.75]).unwrap();
        let r = qcb_q(&a, &b).unwrap();
        assert!((r.q - 2.0 * (0.75f64 * 0.25).sqrt()).abs() < 1e-12);
        assert!((r.q - 0.86603).abs() < 1e-5);
        assert!((r.s_star - 0.5).abs() < 1e-4);
        assert!((r.exponent + r.q.ln()).abs() < 1e-12);
    }

    #[test]
    fn qcb_disjoint_supports() {
        let zero = PureState::basis(1, 0).unwrap().to_density();
        let one = PureState::basis(1, 1).unwrap().to_density();
        let r = qcb_q(&zero, &one).unwrap();
        assert_eq!(r.q, 0.0);
        assert!(r.exponent.is_infinite());
    }

    #[test]
    fn fidelity_bound_helpers() {
        assert_eq!(q_bounds_mixed(1.0).unwrap(), (1.0, 1.0));
        assert_eq!(q_bounds_mixed(0.0).unwrap(), (0.0, 0.0));
        let (lo, hi) = q_bounds_mixed(0.99).unwrap();
        assert!((lo - 0.9).abs() < 1e-12);
        assert!((hi - 0.99499).abs() < 1e-5);
        assert!(q_bounds_mixed(1.5).is_err());

        assert_eq!(fuchs_van_de_graaf_bounds(1.0).unwrap(), (0.0, 0.0));
        assert_eq!(fuchs_van_de_graaf_bounds(0.0).unwrap(), (1.0, 1.0));
        let (lo, hi) = fuchs_van_de_graaf_bounds(0.75).unwrap();
        assert!((lo - 0.13397).abs() < 1e-5);
        assert!((hi - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bures_angle_values() {
        assert_eq!(bures_angle(1.0).unwrap(), 0.0);
        assert!((bures_angle(0.0).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((bures_angle(0.99).unwrap() - 0.100).abs() < 5e-4);
        assert!(bures_angle(-0.1).is_err());
    }

    #[test]
    fn swap_acceptance_values() {
        assert_eq!(swap_acceptance(1.0).unwrap(), 1.0);
        assert_eq!(swap_acceptance(0.0).unwrap(), 0.5);
        assert!((swap_acceptance(0.999).unwrap() - 0.9995).abs() < 1e-15);
    }

    #[test]
    fn inverse_success_examples() {
        let zero = PureState::basis(1, 0).unwrap();
        let one = PureState::basis(1, 1).unwrap();
        assert_eq!(inverse_success_probability(&zero, &zero).unwrap(), 1.0);
        assert_eq!(inverse_success_probability(&one, &zero).unwrap(), 0.0);
        let rotated = PureState::new(vec![c(0.1f64.cos()), c(0.1f64.sin())]).unwrap();
        let p = inverse_success_probability(&rotated, &zero).unwrap();
        assert!((p - 0.1f64.cos().powi(2)).abs() < 1e-15);
        assert!((p - 0.99003).abs() < 1e-5);
    }

    #[test]
    fn noise_model_caps_regime_factor() {
        assert!(NoiseModel::new(0.9, 2.0).is_ok());
        assert!(NoiseModel::new(0.9, 2.5).is_err());
        assert!(NoiseModel::new(0.9, 0.5).is_err());
        assert!(NoiseModel::new(1.1, 1.0).is_err());
        assert_eq!(NoiseModel::ideal().regime_factor, 1.0);
    }

    #[test]
    fn state_file_validation_names_invariant() {
        let ok = r#"{"kind": "pure", "n": 1, "data": [[1, 0], [0, 0]]}"#;
        assert!(matches!(parse_state(ok).unwrap(), LoadedState::Pure(_)));

        let unnormalized = r#"{"kind": "pure", "n": 1, "data": [[1, 0], [1, 0]]}"#;
        let err = parse_state(unnormalized).unwrap_err().to_string();
        assert!(err.contains("normalization"), "{err}");

        let bad_trace = r#"{"kind": "density", "n": 1, "data": [[1,0],[0,0],[0,0],[1,0]]}"#;
        let err = parse_state(bad_trace).unwrap_err().to_string();
        assert!(err.contains("unit trace"), "{err}");

        let not_hermitian =
            r#"{"kind": "density", "n": 1, "data": [[0.5,0],[0.1,0],[0,0],[0.5,0]]}"#;
        let err = parse_state(not_hermitian).unwrap_err().to_string();
        assert!(err.contains("hermiticity"), "{err}");

        let negative = r#"{"kind": "density", "n": 1, "data": [[1.2,0],[0,0],[0,0],[-0.2,0]]}"#;
        let err = parse_state(negative).unwrap_err().to_string();
        assert!(err.contains("positivity"), "{err}");

        let short = r#"{"kind": "density", "n": 1, "data": [[1,0]]}"#;
        let err = parse_state(short).unwrap_err().to_string();
        assert!(err.contains("data length"), "{err}");
    }

    #[test]
    fn state_file_round_trip() {
        let mut rng = Stream::new(11);
        let rho = random::mixed_state(&mut rng, 2);
        let text = serde_json::to_string(&StateFile::from_density(&rho)).unwrap();
        let back = parse_state(&text).unwrap().to_density();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }
}
