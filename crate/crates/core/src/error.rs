use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |H - H^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has a negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("target {target} not bracketed after {doublings} doublings")]
    NoBracket { target: f64, doublings: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("states indistinguishable: no finite number of shots suffices")]
    DegenerateStates,

    #[error("expected probability of bin {bin} is zero")]
    ZeroExpectedBin { bin: usize },

    #[error("baseline must exceed target (q0 = {q0}, q1 = {q1})")]
    BaselineNotAboveTarget { q0: f64, q1: f64 },

    #[error("block {block:?} has zero weight")]
    ZeroWeight { block: String },

    #[error("fidelity target of 1 leaves a zero angle budget")]
    ZeroBudget,

    #[error("invalid program spec at {path}: {message}")]
    Spec { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Checks that `x` lies in the closed unit interval.
pub(crate) fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {x} must lie in [0, 1]")))
    }
}

/// Checks that `x` lies in the open unit interval.
pub(crate) fn check_open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {x} must lie in (0, 1)")))
    }
}
