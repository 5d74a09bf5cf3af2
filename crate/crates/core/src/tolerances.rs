//! Numerical tolerances shared by the implementation and its tests.

/// Max-abs-entry tolerance for Hermiticity checks.
pub const HERMITIAN: f64 = 1e-10;
/// Eigenvalues in `[-PSD_EIGENVALUE, 0)` are clamped to zero.
pub const PSD_EIGENVALUE: f64 = 1e-10;
/// Unit-trace and normalization tolerance for states.
pub const STATE_NORMALIZATION: f64 = 1e-10;
/// Eigendecomposition reconstruction tolerance.
pub const RECONSTRUCTION: f64 = 1e-10;
/// Allowed drift of a fidelity outside `[0, 1]` before it is an error.
pub const FIDELITY_DRIFT: f64 = 1e-9;
/// Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative stopping threshold of the incomplete gamma expansions (results good to 1e-12).
pub const GAMMA_RELATIVE: f64 = 1e-14;
/// Iteration cap for the incomplete gamma expansions.
pub const GAMMA_MAX_ITER: usize = 10_000;
/// Relative bracket width at which `solve_increasing` stops.
pub const ROOT_RELATIVE: f64 = 1e-9;
/// Maximum number of bracket doublings in `solve_increasing`.
pub const ROOT_MAX_DOUBLINGS: usize = 128;
/// Grid points scanned before golden-section refinement of `Q`.
pub const QCB_GRID_POINTS: usize = 33;
/// Golden-section tolerance for the `Q` refinement.
pub const QCB_REFINE_TOL: f64 = 1e-10;
/// Poisson tail mass dropped from the noncentral chi-square series.
pub const NONCENTRAL_TAIL: f64 = 1e-12;
/// Sum-to-one tolerance for in-memory distributions.
pub const DISTRIBUTION_SUM: f64 = 1e-10;
/// Sum-to-one tolerance for distributions read from files, before renormalizing.
pub const DISTRIBUTION_FILE_SUM: f64 = 1e-8;
/// Shot counts above this are reported as infeasible.
pub const MAX_FEASIBLE_SHOTS: f64 = 9_223_372_036_854_775_808.0; // 2^63
