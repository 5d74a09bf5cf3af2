//! Numerical kernels: a small dense complex matrix type, a cyclic Jacobi
//! Hermitian eigensolver, PSD matrix powers, special functions, and scalar
//! minimization and root finding.

mod eigen;
mod matrix;
mod optimize;
mod special;

pub(crate) use eigen::{clamp_psd_eigenvalue, support_power, zero_rounding_eigenvalues};
pub use eigen::{hermitian_eigendecomposition, psd_matrix_power, EigenDecomposition};
pub use matrix::ComplexMatrix;
pub use optimize::{minimize_unimodal, solve_increasing};
pub use special::{
    ln_gamma, normal_cdf, normal_quantile, regularized_gamma_p, regularized_gamma_q,
};

pub use num_complex::Complex64;
