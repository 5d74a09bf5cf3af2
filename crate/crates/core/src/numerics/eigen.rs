use num_complex::Complex64;

use super::ComplexMatrix;
use crate::tolerances::{HERMITIAN, JACOBI_MAX_SWEEPS, PSD_EIGENVALUE};
use crate::{Error, Result};

/// Spectral decomposition `H = V diag(eigenvalues) V^dagger`.
///
/// Eigenvalues are sorted ascending; column `i` of `eigenvectors` belongs to
/// `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V f(diag) V^dagger` for a function applied to each eigenvalue.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &m) in mapped.iter().enumerate() {
                    if m != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * m;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigendecomposition(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let deviation = h.hermiticity_deviation();
    if !(deviation <= HERMITIAN) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.dim();

    // Work on the exactly Hermitian part so rounding in the input cannot bias the result.
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(h[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let threshold = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let mut converged = n == 1;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_norm() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && a.off_diagonal_norm() > threshold {
        return Err(Error::NoConvergence {
            what: "Jacobi eigensolver",
            iterations: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, new_col)] = v[(row, old_col)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi step zeroing `a[p][q]`: `A <- J^dagger A J`, `V <- V J`.
///
/// The phase of `a[p][q]` is first rotated away, leaving a real symmetric
/// 2x2 problem handled by the classical rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let magnitude = b.norm();
    if magnitude == 0.0 {
        return;
    }
    let phase = b / magnitude;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * magnitude);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * magnitude, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * magnitude, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Clamps an eigenvalue of a PSD matrix, rejecting genuine negativity.
pub(crate) fn clamp_psd_eigenvalue(value: f64) -> Result<f64> {
    if value < -PSD_EIGENVALUE {
        Err(Error::NegativeEigenvalue { value })
    } else {
        Ok(value.max(0.0))
    }
}

/// Zeroes eigenvalues at rounding level, `<= dim * eps * max |lambda|`.
///
/// Fractional powers amplify these: a `1e-17` left in place becomes `3e-9`
/// under a square root and close to 1 under a small power.
pub(crate) fn zero_rounding_eigenvalues(eigenvalues: &mut [f64]) {
    let top = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let cutoff = eigenvalues.len() as f64 * f64::EPSILON * top;
    for l in eigenvalues.iter_mut() {
        if l.abs() <= cutoff {
            *l = 0.0;
        }
    }
}

/// `x^p` on clamped eigenvalues with the support convention `0^p = 0`, including `p = 0`.
pub(crate) fn support_power(x: f64, p: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if p == 0.0 {
        1.0
    } else {
        x.powf(p)
    }
}

/// `M^p` for a Hermitian PSD matrix and `p` in `[0, 1]`.
///
/// Zero eigenvalues stay zero for every `p`, so `M^0` is the projector onto
/// the support of `M`.
pub fn psd_matrix_power(m: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("exponent {p} must lie in [0, 1]")));
    }
    let mut eig = hermitian_eigendecomposition(m)?;
    for l in &mut eig.eigenvalues {
        *l = clamp_psd_eigenvalue(*l)?;
    }
    zero_rounding_eigenvalues(&mut eig.eigenvalues);
    Ok(eig.map_spectrum(|l| support_power(l, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::RECONSTRUCTION;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = hermitian_eigendecomposition(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
        assert!(eig.eigenvectors.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let m = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        let eig = hermitian_eigendecomposition(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.25, 0.75]);
        assert!(eig.reconstruct().max_abs_diff(&m) < RECONSTRUCTION);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let eig = hermitian_eigendecomposition(&x).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&x) < RECONSTRUCTION);
    }

    #[test]
    fn pauli_y_spectrum() {
        let mut y = ComplexMatrix::zeros(2);
        y[(0, 1)] = c(0.0, -1.0);
        y[(1, 0)] = c(0.0, 1.0);
        let eig = hermitian_eigendecomposition(&y).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&y) < RECONSTRUCTION);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            hermitian_eigendecomposition(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn power_of_identity() {
        let id = ComplexMatrix::identity(2);
        assert!(psd_matrix_power(&id, 0.5).unwrap().max_abs_diff(&id) < 1e-14);
    }

    #[test]
    fn square_root_of_diagonal() {
        let m = ComplexMatrix::from_real_diagonal(&[0.25, 0.75]);
        let r = psd_matrix_power(&m, 0.5).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.75f64.sqrt()]);
        assert!(r.max_abs_diff(&expected) < 1e-14);
        assert!((r[(1, 1)].re - 0.8660).abs() < 1e-4);
    }

    #[test]
    fn projector_is_fixed_point() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(psd_matrix_power(&m, 0.3).unwrap().max_abs_diff(&m) < 1e-14);
        assert!(psd_matrix_power(&m, 0.0).unwrap().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn negative_eigenvalue_is_an_error() {
        let m = ComplexMatrix::from_real_diagonal(&[1.1, -0.1]);
        assert!(matches!(
            psd_matrix_power(&m, 0.5),
            Err(Error::NegativeEigenvalue { .. })
        ));
        // tiny negativity is clamped
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-12]);
        let r = psd_matrix_power(&m, 0.5).unwrap();
        assert_eq!(r[(1, 1)], c(0.0, 0.0));
    }
}
