//! Small Hermitian linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalue floor below which populations are treated as exactly zero.
pub(crate) const EIGENVALUE_FLOOR: f64 = 1e-14;

/// Largest negative eigenvalue tolerated before a matrix is rejected as non-PSD.
pub(crate) const PSD_TOLERANCE: f64 = 1e-8;

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first so
/// that accumulated round-off in the off-diagonal parts cannot poison the solver.
pub(crate) fn eigh(mat: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let herm = hermitian_part(mat);
    let se = herm.symmetric_eigen();
    (se.eigenvalues.iter().copied().collect(), se.eigenvectors)
}

/// Eigenvalues only.
pub(crate) fn eigvalsh(mat: &DMatrix<Complex64>) -> Vec<f64> {
    eigh(mat).0
}

/// (M + M†)/2
pub(crate) fn hermitian_part(mat: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (mat + mat.adjoint()).scale(0.5)
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// `[-PSD_TOLERANCE, 0)` are clamped to zero; anything more negative is an error.
pub(crate) fn sqrt_psd(mat: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let (vals, vecs) = eigh(mat);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOLERANCE {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    // eigenvalues below the floor are solver noise; their square roots would
    // otherwise inject O(1e-8) asymmetries
    let sqrt_diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| {
            let v = if v < EIGENVALUE_FLOOR { 0.0 } else { v };
            Complex64::new(v.sqrt(), 0.0)
        }),
    ));
    Ok(&vecs * sqrt_diag * vecs.adjoint())
}

/// exp(G) for an anti-Hermitian generator G, computed through the Hermitian
/// eigendecomposition of iG. The result is unitary to machine precision.
pub(crate) fn exp_antihermitian(gen: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let h = gen.map(|z| i * z);
    let (vals, vecs) = eigh(&h);
    // exp(G) = exp(-iH) = V e^{-i Lambda} V†
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| (-i * l).exp()),
    ));
    &vecs * phases * vecs.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigh_recomposes() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(0.3, 0.1),
                c(0.0, -0.2),
                c(0.3, -0.1),
                c(1.0, 0.0),
                c(0.5, 0.0),
                c(0.0, 0.2),
                c(0.5, 0.0),
                c(0.7, 0.0),
            ],
        );
        let (vals, vecs) = eigh(&m);
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            3,
            vals.iter().map(|&v| c(v, 0.0)),
        ));
        let back = &vecs * lam * vecs.adjoint();
        assert!((back - m).norm() < 1e-12);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let a = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(1.0, 0.0)]);
        let s = sqrt_psd(&a).unwrap();
        assert!((&s * &s - a).norm() < 1e-12);
    }

    #[test]
    fn exp_antihermitian_is_unitary() {
        let g = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.3), c(0.7, 0.1), c(-0.7, 0.1), c(0.0, -0.4)]);
        let u = exp_antihermitian(&g);
        let id = &u * u.adjoint();
        assert!((id - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-12);
    }
}
