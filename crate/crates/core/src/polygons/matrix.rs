use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{dominates, PolygonError};

const SHAPE_TOL: f64 = 1e-12;
const INEQUALITY_SLACK: f64 = 1e-10;

/// Schur: the diagonal of a Hermitian matrix is majorized by its spectrum.
///
/// Returns whether the sorted diagonal is dominated by the sorted eigenvalues,
/// comparing partial sums with a slack scaled to the matrix norm.
pub fn schur_diagonal_check(h: &DMatrix<Complex64>) -> Result<bool, PolygonError> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(PolygonError::NotHermitian);
    }
    let scale = 1.0 + h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..=i {
            if (h[(i, j)] - h[(j, i)].conj()).norm() > SHAPE_TOL * scale {
                return Err(PolygonError::NotHermitian);
            }
        }
    }
    let mut diag: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut eig: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    diag.sort_by(|a, b| b.total_cmp(a));
    eig.sort_by(|a, b| b.total_cmp(a));
    let tol = 1e-9 * scale * n.max(1) as f64;
    Ok(dominates(&eig, &diag, tol)?.holds())
}

/// Both sides of `α H ᾱᵀ >= |α B αᵀ|²` with `H = B B̄ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Evaluates the inequality for a complex symmetric `B` and a unit row vector `α`.
pub fn symmetric_form_inequality(b: &DMatrix<Complex64>, alpha: &DVector<Complex64>) -> Result<FormInequality, PolygonError> {
    let n = b.nrows();
    if n != b.ncols() || alpha.len() != n {
        return Err(PolygonError::NotSymmetric);
    }
    let scale = 1.0 + b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if (b - b.transpose()).iter().any(|z| z.norm() > SHAPE_TOL * scale) {
        return Err(PolygonError::NotSymmetric);
    }
    if (alpha.norm() - 1.0).abs() > SHAPE_TOL {
        return Err(PolygonError::NotUnit);
    }
    // α H ᾱᵀ = (αB)(αB)^* = |αB|², which is real and nonnegative by construction.
    let row = alpha.transpose() * b;
    let lhs = row.norm_squared();
    let rhs = (row * alpha)[(0, 0)].norm_sqr();
    Ok(FormInequality { lhs, rhs, ok: lhs >= rhs - INEQUALITY_SLACK })
}
