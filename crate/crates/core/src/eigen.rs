//! Symmetric eigendecomposition with a deterministic ordering convention.
//!
//! Every spectral step in the solver goes through [`sym_eigen_desc`] so that
//! eigenvalue ordering and eigenvector signs are reproducible run to run.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenpairs of a symmetric matrix, eigenvalues sorted in descending order.
///
/// Each eigenvector is sign-normalized so that its first nonzero component
/// is positive.
#[derive(Debug, Clone)]
pub struct SortedEigen<T: Real> {
    pub values: DVector<T>,
    pub vectors: DMatrix<T>,
}

/// Full symmetric eigendecomposition, descending eigenvalues.
///
/// The input is symmetrized as `(M + Mᵀ)/2` before factorization to strip
/// rounding asymmetry.
pub fn sym_eigen_desc<T: Real>(m: &DMatrix<T>) -> Result<SortedEigen<T>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let sym = (m + m.transpose()) * T::c(0.5);
    let eig = nalgebra::SymmetricEigen::try_new(sym, T::default_epsilon(), 0)
        .ok_or_else(|| Error::Numerical("symmetric eigendecomposition did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("finite eigenvalues")
            .then(a.cmp(&b))
    });

    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).clone_owned();
        if let Some(first) = col.iter().find(|v| **v != T::zero()) {
            if *first < T::zero() {
                col.neg_mut();
            }
        }
        vectors.set_column(dst, &col);
    }
    Ok(SortedEigen { values, vectors })
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix.
///
/// Eigenvalues at or below `n * eps * max(λ)` are treated as exact zeros.
pub fn pseudo_inverse_psd<T: Real>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    let eig = sym_eigen_desc(m)?;
    let n = m.nrows();
    let lam_max = eig.values[0].max(T::zero());
    let cutoff = lam_max * T::from_usize(n).unwrap() * T::default_epsilon();
    let inv = DVector::from_fn(n, |i, _| {
        if eig.values[i] > cutoff {
            T::one() / eig.values[i]
        } else {
            T::zero()
        }
    });
    Ok(&eig.vectors * DMatrix::from_diagonal(&inv) * eig.vectors.transpose())
}
