//! Dense symmetric linear algebra used for oracles and small problems.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Largest dimension handled by dense factorizations.
pub const MAX_DENSE_DOFS: usize = 8000;

pub fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::TooLarge { dofs: n, limit })
    } else {
        Ok(())
    }
}

pub fn dense(m: &SparseMatrix<f64>) -> Mat<f64> {
    let mut out = Mat::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplets() {
        out[(i, j)] = *v;
    }
    out
}

/// Nonzero entries of a dense matrix.
pub fn to_sparse(m: &Mat<f64>) -> SparseMatrix<f64> {
    let mut t = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)] != 0.0 {
                t.push((i, j, m[(i, j)]));
            }
        }
    }
    SparseMatrix::from_triplets(m.nrows(), m.ncols(), t)
}

pub fn from_rows(rows: &[Vec<f64>]) -> Mat<f64> {
    let c = rows.first().map_or(0, Vec::len);
    Mat::from_fn(rows.len(), c, |i, j| rows[i][j])
}

/// Eigenvalues of a symmetric matrix in increasing order.
pub fn sym_eigenvalues(m: &Mat<f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Numerical(format!("{e:?}")))
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn sym_extremes(m: &Mat<f64>) -> Result<(f64, f64)> {
    let ev = sym_eigenvalues(m)?;
    match (ev.first(), ev.last()) {
        (Some(a), Some(b)) => Ok((*a, *b)),
        _ => Err(Error::Numerical("empty matrix".into())),
    }
}

/// Singular values in decreasing order.
pub fn singular_values(m: &Mat<f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values().map_err(|e| Error::Numerical(format!("{e:?}")))
}

/// `A^{-1/2}` of a symmetric positive definite matrix.
pub fn inv_sqrt(m: &Mat<f64>) -> Result<Mat<f64>> {
    let eig = m.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Numerical(format!("{e:?}")))?;
    let u = eig.U();
    let s = eig.S().column_vector();
    let n = m.nrows();
    for i in 0..n {
        if s[i] <= 0.0 {
            return Err(Error::Singular(format!("eigenvalue {:.3e} is not positive", s[i])));
        }
    }
    let scaled = Mat::from_fn(n, n, |i, j| u[(i, j)] / s[j].sqrt());
    Ok(&scaled * u.transpose())
}

/// Cosines of the principal angles between two spans, given their Gram
/// matrices and cross Gram matrix, in decreasing order.
pub fn principal_cosines(gaa: &Mat<f64>, gab: &Mat<f64>, gbb: &Mat<f64>) -> Result<Vec<f64>> {
    let c = inv_sqrt(gaa)? * gab * inv_sqrt(gbb)?;
    singular_values(&c)
}

/// Spectral condition number of a symmetric positive definite matrix.
pub fn condition(m: &Mat<f64>) -> Result<f64> {
    let (lo, hi) = sym_extremes(m)?;
    Ok(hi / lo)
}

/// Rescales a symmetric matrix to unit diagonal.
pub fn unit_diagonal(m: &Mat<f64>) -> Mat<f64> {
    let d: Vec<f64> = (0..m.nrows()).map(|i| 1.0 / m[(i, i)].sqrt()).collect();
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * d[i] * d[j])
}
