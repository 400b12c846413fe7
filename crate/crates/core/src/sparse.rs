//! Compressed sparse row matrices.

use std::io::{self, Write};

use crate::scalar::Scalar;

/// Sparse matrix in CSR layout with sorted column indices per row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<S>,
}

impl<S: Scalar> SparseMatrix<S> {
    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates
    /// in input order. Explicit zeros are dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, S)>) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<S> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) outside {nrows}x{ncols}");
            if last == Some((i, j)) {
                let acc = values.last_mut().unwrap();
                *acc = acc.clone() + v;
            } else {
                indptr[i + 1] += 1;
                indices.push(j);
                values.push(v);
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            indptr[i + 1] += indptr[i];
        }
        Self { nrows, ncols, indptr, indices, values }.pruned()
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, indptr: vec![0; nrows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, S::one())).collect())
    }

    /// Builds a matrix from sparse columns given as `(row, value)` lists.
    pub fn from_columns(nrows: usize, columns: &[Vec<(usize, S)>]) -> Self {
        let triplets =
            columns.iter().enumerate().flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v.clone()))).collect();
        Self::from_triplets(nrows, columns.len(), triplets)
    }

    fn pruned(self) -> Self {
        if self.values.iter().all(|v| !v.is_zero()) {
            return self;
        }
        let mut indptr = vec![0; self.nrows + 1];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.nrows {
            for k in self.indptr[i]..self.indptr[i + 1] {
                if !self.values[k].is_zero() {
                    indices.push(self.indices[k]);
                    values.push(self.values[k].clone());
                }
            }
            indptr[i + 1] = indices.len();
        }
        Self { nrows: self.nrows, ncols: self.ncols, indptr, indices, values }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k].clone(),
            Err(_) => S::zero(),
        }
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[S]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(j, x)| (i, *j, x))
        })
    }

    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.ncols, "matvec dimension mismatch");
        (0..self.nrows)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).fold(S::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone())
            })
            .collect()
    }

    pub fn transpose_matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.nrows, "transpose matvec dimension mismatch");
        let mut out = vec![S::zero(); self.ncols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let (c, v) = self.row(i);
            for (j, a) in c.iter().zip(v) {
                out[*j] = out[*j].clone() + a.clone() * xi.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let triplets = self.triplets().map(|(i, j, v)| (j, i, v.clone())).collect();
        Self::from_triplets(self.ncols, self.nrows, triplets)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseMatrix<T> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values: self.values.iter().map(f).collect(),
        }
        .pruned()
    }

    pub fn to_f64(&self) -> SparseMatrix<f64> {
        self.map(Scalar::to_f64)
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "product dimension mismatch");
        let mut triplets = Vec::new();
        for i in 0..self.nrows {
            let (c, v) = self.row(i);
            for (k, a) in c.iter().zip(v) {
                let (c2, v2) = other.row(*k);
                for (j, b) in c2.iter().zip(v2) {
                    triplets.push((i, *j, a.clone() * b.clone()));
                }
            }
        }
        Self::from_triplets(self.nrows, other.ncols, triplets)
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut out = vec![vec![S::zero(); self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.nrows == self.ncols
            && self.nnz() == self.nrows
            && self.triplets().all(|(i, j, v)| i == j && v.same_as(&S::one()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff: Vec<_> = self
            .triplets()
            .map(|(i, j, v)| (i, j, v.clone()))
            .chain(other.triplets().map(|(i, j, v)| (i, j, -v.clone())))
            .collect();
        Self::from_triplets(self.nrows, self.ncols, diff).values.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Writes the matrix in Matrix Market coordinate format.
    pub fn write_matrix_market<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(out, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for (i, j, v) in self.triplets() {
            writeln!(out, "{} {} {:.17e}", i + 1, j + 1, v.to_f64())?;
        }
        Ok(())
    }
}

impl SparseMatrix<f64> {
    /// `y += alpha * A x` without allocation.
    pub fn matvec_add(&self, alpha: f64, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (c, v) = self.row(i);
            let mut s = 0.0;
            for (j, a) in c.iter().zip(v) {
                s += a * x[*j];
            }
            *yi += alpha * s;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn to_faer(&self) -> faer::Mat<f64> {
        faer::Mat::from_fn(self.nrows, self.ncols, |i, j| self.get(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_and_transpose() {
        let m = SparseMatrix::from_triplets(2, 3, vec![(0, 1, 2.0), (1, 0, 1.0), (0, 1, 3.0), (1, 2, 0.0)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 1), 5.0);
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]), vec![5.0, 1.0]);
        assert_eq!(m.transpose_matvec(&[1.0, 2.0]), vec![2.0, 5.0, 0.0]);
        assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn matrix_market_output() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(1, 1, 0.5)]);
        let mut buf = Vec::new();
        m.write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n2 2 1\n2 2 5."));
    }
}
