use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use super::build::{build_wavelets, WaveletLevel};
use crate::assembly::{assemble, global_gram};
use crate::error::{Error, Result};
use crate::fe::{prolongation, DofMap, Space};
use crate::mesh::MeshHierarchy;
use crate::ref_element::reference;
use crate::sparse::SparseMatrix;
use crate::spectral::dense;

/// Change of basis from `Φ_j ∪ Ψ_{j+1}` to `Φ_{j+1}` with `Φ` the quadratic
/// nodal bases: `M0` refines the coarse nodal functions, `M1` holds the
/// wavelet columns.
#[derive(Clone, Debug)]
pub struct TwoLevelTransform {
    pub level: usize,
    pub m0: SparseMatrix<f64>,
    pub m1: SparseMatrix<f64>,
}

impl TwoLevelTransform {
    pub fn new(h: &MeshHierarchy, j: usize) -> Result<Self> {
        let w = build_wavelets::<f64>(h, j + 1)?;
        Ok(Self { level: j, m0: prolongation(h, j), m1: w.columns })
    }

    pub fn dim(&self) -> usize {
        self.m0.nrows()
    }

    /// `[M0 M1]` as a dense square matrix.
    pub fn dense(&self) -> Mat<f64> {
        let n = self.dim();
        let k = self.m0.ncols();
        let mut out = Mat::zeros(n, n);
        for (i, j, v) in self.m0.triplets() {
            out[(i, j)] = *v;
        }
        for (i, j, v) in self.m1.triplets() {
            out[(i, k + j)] = *v;
        }
        out
    }
}

/// `M̃_j = M_j^{-T}`, whose blocks express the dual scaling functions and
/// dual wavelets of level `j` in the dual scaling functions of level `j+1`.
#[derive(Clone, Debug)]
pub struct DualTwoLevelTransform {
    pub level: usize,
    pub coarse_dim: usize,
    pub matrix: Mat<f64>,
}

pub fn dual_two_level(h: &MeshHierarchy, j: usize, limit: usize) -> Result<DualTwoLevelTransform> {
    let t = TwoLevelTransform::new(h, j)?;
    dense::check_size(t.dim(), limit)?;
    let m = t.dense();
    let lu = m.partial_piv_lu();
    let inv_t = lu.inverse().transpose().to_owned();
    if !inv_t.col_iter().all(|c| c.iter().all(|x| x.is_finite())) {
        return Err(Error::Singular(format!("two-level transform on level {j}")));
    }
    Ok(DualTwoLevelTransform { level: j, coarse_dim: t.m0.ncols(), matrix: inv_t })
}

/// The wavelet-to-nodal transform `W = [Ψ_0, …, Ψ_J]` expressed over the
/// quadratic nodal basis on `T_J`.
#[derive(Clone, Debug)]
pub struct MultilevelTransform {
    pub levels: Vec<WaveletLevel<f64>>,
    /// `P_l` maps level `l` nodal coefficients to level `l + 1`.
    pub prolongations: Vec<SparseMatrix<f64>>,
    offsets: Vec<usize>,
}

impl MultilevelTransform {
    pub fn new(h: &MeshHierarchy, finest: usize) -> Result<Self> {
        h.require(finest + 1)?;
        let levels = (0..=finest).map(|l| build_wavelets::<f64>(h, l)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_levels(h, levels))
    }

    /// Reuses already built levels `0..=J`.
    pub fn from_levels(h: &MeshHierarchy, levels: Vec<WaveletLevel<f64>>) -> Self {
        let prolongations = (0..levels.len().saturating_sub(1)).map(|l| prolongation(h, l)).collect();
        let mut offsets = vec![0];
        for w in &levels {
            offsets.push(offsets.last().unwrap() + w.len());
        }
        Self { levels, prolongations, offsets }
    }

    pub fn finest(&self) -> usize {
        self.levels.len() - 1
    }

    /// Total number of basis functions, equal to the dimension of `V_J`.
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Level of the basis function at a global position.
    pub fn level_of(&self, i: usize) -> usize {
        self.offsets.partition_point(|&o| o <= i) - 1
    }

    /// `Σ_l c_lᵀ Ψ_l` in nodal coefficients on level `J`.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.len(), "coefficient vector size");
        let mut v = self.levels[0].columns.matvec(&coeffs[..self.offsets[1]]);
        for l in 1..self.levels.len() {
            let mut next = self.prolongations[l - 1].matvec(&v);
            self.levels[l].columns.matvec_add(1.0, &coeffs[self.offsets[l]..self.offsets[l + 1]], &mut next);
            v = next;
        }
        v
    }

    /// Per-level variant of [`synthesize`](Self::synthesize).
    pub fn synthesize_levels(&self, coeffs: &[Vec<f64>]) -> Result<Vec<f64>> {
        if coeffs.len() != self.levels.len() {
            return Err(Error::Size { expected: self.levels.len(), got: coeffs.len() });
        }
        for (c, w) in coeffs.iter().zip(&self.levels) {
            if c.len() != w.len() {
                return Err(Error::Size { expected: w.len(), got: c.len() });
            }
        }
        Ok(self.synthesize(&coeffs.concat()))
    }

    /// `Wᵀ v`.
    pub fn transpose_apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        let mut r = v.to_vec();
        for l in (0..self.levels.len()).rev() {
            let part = self.levels[l].columns.transpose_matvec(&r);
            out[self.offsets[l]..self.offsets[l + 1]].copy_from_slice(&part);
            if l > 0 {
                r = self.prolongations[l - 1].transpose_matvec(&r);
            }
        }
        out
    }

    /// Wavelet coefficients of a nodal vector, by conjugate gradients on
    /// `Wᵀ M W c = Wᵀ M v` with `M` a symmetric positive definite matrix
    /// on level `J` (typically the mass matrix).
    pub fn analyze(&self, v: &[f64], m: &SparseMatrix<f64>, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        let apply = |x: &[f64]| self.transpose_apply(&m.matvec(&self.synthesize(x)));
        let b = self.transpose_apply(&m.matvec(v));
        let diag = self.gram_diagonal(m);
        conjugate_gradient(apply, &b, &diag, tol, max_iter)
    }

    /// `diag(Wᵀ M W)` computed column by column.
    pub fn gram_diagonal(&self, m: &SparseMatrix<f64>) -> Vec<f64> {
        let mut e = vec![0.0; self.len()];
        (0..self.len())
            .map(|i| {
                e[i] = 1.0;
                let w = self.synthesize(&e);
                e[i] = 0.0;
                m.matvec(&w).iter().zip(&w).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `W` as a dense matrix.
    pub fn dense(&self) -> Mat<f64> {
        let n = self.len();
        let mut out = Mat::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.synthesize(&e);
            e[j] = 0.0;
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }
}

/// Diagonally preconditioned conjugate gradients.
pub fn conjugate_gradient(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    diag: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = b.len();
    let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(a, d)| a / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for _ in 0..max_iter {
        let ap = apply(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if dot(&r, &r).sqrt() <= tol * bnorm {
            return Ok(x);
        }
        z = r.iter().zip(diag).map(|(a, d)| a / d).collect();
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: dot(&r, &r).sqrt() / bnorm })
}

/// `W^{-T}` composed from the dual two-level transforms:
/// `W_J^{-T} = M̃_{J-1} (W_{J-1}^{-T} ⊕ I)`.
pub fn dual_synthesis_matrix(h: &MeshHierarchy, finest: usize, limit: usize) -> Result<Mat<f64>> {
    let n0 = DofMap::of_space(h, Space::primal(0)).len();
    let mut acc = Mat::<f64>::identity(n0, n0);
    for j in 0..finest {
        let dual = dual_two_level(h, j, limit)?;
        let n = dual.matrix.nrows();
        let k = dual.coarse_dim;
        let mut block = Mat::<f64>::identity(n, n);
        block.as_mut().submatrix_mut(0, 0, k, k).copy_from(acc.as_ref());
        acc = &dual.matrix * &block;
    }
    Ok(acc)
}

/// `⟨N_J, Ñ_J⟩` for the unscaled nodal bases of the primal and dual spaces.
pub fn primal_dual_gram(h: &MeshHierarchy, j: usize) -> Result<SparseMatrix<f64>> {
    let r = reference();
    let n = assemble::<f64>(h, j, &r.n)?;
    let nt = assemble::<f64>(h, j, &r.n_tilde)?;
    Ok(global_gram(h, &n, &nt)?.unscaled)
}
