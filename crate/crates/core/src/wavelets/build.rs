use std::collections::BTreeMap;

use crate::assembly::{assemble, global_gram, GlobalCollection};
use crate::error::{Error, Result};
use crate::fe::{DofMap, Space};
use crate::mesh::MeshHierarchy;
use crate::ref_element::reference;
use crate::scalar::{Rational, Scalar};
use crate::sparse::SparseMatrix;

/// Role of a basis function in the multilevel basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveletKind {
    /// Nodal function of the coarsest level.
    Scaling,
    /// Wavelet centred at a point on an edge of the coarser mesh.
    Edge,
    /// Wavelet centred at a point inside a triangle of the coarser mesh.
    Interior,
}

/// The functions `Ψ_l` of one level as unnormalized nodal coefficient
/// columns over the quadratics on `T_l`.
#[derive(Clone, Debug)]
pub struct WaveletLevel<S> {
    pub level: usize,
    /// Vertex ids of the centres, increasing.
    pub index: Vec<usize>,
    pub kinds: Vec<WaveletKind>,
    pub columns: SparseMatrix<S>,
    /// Squared factor turning a column into the scaled wavelet.
    pub scale_sq: Vec<Rational>,
    /// Unscaled products of the complement and dual collections used in
    /// the construction (empty on level 0).
    pub correction: SparseMatrix<S>,
    /// Number of vanishing moments (polynomial degree reproduced by the dual side plus one).
    pub moment_order: usize,
}

impl<S: Scalar> WaveletLevel<S> {
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Columns as `(row, value)` lists.
    pub fn column_entries(&self) -> Vec<Vec<(usize, S)>> {
        let mut cols = vec![Vec::new(); self.columns.ncols()];
        for (i, j, v) in self.columns.triplets() {
            cols[j].push((i, v.clone()));
        }
        cols
    }

    /// Number of nonzero nodal coefficients per wavelet.
    pub fn support_sizes(&self) -> Vec<usize> {
        let mut n = vec![0; self.columns.ncols()];
        for (_, j, _) in self.columns.triplets() {
            n[j] += 1;
        }
        n
    }

    /// Histogram of support sizes per kind.
    pub fn support_histogram(&self) -> BTreeMap<(WaveletKind, usize), usize> {
        let mut out = BTreeMap::new();
        for (k, s) in self.kinds.iter().zip(self.support_sizes()) {
            *out.entry((*k, s)).or_insert(0) += 1;
        }
        out
    }

    pub fn to_f64(&self) -> WaveletLevel<f64> {
        WaveletLevel {
            level: self.level,
            index: self.index.clone(),
            kinds: self.kinds.clone(),
            columns: self.columns.to_f64(),
            scale_sq: self.scale_sq.clone(),
            correction: self.correction.to_f64(),
            moment_order: self.moment_order,
        }
    }
}

/// The three collections on mesh level `j` from which `Ψ_{j+1}` is built.
#[derive(Clone, Debug)]
pub struct TwoScaleCollections<S> {
    pub theta: GlobalCollection<S>,
    pub xi: GlobalCollection<S>,
    pub phi_tilde: GlobalCollection<S>,
}

pub fn two_scale_collections<S: Scalar>(h: &MeshHierarchy, j: usize) -> Result<TwoScaleCollections<S>> {
    let r = reference();
    Ok(TwoScaleCollections {
        theta: assemble(h, j, &r.theta)?,
        xi: assemble(h, j, &r.xi)?,
        phi_tilde: assemble(h, j, &r.phi_tilde)?,
    })
}

/// Builds `Ψ_level`: the nodal basis on level 0, and
/// `Ξ_{j+1} − ⟨Ξ_{j+1}, Φ̃_j⟩ Θ_j` with `j = level − 1` above.
pub fn build_wavelets<S: Scalar>(h: &MeshHierarchy, level: usize) -> Result<WaveletLevel<S>> {
    h.require(level + 1)?;
    if level == 0 {
        let dofs = DofMap::of_space(h, Space::primal(0));
        let n = dofs.len();
        return Ok(WaveletLevel {
            level,
            index: dofs.vertices().to_vec(),
            kinds: vec![WaveletKind::Scaling; n],
            columns: SparseMatrix::identity(n),
            scale_sq: vec![Rational::from_integer(1.into()); n],
            correction: SparseMatrix::zeros(0, 0),
            moment_order: 2,
        });
    }
    let j = level - 1;
    let c = two_scale_collections::<S>(h, j)?;
    if !global_gram(h, &c.theta, &c.phi_tilde)?.is_identity() {
        return Err(Error::Biorthogonality(format!("coarse and dual collections on level {j}")));
    }
    let cross = global_gram(h, &c.xi, &c.phi_tilde)?.unscaled;
    // ψ_x / μ_Ξ(x) = ξ_x / μ_Ξ(x) − Σ_y g_xy μ_Φ̃(y) μ_Θ(y) θ_y / μ_Θ(y), and μ_Φ̃ = μ_Θ
    let weights: Vec<S> = c.theta.mu_sq.iter().map(S::from_rational).collect();
    let mut triplets: Vec<(usize, usize, S)> = c.xi.columns.triplets().map(|(i, k, v)| (i, k, v.clone())).collect();
    let theta_cols = c.theta.columns.transpose();
    for (x, y, g) in cross.triplets() {
        let w = g.clone() * weights[y].clone();
        let (rows, vals) = theta_cols.row(y);
        for (r, v) in rows.iter().zip(vals) {
            triplets.push((*r, x, -(w.clone() * v.clone())));
        }
    }
    let columns = SparseMatrix::from_triplets(c.xi.columns.nrows(), c.xi.len(), triplets);
    let kinds =
        c.xi.index_class
            .iter()
            .map(|p| if p.on_boundary() { WaveletKind::Edge } else { WaveletKind::Interior })
            .collect();
    Ok(WaveletLevel {
        level,
        index: c.xi.index.clone(),
        kinds,
        columns,
        scale_sq: c.xi.mu_sq.clone(),
        correction: cross,
        moment_order: 2,
    })
}

/// Number of nonzero nodal coefficients in the correction per complement function.
pub fn correction_counts<S: Scalar>(w: &WaveletLevel<S>) -> Vec<usize> {
    (0..w.correction.nrows()).map(|i| w.correction.row(i).1.iter().filter(|v| !v.is_zero()).count()).collect()
}
