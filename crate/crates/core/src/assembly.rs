//! Local-to-global construction of collections and their Gram matrices.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fe::{DofMap, Space};
use crate::mesh::MeshHierarchy;
use crate::ref_element::{gram, BaryPoint, BasisTag, CollectionId, LocalCollection};
use crate::scalar::{to_f64, Rational, Scalar};
use crate::sparse::SparseMatrix;
use crate::spectral::dense;

/// A collection of global functions `σ_{j,x} = μ(x) σ_{λ_T(x)} ∘ λ_T`
/// assembled from a reference collection.
///
/// Columns hold the coefficients of the unscaled functions
/// `σ_{j,x} / μ(x)`, which are exact when the mesh is rational; the squared
/// scaling factors are kept separately.
#[derive(Clone, Debug)]
pub struct GlobalCollection<S> {
    pub level: usize,
    pub local: LocalCollection,
    pub space: Space,
    /// Vertex ids of the index points, increasing.
    pub index: Vec<usize>,
    /// Reference point each index point corresponds to.
    pub index_class: Vec<BaryPoint>,
    /// `μ(x)^2` per index point.
    pub mu_sq: Vec<Rational>,
    /// Coefficients over the nodal basis of `space`, one column per index point.
    pub columns: SparseMatrix<S>,
}

impl<S: Scalar> GlobalCollection<S> {
    pub fn id(&self) -> CollectionId {
        self.local.id
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn position(&self, vertex: usize) -> Option<usize> {
        self.index.binary_search(&vertex).ok()
    }

    /// Columns multiplied by `μ(x)`, in floating point.
    pub fn scaled_columns(&self) -> SparseMatrix<f64> {
        let mu: Vec<f64> = self.mu_sq.iter().map(|m| to_f64(m).sqrt()).collect();
        let triplets = self.columns.triplets().map(|(i, j, v)| (i, j, v.to_f64() * mu[j])).collect();
        SparseMatrix::from_triplets(self.columns.nrows(), self.columns.ncols(), triplets)
    }
}

/// Assembles the global collection of `local` on level `j`.
///
/// Panics if the assembled functions are discontinuous or fail to vanish on
/// the Dirichlet boundary, which can only happen for a reference collection
/// without the vanishing and symmetry properties.
pub fn assemble<S: Scalar>(h: &MeshHierarchy, j: usize, local: &LocalCollection) -> Result<GlobalCollection<S>> {
    let space = Space::of_basis(local.basis, j);
    let needed = if local.basis == BasisTag::SplitQuadratic
        || local.index.iter().any(|p| crate::ref_element::node_index(p).unwrap() >= 6)
    {
        j + 2
    } else {
        j + 1
    };
    h.require(needed)?;
    let dofs = DofMap::of_space(h, space);
    let index = h.node_index_set(j, &local.index);
    let position: HashMap<usize, usize> = index.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut index_class = vec![None; index.len()];
    let mut patch = vec![Rational::zero(); index.len()];
    let mut entries: HashMap<(usize, usize), Rational> = HashMap::new();
    for t in 0..h.triangles(j).len() {
        let nodes: Vec<usize> = match local.basis {
            BasisTag::SplitQuadratic => h.local_nodes(j, t).to_vec(),
            _ => h.quadratic_nodes(j, t).to_vec(),
        };
        for (lambda, f) in local.index.iter().zip(&local.functions) {
            let x = h.node_vertex(j, t, lambda);
            let Some(&col) = position.get(&x) else { continue };
            index_class[col].get_or_insert(*lambda);
            patch[col] += h.area(j, t);
            for (&y, c) in nodes.iter().zip(&f.coeffs) {
                match dofs.dof(y) {
                    None => assert!(c.is_zero(), "function {col} does not vanish on the Dirichlet boundary"),
                    Some(row) => match entries.get(&(row, col)) {
                        Some(prev) => assert_eq!(prev, c, "function {col} is discontinuous at vertex {y}"),
                        None => {
                            entries.insert((row, col), c.clone());
                        }
                    },
                }
            }
        }
    }
    let triplets = entries.into_iter().map(|((r, c), v)| (r, c, S::from_rational(&v))).collect();
    Ok(GlobalCollection {
        level: j,
        local: local.clone(),
        space,
        index_class: index_class.into_iter().map(|c| c.expect("every index point lies in a triangle")).collect(),
        mu_sq: patch.into_iter().map(|p| p.recip()).collect(),
        index,
        columns: SparseMatrix::from_triplets(dofs.len(), position.len(), triplets),
    })
}

/// Gram matrix `⟨A, B⟩_{L2}` of two global collections.
#[derive(Clone, Debug)]
pub struct GlobalGram<S> {
    /// Gram matrix of the unscaled functions.
    pub unscaled: SparseMatrix<S>,
    pub row_mu_sq: Vec<Rational>,
    pub col_mu_sq: Vec<Rational>,
}

impl<S: Scalar> GlobalGram<S> {
    /// The Gram matrix of the scaled collections, in floating point.
    pub fn scaled(&self) -> SparseMatrix<f64> {
        let r: Vec<f64> = self.row_mu_sq.iter().map(|m| to_f64(m).sqrt()).collect();
        let c: Vec<f64> = self.col_mu_sq.iter().map(|m| to_f64(m).sqrt()).collect();
        let t = self.unscaled.triplets().map(|(i, j, v)| (i, j, v.to_f64() * r[i] * c[j])).collect();
        SparseMatrix::from_triplets(self.unscaled.nrows(), self.unscaled.ncols(), t)
    }

    /// Whether the scaled Gram matrix is the identity, decided exactly on
    /// the rational path: off-diagonal entries vanish and
    /// `g_xx^2 μ_A(x)^2 μ_B(x)^2 = 1` with `g_xx > 0`.
    pub fn is_identity(&self) -> bool {
        let n = self.unscaled.nrows();
        if n != self.unscaled.ncols() {
            return false;
        }
        let mut diag = 0;
        for (i, j, v) in self.unscaled.triplets() {
            if i != j {
                return false;
            }
            let scale = S::from_rational(&(&self.row_mu_sq[i] * &self.col_mu_sq[j]));
            let sq = v.clone() * v.clone() * scale;
            if v.to_f64() <= 0.0 || !sq.same_as(&S::one()) {
                return false;
            }
            diag += 1;
        }
        diag == n
    }
}

/// Gram matrix of two collections on the same level, accumulated per
/// triangle from the reference Gram matrix:
/// `⟨σ_x, σ̃_y⟩ / (μ(x) μ̃(y)) = Σ_T vol(T) ⟨σ_{λ_T(x)}, σ̃_{λ_T(y)}⟩_T / vol(T_ref)`.
pub fn global_gram<S: Scalar>(
    h: &MeshHierarchy,
    a: &GlobalCollection<S>,
    b: &GlobalCollection<S>,
) -> Result<GlobalGram<S>> {
    if a.level != b.level {
        return Err(Error::LevelMismatch(a.level, b.level));
    }
    let j = a.level;
    let r = gram(&a.local, &b.local);
    let ra: Vec<S> = (0..r.entries.nrows() * r.entries.ncols())
        .map(|k| S::from_rational(&r.entries[(k / r.entries.ncols(), k % r.entries.ncols())]))
        .collect();
    let nc = r.entries.ncols();
    let mut triplets = Vec::new();
    for t in 0..h.triangles(j).len() {
        let area = S::from_rational(h.area(j, t));
        let rows: Vec<Option<usize>> = a.local.index.iter().map(|p| a.position(h.node_vertex(j, t, p))).collect();
        let cols: Vec<Option<usize>> = b.local.index.iter().map(|p| b.position(h.node_vertex(j, t, p))).collect();
        for (p, row) in rows.iter().enumerate() {
            let Some(row) = row else { continue };
            for (q, col) in cols.iter().enumerate() {
                let Some(col) = col else { continue };
                let v = &ra[p * nc + q];
                if !v.is_zero() {
                    triplets.push((*row, *col, area.clone() * v.clone()));
                }
            }
        }
    }
    Ok(GlobalGram {
        unscaled: SparseMatrix::from_triplets(a.len(), b.len(), triplets),
        row_mu_sq: a.mu_sq.clone(),
        col_mu_sq: b.mu_sq.clone(),
    })
}

/// Lower bound `σ_min(⟨Φ,Φ̃⟩) / sqrt(‖⟨Φ,Φ⟩‖ ‖⟨Φ̃,Φ̃⟩‖)` of the inf-sup
/// constant between the primal and dual spaces on level `j`.
pub fn infsup_bound(h: &MeshHierarchy, j: usize) -> Result<f64> {
    let r = crate::ref_element::reference();
    let n: GlobalCollection<f64> = assemble(h, j, &r.n)?;
    let nt: GlobalCollection<f64> = assemble(h, j, &r.n_tilde)?;
    dense::check_size(n.len(), dense::MAX_DENSE_DOFS)?;
    let cross = dense::dense(&global_gram(h, &n, &nt)?.scaled());
    let gp = dense::dense(&global_gram(h, &n, &n)?.scaled());
    let gd = dense::dense(&global_gram(h, &nt, &nt)?.scaled());
    let s = dense::singular_values(&cross)?;
    let smin = *s.last().ok_or_else(|| Error::Singular("empty level".into()))?;
    if smin <= 0.0 {
        return Err(Error::Singular("primal-dual Gram matrix".into()));
    }
    let np = dense::sym_extremes(&gp)?.1;
    let nd = dense::sym_extremes(&gd)?.1;
    Ok(smin / (np * nd).sqrt())
}
