//! Lagrange finite element spaces on the hierarchy: degree-of-freedom
//! numbering, element matrices, inter-level embeddings and moments.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::mesh::MeshHierarchy;
use crate::ref_element::{p1_mass, p2_basis, p2_gradient_tensor, p2_mass, BaryPoly, BasisTag};
use crate::scalar::{Rational, Scalar};
use crate::sparse::SparseMatrix;

/// Polynomial degree of a nodal space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Quadratic,
    Linear,
}

/// Continuous piecewise polynomials of the given degree on level
/// `mesh_level`, vanishing on the Dirichlet boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    pub kind: SpaceKind,
    pub mesh_level: usize,
}

impl Space {
    /// The primal space on level `j`: quadratics on `T_j`.
    pub fn primal(j: usize) -> Self {
        Self { kind: SpaceKind::Quadratic, mesh_level: j }
    }

    /// The dual space on level `j`: linears on `T_{j+1}`.
    pub fn dual(j: usize) -> Self {
        Self { kind: SpaceKind::Linear, mesh_level: j + 1 }
    }

    /// Level whose vertices carry the nodal degrees of freedom.
    pub fn vertex_level(&self) -> usize {
        match self.kind {
            SpaceKind::Quadratic => self.mesh_level + 1,
            SpaceKind::Linear => self.mesh_level,
        }
    }

    /// The space spanned by a local basis assembled on level `j`.
    pub fn of_basis(tag: BasisTag, j: usize) -> Self {
        match tag {
            BasisTag::Quadratic => Self::primal(j),
            BasisTag::SplitLinear => Self::dual(j),
            BasisTag::SplitQuadratic => Self::primal(j + 1),
        }
    }
}

/// Numbering of the vertices of one level off the Dirichlet boundary, in
/// increasing vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DofMap {
    pub vertex_level: usize,
    dof: Vec<usize>,
    vertices: Vec<usize>,
}

impl DofMap {
    const NONE: usize = usize::MAX;

    pub fn new(h: &MeshHierarchy, vertex_level: usize) -> Self {
        Self::build(h, vertex_level, true)
    }

    /// Numbering that keeps the Dirichlet vertices as well.
    pub fn all(h: &MeshHierarchy, vertex_level: usize) -> Self {
        Self::build(h, vertex_level, false)
    }

    fn build(h: &MeshHierarchy, vertex_level: usize, skip_gamma: bool) -> Self {
        let n = h.num_vertices(vertex_level);
        let mut dof = vec![Self::NONE; n];
        let mut vertices = Vec::new();
        for (v, d) in dof.iter_mut().enumerate() {
            if !(skip_gamma && h.on_gamma(v)) {
                *d = vertices.len();
                vertices.push(v);
            }
        }
        Self { vertex_level, dof, vertices }
    }

    pub fn of_space(h: &MeshHierarchy, space: Space) -> Self {
        Self::new(h, space.vertex_level())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dof(&self, vertex: usize) -> Option<usize> {
        self.dof.get(vertex).copied().filter(|&d| d != Self::NONE)
    }

    pub fn vertex(&self, dof: usize) -> usize {
        self.vertices[dof]
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }
}

/// `∇λ_i · ∇λ_k` scaled by the squared doubled area, i.e. the dot product of
/// the edge vectors opposite vertices `i` and `k`.
fn edge_products(h: &MeshHierarchy, tri: [usize; 3]) -> [[Rational; 3]; 3] {
    let p = tri.map(|v| h.vertex(v).clone());
    let e: Vec<(Rational, Rational)> =
        (0..3).map(|i| (&p[(i + 2) % 3].x - &p[(i + 1) % 3].x, &p[(i + 2) % 3].y - &p[(i + 1) % 3].y)).collect();
    std::array::from_fn(|i| std::array::from_fn(|k| &e[i].0 * &e[k].0 + &e[i].1 * &e[k].1))
}

/// Exact quadratic mass matrix of a triangle, ordered as [`quadratic_nodes`].
///
/// [`quadratic_nodes`]: MeshHierarchy::quadratic_nodes
pub fn p2_element_mass(area: &Rational) -> [[Rational; 6]; 6] {
    let m = p2_mass();
    std::array::from_fn(|a| std::array::from_fn(|b| &m[(a, b)] * area))
}

/// Exact quadratic stiffness matrix of a triangle.
pub fn p2_element_stiffness(h: &MeshHierarchy, tri: [usize; 3]) -> [[Rational; 6]; 6] {
    let g = edge_products(h, tri);
    let area = h.triangle_area(tri);
    // ∇λ_i·∇λ_k = g_ik / (2A)^2 and the integral carries a factor A
    let scale = (area.clone() * Rational::from_integer(4.into()) * area.clone()).recip() * &area;
    let t = p2_gradient_tensor();
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut s = Rational::zero();
            for i in 0..3 {
                for k in 0..3 {
                    s += &g[i][k] * &t[a][b][i][k];
                }
            }
            s * &scale
        })
    })
}

/// Exact linear stiffness matrix of a triangle.
pub fn p1_element_stiffness(h: &MeshHierarchy, tri: [usize; 3]) -> [[Rational; 3]; 3] {
    let g = edge_products(h, tri);
    let area = h.triangle_area(tri);
    let scale = (area * Rational::from_integer(4.into())).recip();
    std::array::from_fn(|i| std::array::from_fn(|k| &g[i][k] * &scale))
}

/// Exact linear mass matrix of a triangle.
pub fn p1_element_mass(area: &Rational) -> [[Rational; 3]; 3] {
    let m = p1_mass();
    std::array::from_fn(|a| std::array::from_fn(|b| &m[(a, b)] * area))
}

/// Bilinear form assembled by [`assemble_form`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Mass,
    Stiffness,
}

/// Global matrix of `form` on `space`, restricted to the dofs in `dofs`.
pub fn assemble_form<S: Scalar>(h: &MeshHierarchy, space: Space, form: Form, dofs: &DofMap) -> SparseMatrix<S> {
    let l = space.mesh_level;
    let mut triplets = Vec::new();
    for (t, &tri) in h.triangles(l).iter().enumerate() {
        let (nodes, local): (Vec<usize>, Vec<Vec<Rational>>) = match (space.kind, form) {
            (SpaceKind::Quadratic, Form::Mass) => {
                (h.quadratic_nodes(l, t).to_vec(), p2_element_mass(h.area(l, t)).map(|r| r.to_vec()).to_vec())
            }
            (SpaceKind::Quadratic, Form::Stiffness) => {
                (h.quadratic_nodes(l, t).to_vec(), p2_element_stiffness(h, tri).map(|r| r.to_vec()).to_vec())
            }
            (SpaceKind::Linear, Form::Mass) => {
                (tri.to_vec(), p1_element_mass(h.area(l, t)).map(|r| r.to_vec()).to_vec())
            }
            (SpaceKind::Linear, Form::Stiffness) => {
                (tri.to_vec(), p1_element_stiffness(h, tri).map(|r| r.to_vec()).to_vec())
            }
        };
        let ids: Vec<Option<usize>> = nodes.iter().map(|&v| dofs.dof(v)).collect();
        for (a, ia) in ids.iter().enumerate() {
            let Some(ia) = ia else { continue };
            for (b, ib) in ids.iter().enumerate() {
                let Some(ib) = ib else { continue };
                if !local[a][b].is_zero() {
                    triplets.push((*ia, *ib, S::from_rational(&local[a][b])));
                }
            }
        }
    }
    SparseMatrix::from_triplets(dofs.len(), dofs.len(), triplets)
}

/// Matrix expressing functions of a level-`j` space with local basis `tag`
/// (quadratics on `T_j` or linears on `T_{j+1}`) in the quadratic nodal
/// basis on `T_{j+1}`.
pub fn embedding_matrix<S: Scalar>(h: &MeshHierarchy, j: usize, tag: BasisTag) -> SparseMatrix<S> {
    let from = DofMap::of_space(h, Space::of_basis(tag, j));
    let to = DofMap::of_space(h, Space::primal(j + 1));
    let emb = tag.embedding();
    let mut entries: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for t in 0..h.triangles(j).len() {
        let fine = h.local_nodes(j, t);
        let coarse = h.quadratic_nodes(j, t);
        for (k, &y) in fine.iter().enumerate() {
            let Some(r) = to.dof(y) else { continue };
            for (a, &x) in coarse.iter().enumerate() {
                let Some(c) = from.dof(x) else { continue };
                if !emb[(a, k)].is_zero() {
                    entries.insert((r, c), emb[(a, k)].clone());
                }
            }
        }
    }
    let triplets = entries.into_iter().map(|((r, c), v)| (r, c, S::from_rational(&v))).collect();
    SparseMatrix::from_triplets(to.len(), from.len(), triplets)
}

/// Prolongation from the quadratics on `T_j` to those on `T_{j+1}`.
pub fn prolongation<S: Scalar>(h: &MeshHierarchy, j: usize) -> SparseMatrix<S> {
    embedding_matrix(h, j, BasisTag::Quadratic)
}

/// Exact integrals of each quadratic nodal function on `T_l` against
/// `1`, `x` and `y`.
pub fn moment_vectors(h: &MeshHierarchy, l: usize) -> [Vec<Rational>; 3] {
    let dofs = DofMap::of_space(h, Space::primal(l));
    let basis = p2_basis();
    let lin: [[Rational; 3]; 6] =
        std::array::from_fn(|a| std::array::from_fn(|i| basis[a].mul(&BaryPoly::coord(i)).mean()));
    let mean: [Rational; 6] = std::array::from_fn(|a| basis[a].mean());
    let mut out =
        [vec![Rational::zero(); dofs.len()], vec![Rational::zero(); dofs.len()], vec![Rational::zero(); dofs.len()]];
    for (t, tri) in h.triangles(l).iter().enumerate() {
        let area = h.area(l, t);
        let p = tri.map(|v| h.vertex(v));
        for (a, &v) in h.quadratic_nodes(l, t).iter().enumerate() {
            let Some(d) = dofs.dof(v) else { continue };
            out[0][d] += &mean[a] * area;
            for i in 0..3 {
                out[1][d] += &lin[a][i] * &p[i].x * area;
                out[2][d] += &lin[a][i] * &p[i].y * area;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{l_shape, unit_square};
    use crate::scalar::int;

    #[test]
    fn dof_counts() {
        let h = MeshHierarchy::with_levels(&unit_square(), 3);
        assert_eq!(DofMap::of_space(&h, Space::primal(0)).len(), 1);
        assert_eq!(DofMap::of_space(&h, Space::primal(1)).len(), 9);
        assert_eq!(DofMap::of_space(&h, Space::dual(1)).len(), 9);
        assert_eq!(DofMap::all(&h, 1).len(), 9);
    }

    #[test]
    fn mass_row_sums_match_integrals() {
        let h = MeshHierarchy::with_levels(&l_shape(), 2);
        let all = DofMap::all(&h, 2);
        let m: SparseMatrix<Rational> = assemble_form(&h, Space::primal(1), Form::Mass, &all);
        let ones = vec![int(1); all.len()];
        let sums = m.matvec(&ones);
        let total = sums.iter().fold(int(0), |a, b| a + b);
        assert_eq!(total, int(3));
        // vertex functions of quadratics integrate to zero
        for v in 0..h.num_vertices(1) {
            assert_eq!(sums[all.dof(v).unwrap()], int(0));
        }
    }

    #[test]
    fn stiffness_kills_constants_and_linears() {
        let h = MeshHierarchy::with_levels(&l_shape(), 2);
        let all = DofMap::all(&h, 2);
        let k: SparseMatrix<Rational> = assemble_form(&h, Space::primal(1), Form::Stiffness, &all);
        let ones = vec![int(1); all.len()];
        assert!(k.matvec(&ones).iter().all(Zero::is_zero));
        let x: Vec<Rational> = all.vertices().iter().map(|&v| h.vertex(v).x.clone()).collect();
        let kx = k.matvec(&x);
        // x^T K x = |∇x|^2 area = 3
        let energy = kx.iter().zip(&x).fold(int(0), |a, (p, q)| a + p * q);
        assert_eq!(energy, int(3));
        let p1 = DofMap::all(&h, 1);
        let k1: SparseMatrix<Rational> = assemble_form(&h, Space::dual(0), Form::Stiffness, &p1);
        assert!(k1.matvec(&vec![int(1); p1.len()]).iter().all(Zero::is_zero));
    }

    #[test]
    fn prolongation_is_exact_embedding() {
        let h = MeshHierarchy::with_levels(&l_shape(), 3);
        let p: SparseMatrix<Rational> = prolongation(&h, 1);
        for form in [Form::Mass, Form::Stiffness] {
            let coarse: SparseMatrix<Rational> =
                assemble_form(&h, Space::primal(1), form, &DofMap::of_space(&h, Space::primal(1)));
            let fine: SparseMatrix<Rational> =
                assemble_form(&h, Space::primal(2), form, &DofMap::of_space(&h, Space::primal(2)));
            assert_eq!(p.transpose().mul(&fine).mul(&p), coarse);
        }
        // linears on T_2 embed exactly into quadratics on T_2
        let e: SparseMatrix<Rational> = embedding_matrix(&h, 1, BasisTag::SplitLinear);
        let lin: SparseMatrix<Rational> =
            assemble_form(&h, Space::dual(1), Form::Mass, &DofMap::of_space(&h, Space::dual(1)));
        let fine: SparseMatrix<Rational> =
            assemble_form(&h, Space::primal(2), Form::Mass, &DofMap::of_space(&h, Space::primal(2)));
        assert_eq!(e.transpose().mul(&fine).mul(&e), lin);
    }

    #[test]
    fn moments_of_unity() {
        let h = MeshHierarchy::with_levels(&unit_square(), 2);
        let dofs = DofMap::all(&h, 2);
        let m = moment_vectors(&h, 1);
        assert_eq!(m[0].len(), DofMap::new(&h, 2).len());
        assert!(dofs.len() > m[0].len());
    }
}
