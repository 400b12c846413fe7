use std::collections::{HashMap, HashSet};

use num_traits::{Signed, Zero};

use super::triangulation::{edge_key, orient, triangle_area, Point, Triangulation};
use crate::error::{Error, Result};
use crate::ref_element::{quarter_parents, BaryPoint, REF_NODES};
use crate::scalar::{to_f64, Rational};

/// One level of the refinement hierarchy.
#[derive(Clone, Debug)]
pub struct Level {
    pub triangles: Vec<[usize; 3]>,
    pub areas: Vec<Rational>,
    /// Parent triangle and child slot (0..4) for every triangle above level 0.
    pub parents: Vec<(usize, u8)>,
    /// Dirichlet edges of this level.
    pub gamma_edges: HashSet<(usize, usize)>,
    /// Midpoint vertex of every edge, available once the next level exists.
    pub midpoints: HashMap<(usize, usize), usize>,
}

/// A triangulation together with its uniform red refinements.
///
/// Vertex ids are nested: the vertices of level `j` are `0..num_vertices(j)`
/// and keep their ids on all finer levels.
#[derive(Clone, Debug)]
pub struct MeshHierarchy {
    vertices: Vec<Point>,
    vertex_counts: Vec<usize>,
    on_gamma: Vec<bool>,
    levels: Vec<Level>,
}

impl MeshHierarchy {
    pub fn new(mesh: &Triangulation) -> Self {
        let mut on_gamma = vec![false; mesh.vertices.len()];
        for &(a, b) in &mesh.gamma_edges {
            on_gamma[a] = true;
            on_gamma[b] = true;
        }
        let areas = (0..mesh.triangles.len()).map(|t| mesh.area(t)).collect();
        Self {
            vertices: mesh.vertices.clone(),
            vertex_counts: vec![mesh.vertices.len()],
            on_gamma,
            levels: vec![Level {
                triangles: mesh.triangles.clone(),
                areas,
                parents: Vec::new(),
                gamma_edges: mesh.gamma_edges.iter().copied().collect(),
                midpoints: HashMap::new(),
            }],
        }
    }

    /// Hierarchy refined until level `finest` exists.
    pub fn with_levels(mesh: &Triangulation, finest: usize) -> Self {
        let mut h = Self::new(mesh);
        h.ensure_level(finest);
        h
    }

    pub fn ensure_level(&mut self, finest: usize) {
        while self.num_levels() <= finest {
            self.refine();
        }
    }

    /// Appends one red-refined level.
    pub fn refine(&mut self) {
        let l = self.levels.len() - 1;
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut triangles = Vec::with_capacity(4 * self.levels[l].triangles.len());
        let mut parents = Vec::with_capacity(triangles.capacity());
        let mut gamma_edges = HashSet::new();
        let coarse = std::mem::take(&mut self.levels[l].triangles);
        for (t, &[a, b, c]) in coarse.iter().enumerate() {
            let mut mid = |p: usize, q: usize| -> usize {
                let key = edge_key(p, q);
                if let Some(&m) = midpoints.get(&key) {
                    return m;
                }
                let m = self.vertices.len();
                self.vertices.push(self.vertices[p].midpoint(&self.vertices[q]));
                let gamma = self.levels[l].gamma_edges.contains(&key);
                self.on_gamma.push(gamma);
                if gamma {
                    gamma_edges.insert(edge_key(p, m));
                    gamma_edges.insert(edge_key(m, q));
                }
                midpoints.insert(key, m);
                m
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            for (slot, child) in [[a, ab, ca], [ab, b, bc], [ca, bc, c], [bc, ca, ab]].into_iter().enumerate() {
                triangles.push(child);
                parents.push((t, slot as u8));
            }
        }
        let quarter = crate::scalar::rat(1, 4);
        let areas = self.levels[l].areas.iter().flat_map(|a| std::iter::repeat_n(a * &quarter, 4)).collect();
        self.levels[l].triangles = coarse;
        self.levels[l].midpoints = midpoints;
        self.vertex_counts.push(self.vertices.len());
        self.levels.push(Level { triangles, areas, parents, gamma_edges, midpoints: HashMap::new() });
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, j: usize) -> &Level {
        &self.levels[j]
    }

    pub fn triangles(&self, j: usize) -> &[[usize; 3]] {
        &self.levels[j].triangles
    }

    pub fn area(&self, j: usize, t: usize) -> &Rational {
        &self.levels[j].areas[t]
    }

    pub fn num_vertices(&self, j: usize) -> usize {
        self.vertex_counts[j]
    }

    pub fn vertex(&self, v: usize) -> &Point {
        &self.vertices[v]
    }

    pub fn on_gamma(&self, v: usize) -> bool {
        self.on_gamma[v]
    }

    /// Level `j` as a standalone triangulation.
    pub fn triangulation(&self, j: usize) -> Triangulation {
        let level = &self.levels[j];
        Triangulation {
            vertices: self.vertices[..self.vertex_counts[j]].to_vec(),
            triangles: level.triangles.clone(),
            gamma_edges: level.gamma_edges.iter().copied().collect(),
        }
    }

    pub fn require(&self, j: usize) -> Result<()> {
        if j < self.num_levels() {
            Ok(())
        } else {
            Err(Error::Level { level: j, available: self.num_levels() })
        }
    }

    /// Vertex ids of the six quadratic nodes of triangle `t` on level `j`
    /// (requires level `j + 1`).
    pub fn quadratic_nodes(&self, j: usize, t: usize) -> [usize; 6] {
        let [a, b, c] = self.levels[j].triangles[t];
        let mid = &self.levels[j].midpoints;
        [a, b, c, mid[&edge_key(b, c)], mid[&edge_key(a, c)], mid[&edge_key(a, b)]]
    }

    /// Vertex ids of the 15 reference nodes of triangle `t` on level `j`, in
    /// the canonical reference order (requires level `j + 2`).
    pub fn local_nodes(&self, j: usize, t: usize) -> [usize; 15] {
        let six = self.quadratic_nodes(j, t);
        let mid = &self.levels[j + 1].midpoints;
        let mut out = [0; 15];
        out[..6].copy_from_slice(&six);
        for (k, (p, q)) in quarter_parents().iter().enumerate() {
            out[6 + k] = mid[&edge_key(six[*p], six[*q])];
        }
        out
    }

    /// Vertex id of reference node `node` in triangle `t` of level `j`.
    pub fn node_vertex(&self, j: usize, t: usize, node: &BaryPoint) -> usize {
        let k = crate::ref_element::node_index(node).expect("reference node");
        if k < 6 {
            self.quadratic_nodes(j, t)[k]
        } else {
            self.local_nodes(j, t)[k]
        }
    }

    /// Points off the Dirichlet boundary whose barycentric coordinates in some
    /// triangle of level `j` lie in `local`, as sorted vertex ids.
    pub fn node_index_set(&self, j: usize, local: &[BaryPoint]) -> Vec<usize> {
        if local.is_empty() {
            return Vec::new();
        }
        let mut out: Vec<usize> = (0..self.levels[j].triangles.len())
            .flat_map(|t| local.iter().map(move |p| self.node_vertex(j, t, p)))
            .filter(|&v| !self.on_gamma[v])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `Σ vol(T)` over the triangles of level `j` containing each vertex,
    /// for all vertices up to level `j + 2`.
    pub fn patch_volumes(&self, j: usize) -> Vec<Rational> {
        let n = self.vertex_counts[(j + 2).min(self.finest())];
        let mut out = vec![Rational::zero(); n];
        for t in 0..self.levels[j].triangles.len() {
            let nodes: Vec<usize> = if j + 2 <= self.finest() {
                self.local_nodes(j, t).to_vec()
            } else {
                self.quadratic_nodes(j, t).to_vec()
            };
            for v in nodes {
                out[v] += &self.levels[j].areas[t];
            }
        }
        out
    }

    /// `μ(x)^2 = 1 / Σ_{T ∋ x} vol(T)` over triangles of level `j`.
    pub fn scaling_factor_sq(&self, j: usize, x: &Point) -> Option<Rational> {
        let mut total = Rational::zero();
        for (t, tri) in self.levels[j].triangles.iter().enumerate() {
            let [a, b, c] = tri.map(|v| &self.vertices[v]);
            let o = orient(a, b, c);
            let inside = [orient(x, b, c), orient(a, x, c), orient(a, b, x)].iter().all(|w| !(w * &o).is_negative());
            if inside {
                total += &self.levels[j].areas[t];
            }
        }
        (!total.is_zero()).then(|| total.recip())
    }

    /// `μ(x) = (Σ_{T ∋ x} vol(T))^{-1/2}`.
    pub fn scaling_factor(&self, j: usize, x: &Point) -> Option<f64> {
        self.scaling_factor_sq(j, x).map(|m| to_f64(&m).sqrt())
    }

    /// Total area of the domain.
    pub fn domain_area(&self) -> Rational {
        self.levels[0].areas.iter().fold(Rational::zero(), |a, b| a + b)
    }

    /// Physical point of a reference node in a triangle.
    pub fn map_point(&self, j: usize, t: usize, node: &BaryPoint) -> Point {
        let tri = self.levels[j].triangles[t].map(|v| &self.vertices[v]);
        Point::combination(&[tri[0], tri[1], tri[2]], &node.lambda())
    }

    /// Area of a triangle given by vertex ids.
    pub fn triangle_area(&self, tri: [usize; 3]) -> Rational {
        triangle_area(&self.vertices[tri[0]], &self.vertices[tri[1]], &self.vertices[tri[2]])
    }
}

/// Reference nodes of the quadratic nodal basis.
pub fn quadratic_ref_nodes() -> &'static [BaryPoint] {
    &REF_NODES[..6]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{l_shape, unit_square};
    use crate::ref_element::NodeClass;
    use crate::scalar::rat;

    #[test]
    fn counts_on_unit_square() {
        let h = MeshHierarchy::with_levels(&unit_square(), 5);
        for j in 0..=5 {
            assert_eq!(h.triangles(j).len(), 2 * 4usize.pow(j as u32));
            let side = (1usize << j) + 1;
            assert_eq!(h.num_vertices(j), side * side);
            let interior = (0..h.num_vertices(j)).filter(|&v| !h.on_gamma(v)).count();
            assert_eq!(interior, (side - 2) * (side - 2));
        }
    }

    #[test]
    fn children_are_quarters_and_nested() {
        let h = MeshHierarchy::with_levels(&l_shape(), 3);
        for j in 1..=3 {
            for (t, &(p, _)) in h.level(j).parents.iter().enumerate() {
                assert_eq!(h.triangle_area(h.triangles(j)[t]), h.area(j - 1, p) * rat(1, 4));
                assert_eq!(h.area(j, t), &h.triangle_area(h.triangles(j)[t]));
            }
        }
    }

    #[test]
    fn node_sets() {
        let h = MeshHierarchy::with_levels(&unit_square(), 4);
        let i01: Vec<_> = REF_NODES[..6].to_vec();
        let i2: Vec<_> = REF_NODES[6..].to_vec();
        for j in 0..=2 {
            let fine = h.node_index_set(j, &i01);
            let expect = (1usize << (j + 1)) - 1;
            assert_eq!(fine.len(), expect * expect);
            let next = h.node_index_set(j, &i2);
            assert!(next.iter().all(|&v| v >= h.num_vertices(j + 1) && v < h.num_vertices(j + 2)));
            let total = (0..h.num_vertices(j + 2)).filter(|&v| !h.on_gamma(v)).count();
            assert_eq!(fine.len() + next.len(), total);
        }
        assert!(h.node_index_set(1, &[]).is_empty());
        assert!(REF_NODES[6..].iter().all(|n| n.class() == NodeClass::Quarter));
    }

    #[test]
    fn scaling_factors() {
        let h = MeshHierarchy::with_levels(&unit_square(), 3);
        let centre = Point::new(rat(1, 2), rat(1, 2));
        // the centre is a valence-6 vertex from level 1 on
        let vol = rat(1, 2) * rat(1, 16);
        assert_eq!(h.scaling_factor_sq(2, &centre), Some((vol * rat(6, 1)).recip()));
        let inner = Point::new(rat(3, 4), rat(1, 4));
        assert_eq!(h.scaling_factor_sq(0, &inner), Some(rat(2, 1)));
        let edge = Point::new(rat(1, 2), rat(1, 2));
        assert_eq!(h.scaling_factor_sq(0, &edge), Some(rat(1, 1)));
        assert_eq!(h.scaling_factor_sq(0, &Point::new(rat(2, 1), rat(0, 1))), None);
        let patch = h.patch_volumes(1);
        let v = h.node_index_set(1, &REF_NODES[..1])[0];
        assert_eq!(patch[v].clone().recip(), h.scaling_factor_sq(1, h.vertex(v)).unwrap());
    }
}
