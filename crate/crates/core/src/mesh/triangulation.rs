use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::error::MeshError;
use crate::scalar::{parse_rational, rat, to_f64, Rational};

/// A point in the plane with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = rat(1, 2);
        Point { x: (&self.x + &other.x) * &half, y: (&self.y + &other.y) * &half }
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [to_f64(&self.x), to_f64(&self.y)]
    }

    /// Affine combination `Σ w_i p_i`.
    pub fn combination(points: &[&Point; 3], w: &[Rational; 3]) -> Point {
        let mut x = Rational::zero();
        let mut y = Rational::zero();
        for (p, wi) in points.iter().zip(w) {
            x += &p.x * wi;
            y += &p.y * wi;
        }
        Point { x, y }
    }
}

/// Twice the signed area of `(a, b, c)`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&c.x - &a.x) * (&b.y - &a.y)
}

pub fn triangle_area(a: &Point, b: &Point, c: &Point) -> Rational {
    orient(a, b, c).abs() * rat(1, 2)
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// A conforming triangulation with a marked Dirichlet boundary part.
#[derive(Clone, Debug, PartialEq)]
pub struct Triangulation {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    /// Dirichlet edges as sorted vertex pairs.
    pub gamma_edges: BTreeSet<(usize, usize)>,
}

impl Triangulation {
    /// Validates and builds a triangulation.
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        gamma: Vec<(usize, usize)>,
    ) -> Result<Self, MeshError> {
        let lines: Vec<usize> = (0..gamma.len()).collect();
        Self::validated(vertices, triangles, gamma.into_iter().zip(lines).collect())
    }

    fn validated(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        gamma: Vec<((usize, usize), usize)>,
    ) -> Result<Self, MeshError> {
        if triangles.is_empty() {
            return Err(MeshError::Empty);
        }
        let mut used = vec![false; vertices.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for &i in tri {
                if i >= vertices.len() {
                    return Err(MeshError::VertexIndex { triangle: t, index: i });
                }
                used[i] = true;
            }
            if orient(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]).is_zero() {
                return Err(MeshError::Degenerate { triangle: t });
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(MeshError::DanglingVertex { vertex: v });
        }
        let mesh = Self { vertices, triangles, gamma_edges: BTreeSet::new() };
        mesh.check_conformity()?;
        let counts = mesh.edge_counts();
        let mut gamma_edges = BTreeSet::new();
        for ((a, b), line) in gamma {
            if a >= mesh.vertices.len() || b >= mesh.vertices.len() || counts.get(&edge_key(a, b)) != Some(&1) {
                return Err(MeshError::GammaEdge { line, a, b });
            }
            gamma_edges.insert(edge_key(a, b));
        }
        Ok(Self { gamma_edges, ..mesh })
    }

    fn edge_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *counts.entry(edge_key(t[k], t[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        counts
    }

    fn check_conformity(&self) -> Result<(), MeshError> {
        for (e, c) in self.edge_counts() {
            if c > 2 {
                return Err(MeshError::Nonconforming(format!("edge ({}, {}) shared by {c} triangles", e.0, e.1)));
            }
        }
        // hanging nodes: a vertex in the relative interior of some edge
        for (e, _) in self.edge_counts() {
            let (a, b) = (&self.vertices[e.0], &self.vertices[e.1]);
            for (v, p) in self.vertices.iter().enumerate() {
                if v == e.0 || v == e.1 || !orient(a, b, p).is_zero() {
                    continue;
                }
                let t = (&p.x - &a.x) * (&b.x - &a.x) + (&p.y - &a.y) * (&b.y - &a.y);
                let len = (&b.x - &a.x) * (&b.x - &a.x) + (&b.y - &a.y) * (&b.y - &a.y);
                if t.is_positive() && t < len {
                    return Err(MeshError::Nonconforming(format!(
                        "vertex {v} is a hanging node on edge ({}, {})",
                        e.0, e.1
                    )));
                }
            }
        }
        for i in 0..self.triangles.len() {
            for j in i + 1..self.triangles.len() {
                if self.overlap(i, j) {
                    return Err(MeshError::Nonconforming(format!("triangles {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }

    /// Whether the open interiors of two triangles intersect (separating axis test).
    fn overlap(&self, i: usize, j: usize) -> bool {
        let pts = |t: usize| self.triangles[t].map(|v| &self.vertices[v]);
        let (p, q) = (pts(i), pts(j));
        for (a, b) in [(&p, &q), (&q, &p)] {
            for k in 0..3 {
                let (u, v) = (a[k], a[(k + 1) % 3]);
                let own = orient(u, v, a[(k + 2) % 3]);
                // the other triangle lies weakly on the far side of this edge
                if b.iter().all(|w| !(orient(u, v, w) * &own).is_positive()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn area(&self, t: usize) -> Rational {
        let [a, b, c] = self.triangles[t];
        triangle_area(&self.vertices[a], &self.vertices[b], &self.vertices[c])
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.edge_counts().values().filter(|&&c| c == 1).count()
    }
}

/// Parses the line-oriented mesh format.
pub fn load_mesh(text: &str) -> Result<Triangulation, MeshError> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut gamma = Vec::new();
    let mut header = false;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| MeshError::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !header {
            if fields != ["femwave-mesh", "1"] {
                return Err(err("expected header `femwave-mesh 1`".into()));
            }
            header = true;
            continue;
        }
        let index = |s: &str| s.parse::<usize>().map_err(|_| err(format!("invalid index `{s}`")));
        match fields.as_slice() {
            ["v", x, y] => {
                let c = |s: &str| parse_rational(s).ok_or_else(|| err(format!("invalid coordinate `{s}`")));
                vertices.push(Point::new(c(x)?, c(y)?));
            }
            ["t", i, j, k] => triangles.push([index(i)?, index(j)?, index(k)?]),
            ["g", i, j] => gamma.push(((index(i)?, index(j)?), line_no)),
            _ => return Err(err(format!("unrecognized line `{line}`"))),
        }
    }
    if !header {
        return Err(MeshError::Parse { line: 1, message: "missing header".into() });
    }
    Triangulation::validated(vertices, triangles, gamma)
}

/// Serializes a triangulation in the format read by [`load_mesh`].
pub fn write_mesh(mesh: &Triangulation) -> String {
    use crate::scalar::format_rational;
    let mut out = String::from("femwave-mesh 1\n");
    for p in &mesh.vertices {
        out += &format!("v {} {}\n", format_rational(&p.x), format_rational(&p.y));
    }
    for t in &mesh.triangles {
        out += &format!("t {} {} {}\n", t[0], t[1], t[2]);
    }
    for (a, b) in &mesh.gamma_edges {
        out += &format!("g {a} {b}\n");
    }
    out
}

/// The two-triangle unit square with Dirichlet conditions on the whole boundary.
pub fn unit_square() -> Triangulation {
    load_mesh(include_str!("../../data/unit_square.mesh")).expect("bundled mesh is valid")
}

/// An L-shaped domain with vertices of valence other than six.
pub fn l_shape() -> Triangulation {
    load_mesh(include_str!("../../data/l_shape.mesh")).expect("bundled mesh is valid")
}

/// Looks up a bundled mesh by name.
pub fn bundled(name: &str) -> Option<Triangulation> {
    match name {
        "unit-square" | "unit_square" | "square" => Some(unit_square()),
        "l-shape" | "l_shape" | "lshape" => Some(l_shape()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_meshes_load() {
        let sq = unit_square();
        assert_eq!((sq.vertices.len(), sq.triangles.len(), sq.gamma_edges.len()), (4, 2, 4));
        let l = l_shape();
        assert_eq!((l.vertices.len(), l.triangles.len(), l.gamma_edges.len()), (11, 12, 7));
        assert_eq!(l.num_boundary_edges(), 8);
        let total = (0..12).fold(Rational::zero(), |acc, t| acc + l.area(t));
        assert_eq!(total, rat(3, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(load_mesh("femwave-mesh 1\nv 0 0\n"), Err(MeshError::Empty));
        assert!(matches!(load_mesh("femwave-mesh 1\nv 0 x\n"), Err(MeshError::Parse { line: 2, .. })));
        assert!(matches!(load_mesh("mesh\n"), Err(MeshError::Parse { line: 1, .. })));
        let hanging = "femwave-mesh 1\nv 0 0\nv 2 0\nv 0 2\nv 1 0\nv 1 -1\nt 0 1 2\nt 0 4 3\nt 3 4 1\n";
        assert!(matches!(load_mesh(hanging), Err(MeshError::Nonconforming(_))));
        let dangling = "femwave-mesh 1\nv 0 0\nv 1 0\nv 0 1\nv 5 5\nt 0 1 2\n";
        assert_eq!(load_mesh(dangling), Err(MeshError::DanglingVertex { vertex: 3 }));
        let interior_gamma = "femwave-mesh 1\nv 0 0\nv 1 0\nv 1 1\nv 0 1\nt 0 1 2\nt 0 2 3\ng 0 2\n";
        assert_eq!(load_mesh(interior_gamma), Err(MeshError::GammaEdge { line: 8, a: 0, b: 2 }));
        let overlap = "femwave-mesh 1\nv 0 0\nv 2 0\nv 0 2\nv 1 1/2\nt 0 1 2\nt 0 1 3\n";
        assert!(matches!(load_mesh(overlap), Err(MeshError::Nonconforming(_))));
        let degenerate = "femwave-mesh 1\nv 0 0\nv 1 0\nv 2 0\nt 0 1 2\n";
        assert_eq!(load_mesh(degenerate), Err(MeshError::Degenerate { triangle: 0 }));
    }

    #[test]
    fn round_trip() {
        let l = l_shape();
        assert_eq!(load_mesh(&write_mesh(&l)).unwrap(), l);
    }
}
