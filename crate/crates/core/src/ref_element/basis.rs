use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::bary::BaryPoint;
use super::poly::{p1_basis, p2_basis, BaryPoly};
use crate::exact::RatMatrix;
use crate::scalar::{rat, Rational};

const fn q(a: u8, b: u8, c: u8) -> BaryPoint {
    BaryPoint::from_quarters([a, b, c])
}

/// The 15 nodes of the red-refined reference triangle in canonical order:
/// vertices, midpoints (the k-th opposite vertex k), the six edge quarter
/// points walking around the boundary, then the three interior points.
pub const REF_NODES: [BaryPoint; 15] = [
    q(4, 0, 0),
    q(0, 4, 0),
    q(0, 0, 4),
    q(0, 2, 2),
    q(2, 0, 2),
    q(2, 2, 0),
    q(0, 3, 1),
    q(0, 1, 3),
    q(1, 0, 3),
    q(3, 0, 1),
    q(3, 1, 0),
    q(1, 3, 0),
    q(2, 1, 1),
    q(1, 2, 1),
    q(1, 1, 2),
];

/// The red split as vertex triples into [`REF_NODES`]: child `i < 3` is the
/// corner triangle `λ_i ≥ 1/2`, child 3 the middle triangle.
pub const SUB_TRIANGLES: [[usize; 3]; 4] = [[0, 5, 4], [5, 1, 3], [4, 3, 2], [3, 4, 5]];

pub fn node_index(p: &BaryPoint) -> Option<usize> {
    REF_NODES.iter().position(|n| n == p)
}

/// Local quadratic nodes of child `s`: its vertices, then the midpoints
/// opposite each vertex.
pub fn sub_triangle_nodes(s: usize) -> [usize; 6] {
    let [a, b, c] = SUB_TRIANGLES[s];
    let mid = |x: usize, y: usize| node_index(&REF_NODES[x].midpoint(&REF_NODES[y]).unwrap()).unwrap();
    [a, b, c, mid(b, c), mid(a, c), mid(a, b)]
}

/// For each quarter-class node, the two vertices of the child edge it bisects.
pub fn quarter_parents() -> [(usize, usize); 9] {
    let mut out = [(0, 0); 9];
    for s in 0..4 {
        let local = sub_triangle_nodes(s);
        for (m, (x, y)) in [(3, (1, 2)), (4, (0, 2)), (5, (0, 1))] {
            if local[m] >= 6 {
                out[local[m] - 6] = (local[x], local[y]);
            }
        }
    }
    out
}

/// The nodal bases a reference function can be expanded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisTag {
    /// Quadratic Lagrange basis on the reference triangle.
    Quadratic,
    /// Continuous piecewise linears on the red split.
    SplitLinear,
    /// Continuous piecewise quadratics on the red split.
    SplitQuadratic,
}

impl BasisTag {
    pub fn nodes(&self) -> &'static [BaryPoint] {
        match self {
            BasisTag::SplitQuadratic => &REF_NODES,
            _ => &REF_NODES[..6],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            BasisTag::Quadratic => "N",
            BasisTag::SplitLinear => "Ñ",
            BasisTag::SplitQuadratic => "N_f",
        }
    }

    /// Values of each basis function at the 15 fine nodes (rows = functions).
    pub fn embedding(&self) -> &'static RatMatrix {
        static CELLS: [OnceLock<RatMatrix>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let slot = *self as usize;
        CELLS[slot].get_or_init(|| match self {
            BasisTag::SplitQuadratic => RatMatrix::identity(15),
            BasisTag::Quadratic => {
                let basis = p2_basis();
                RatMatrix::from_fn(6, 15, |i, k| basis[i].eval(&REF_NODES[k].lambda()))
            }
            BasisTag::SplitLinear => {
                let mut m = RatMatrix::zeros(6, 15);
                for k in 0..6 {
                    m[(k, k)] = Rational::one();
                }
                for (k, (a, b)) in quarter_parents().iter().enumerate() {
                    m[(*a, 6 + k)] = rat(1, 2);
                    m[(*b, 6 + k)] = rat(1, 2);
                }
                m
            }
        })
    }
}

/// Quadratic mass matrix of a triangle divided by its area.
pub fn p2_mass() -> &'static RatMatrix {
    static CELL: OnceLock<RatMatrix> = OnceLock::new();
    CELL.get_or_init(|| {
        let b = p2_basis();
        RatMatrix::from_fn(6, 6, |i, k| b[i].mul(&b[k]).mean())
    })
}

/// Linear mass matrix of a triangle divided by its area.
pub fn p1_mass() -> &'static RatMatrix {
    static CELL: OnceLock<RatMatrix> = OnceLock::new();
    CELL.get_or_init(|| {
        let b = p1_basis();
        RatMatrix::from_fn(3, 3, |i, k| b[i].mul(&b[k]).mean())
    })
}

/// Mean of `∂_i φ_a ∂_k φ_b` over the reference triangle for the quadratic
/// basis, indexed `[a][b][i][k]` with derivatives taken in barycentric
/// coordinates.
pub fn p2_gradient_tensor() -> &'static Vec<Vec<[[Rational; 3]; 3]>> {
    static CELL: OnceLock<Vec<Vec<[[Rational; 3]; 3]>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let b = p2_basis();
        let d: Vec<[BaryPoly; 3]> = b.iter().map(|p| [p.derivative(0), p.derivative(1), p.derivative(2)]).collect();
        (0..6)
            .map(|a| {
                (0..6).map(|c| std::array::from_fn(|i| std::array::from_fn(|k| d[a][i].mul(&d[c][k]).mean()))).collect()
            })
            .collect()
    })
}

/// Mass matrix of the fine quadratic basis on the red split divided by the
/// area of the reference triangle.
pub fn fine_mass() -> &'static RatMatrix {
    static CELL: OnceLock<RatMatrix> = OnceLock::new();
    CELL.get_or_init(|| {
        let local = p2_mass();
        let quarter = rat(1, 4);
        let mut g = RatMatrix::zeros(15, 15);
        for s in 0..4 {
            let nodes = sub_triangle_nodes(s);
            for (a, &na) in nodes.iter().enumerate() {
                for (b, &nb) in nodes.iter().enumerate() {
                    let v = &local[(a, b)] * &quarter;
                    if !v.is_zero() {
                        g[(na, nb)] += v;
                    }
                }
            }
        }
        g
    })
}
