//! Reconstruction of the two-scale collections from their coefficient table.

use num_traits::Zero;

use super::bary::{BaryPoint, NodeClass, Perm3};
use super::basis::{fine_mass, BasisTag, REF_NODES};
use super::collection::{gram, may_touch, CollectionId, LocalCollection, RefFunction};
use crate::error::RefError;
use crate::exact::RatMatrix;
use crate::scalar::{int, rat, Rational};

/// Coefficients of the quadratic two-scale collection over the fine nodal
/// basis in the canonical node numbering: entry `(r, k)` is the value of
/// function `k` at node `r`. Functions 0..6 form the coarse part, 6..15 the
/// complement.
pub fn basis_change_table() -> RatMatrix {
    const ROWS: [&str; 15] = [
        "v 0 0 0 0 0 0 0 0 0 0 0 0 0 0",
        "0 v 0 0 0 0 0 0 0 0 0 0 0 0 0",
        "0 0 v 0 0 0 0 0 0 0 0 0 0 0 0",
        "0 0 0 a 0 0 d d 0 0 0 0 0 0 0",
        "0 0 0 0 a 0 0 0 d d 0 0 0 0 0",
        "0 0 0 0 0 a 0 0 0 0 d d 0 0 0",
        "0 s 0 b 0 0 1 e 0 0 0 0 0 0 0",
        "0 0 s b 0 0 e 1 0 0 0 0 0 0 0",
        "0 0 s 0 b 0 0 0 1 e 0 0 0 0 0",
        "s 0 0 0 b 0 0 0 e 1 0 0 0 0 0",
        "s 0 0 0 0 b 0 0 0 0 1 e 0 0 0",
        "0 s 0 0 0 b 0 0 0 0 e 1 0 0 0",
        "0 0 0 0 c c 0 0 g f f g w 1 1",
        "0 0 0 c 0 c f g 0 0 g f 1 w 1",
        "0 0 0 c c 0 g f f g 0 0 1 1 w",
    ];
    let value = |sym: &str| match sym {
        "0" => int(0),
        "1" => int(1),
        "v" => int(72),
        "s" => int(6),
        "a" => rat(1560, 81),
        "b" => rat(530, 81),
        "c" => rat(50, 81),
        "d" => rat(-12, 25),
        "e" => rat(-2, 25),
        "f" => rat(-8, 25),
        "g" => rat(1, 25),
        "w" => rat(-5, 4),
        _ => unreachable!(),
    };
    RatMatrix::from_rows(ROWS.iter().map(|r| r.split(' ').map(value).collect()).collect())
}

/// How the table is read: which axis enumerates functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    ColumnsAreFunctions,
    RowsAreFunctions,
}

/// An assignment of table positions to reference nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ordering {
    pub reading: Reading,
    /// `nodes[i]` is the index into [`REF_NODES`] of table position `i`.
    pub nodes: [usize; 15],
}

impl Ordering {
    /// Value of the function at table position `k` at the node of table position `r`.
    fn entry<'a>(&self, table: &'a RatMatrix, k: usize, r: usize) -> &'a Rational {
        match self.reading {
            Reading::ColumnsAreFunctions => &table[(r, k)],
            Reading::RowsAreFunctions => &table[(k, r)],
        }
    }
}

/// Counts of candidate orderings surviving each validation stage.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub candidates: usize,
    pub vanishing: usize,
    pub symmetry: usize,
    pub biorthogonal: usize,
    pub printed_values: usize,
}

/// Output of the ordering search.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub theta: LocalCollection,
    pub xi: LocalCollection,
    pub phi_tilde: LocalCollection,
    /// Free parameters of the dual collection, one per symmetry orbit.
    pub phi_parameters: Vec<(String, Rational)>,
    pub accepted: Vec<Ordering>,
    pub stats: SearchStats,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn candidate_orderings() -> Vec<Ordering> {
    let blocks: [Vec<Vec<usize>>; 4] = [
        permutations(&[0, 1, 2]),
        permutations(&[3, 4, 5]),
        permutations(&[6, 7, 8, 9, 10, 11]),
        permutations(&[12, 13, 14]),
    ];
    let mut out = Vec::new();
    for reading in [Reading::ColumnsAreFunctions, Reading::RowsAreFunctions] {
        for v in &blocks[0] {
            for m in &blocks[1] {
                for q in &blocks[2] {
                    for i in &blocks[3] {
                        let mut nodes = [0; 15];
                        for (slot, n) in nodes.iter_mut().zip(v.iter().chain(m).chain(q).chain(i)) {
                            *slot = *n;
                        }
                        out.push(Ordering { reading, nodes });
                    }
                }
            }
        }
    }
    out
}

/// Splits the table into the coarse and complement collections under an ordering.
pub fn collections_for(table: &RatMatrix, ordering: &Ordering) -> (LocalCollection, LocalCollection) {
    let mut by_node: Vec<Option<RefFunction>> = vec![None; 15];
    for k in 0..15 {
        let mut coeffs = vec![Rational::zero(); 15];
        for r in 0..15 {
            coeffs[ordering.nodes[r]] = ordering.entry(table, k, r).clone();
        }
        by_node[ordering.nodes[k]] = Some(RefFunction::new(BasisTag::SplitQuadratic, coeffs));
    }
    let funcs: Vec<RefFunction> = by_node.into_iter().map(|f| f.expect("ordering is a bijection")).collect();
    let theta = LocalCollection::new(
        CollectionId::Theta,
        BasisTag::SplitQuadratic,
        REF_NODES[..6].to_vec(),
        funcs[..6].to_vec(),
    );
    let xi =
        LocalCollection::new(CollectionId::Xi, BasisTag::SplitQuadratic, REF_NODES[6..].to_vec(), funcs[6..].to_vec());
    (theta, xi)
}

/// Orbits of admissible (function, node) pairs under the coordinate
/// permutations: each orbit carries one free coefficient of a collection
/// with the vanishing and symmetry properties.
pub fn symmetric_orbits(index: &[BaryPoint], basis: BasisTag) -> Vec<Vec<(usize, usize)>> {
    let nodes = basis.nodes();
    let mut seen = vec![vec![false; nodes.len()]; index.len()];
    let mut orbits = Vec::new();
    for (i, x) in index.iter().enumerate() {
        for (k, n) in nodes.iter().enumerate() {
            if seen[i][k] || !may_touch(x, n) {
                continue;
            }
            let mut orbit = Vec::new();
            for p in Perm3::ALL {
                let pi = index.iter().position(|y| *y == x.permute(p)).expect("index set closed under symmetry");
                let pk = nodes.iter().position(|m| *m == n.permute(p)).expect("node set closed under symmetry");
                if !seen[pi][pk] {
                    seen[pi][pk] = true;
                    orbit.push((pi, pk));
                }
            }
            orbits.push(orbit);
        }
    }
    orbits
}

/// Solves for the dual collection in the piecewise linear space from
/// biorthogonality against `theta`.
pub fn derive_phi_tilde(theta: &LocalCollection) -> Result<(LocalCollection, Vec<(String, Rational)>), RefError> {
    let basis = BasisTag::SplitLinear;
    let index: Vec<BaryPoint> = theta.index.clone();
    let orbits = symmetric_orbits(&index, basis);
    let n = index.len();
    let theta_fine = theta.fine_matrix().mul(fine_mass());
    let emb = basis.embedding();
    // column o of the system: <θ_i, (orbit o restricted to function j)>
    let mut system = RatMatrix::zeros(n * n, orbits.len());
    for (o, orbit) in orbits.iter().enumerate() {
        for &(j, k) in orbit {
            for i in 0..n {
                let mut v = Rational::zero();
                for m in 0..15 {
                    if !emb[(k, m)].is_zero() {
                        v += &theta_fine[(i, m)] * &emb[(k, m)];
                    }
                }
                system[(i * n + j, o)] += v;
            }
        }
    }
    let rhs: Vec<Rational> = (0..n * n).map(|r| int((r / n == r % n) as i64)).collect();
    let params = system
        .solve(&rhs)
        .map_err(|inconsistent| RefError::DualSystem(if inconsistent { "inconsistent" } else { "underdetermined" }))?;
    let mut coeffs = vec![vec![Rational::zero(); basis.len()]; n];
    for (orbit, p) in orbits.iter().zip(&params) {
        for &(j, k) in orbit {
            coeffs[j][k] = p.clone();
        }
    }
    let functions = coeffs.into_iter().map(|c| RefFunction::new(basis, c)).collect();
    let phi = LocalCollection::new(CollectionId::PhiTilde, basis, index.clone(), functions);
    let labels = orbits
        .iter()
        .zip(params)
        .map(|(orbit, p)| {
            let (j, k) = orbit[0];
            (format!("φ̃_{} at {}", index[j], basis.nodes()[k]), p)
        })
        .collect();
    Ok((phi, labels))
}

/// Inner products of the complement functions against the dual functions:
/// an edge-type function meets only the vertex nearest to it (3/100), an
/// interior function meets its nearest vertex (−1/48) and the opposite
/// midpoint (27/240), everything else vanishes.
pub fn expected_cross_gram(xi: &BaryPoint, phi: &BaryPoint) -> Rational {
    let xq = xi.quarters();
    let pq = phi.quarters();
    match (xi.on_boundary(), phi.class()) {
        (true, NodeClass::Vertex) if (0..3).any(|i| xq[i] == 3 && pq[i] == 4) => rat(3, 100),
        (false, NodeClass::Vertex) if (0..3).any(|i| xq[i] == 2 && pq[i] == 4) => rat(-1, 48),
        (false, NodeClass::Midpoint) if (0..3).any(|i| xq[i] == 2 && pq[i] == 0) => rat(27, 240),
        _ => Rational::zero(),
    }
}

fn matches_printed_values(xi: &LocalCollection, phi: &LocalCollection) -> bool {
    let g = gram(xi, phi);
    g.row_index
        .iter()
        .enumerate()
        .all(|(i, x)| g.col_index.iter().enumerate().all(|(j, p)| g.entries[(i, j)] == expected_cross_gram(x, p)))
}

/// An accepted ordering with its collections and dual parameters.
type Candidate = (Ordering, LocalCollection, LocalCollection, LocalCollection, Vec<(String, Rational)>);

/// Searches all symmetry-compatible orderings of the table and returns the
/// unique set of collections satisfying every constraint.
pub fn reconstruct() -> Result<Reconstruction, RefError> {
    let table = basis_change_table();
    if table.determinant().is_zero() {
        return Err(RefError::Singular);
    }
    let allowed: Vec<u16> = REF_NODES
        .iter()
        .map(|x| REF_NODES.iter().enumerate().filter(|(_, n)| may_touch(x, n)).fold(0u16, |m, (k, _)| m | 1 << k))
        .collect();
    let support = |reading: Reading| -> Vec<u16> {
        (0..15)
            .map(|k| {
                (0..15).fold(0u16, |m, r| {
                    let v = match reading {
                        Reading::ColumnsAreFunctions => &table[(r, k)],
                        Reading::RowsAreFunctions => &table[(k, r)],
                    };
                    if v.is_zero() {
                        m
                    } else {
                        m | 1 << r
                    }
                })
            })
            .collect()
    };
    let supports = [support(Reading::ColumnsAreFunctions), support(Reading::RowsAreFunctions)];

    let mut stats = SearchStats::default();
    let mut found: Vec<Candidate> = Vec::new();
    for ord in candidate_orderings() {
        stats.candidates += 1;
        let sup = &supports[(ord.reading == Reading::RowsAreFunctions) as usize];
        let ok = (0..15).all(|k| {
            let mut mapped = 0u16;
            for r in 0..15 {
                if sup[k] >> r & 1 == 1 {
                    mapped |= 1 << ord.nodes[r];
                }
            }
            mapped & !allowed[ord.nodes[k]] == 0
        });
        if !ok {
            continue;
        }
        stats.vanishing += 1;
        let (theta, xi) = collections_for(&table, &ord);
        if !theta.satisfies_symmetry() || !xi.satisfies_symmetry() {
            continue;
        }
        stats.symmetry += 1;
        let Ok((phi, params)) = derive_phi_tilde(&theta) else { continue };
        if !gram(&theta, &phi).entries.is_identity() || !phi.satisfies_vanishing() || !phi.satisfies_symmetry() {
            continue;
        }
        stats.biorthogonal += 1;
        if !matches_printed_values(&xi, &phi) {
            continue;
        }
        stats.printed_values += 1;
        found.push((ord, theta, xi, phi, params));
    }
    let Some((_, theta, xi, phi, params)) = found.first().cloned() else {
        return Err(RefError::NoOrdering);
    };
    if found.iter().any(|(_, t, x, p, _)| *t != theta || *x != xi || *p != phi) {
        return Err(RefError::AmbiguousOrdering);
    }
    theta.verify()?;
    xi.verify()?;
    phi.verify()?;
    Ok(Reconstruction {
        theta,
        xi,
        phi_tilde: phi,
        phi_parameters: params,
        accepted: found.into_iter().map(|f| f.0).collect(),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_invertible() {
        assert!(!basis_change_table().determinant().is_zero());
    }

    #[test]
    fn dual_collection_has_three_orbits() {
        assert_eq!(symmetric_orbits(&REF_NODES[..6], BasisTag::SplitLinear).len(), 3);
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(&[0, 1, 2, 3]).len(), 24);
        assert_eq!(candidate_orderings().len(), 2 * 6 * 6 * 720 * 6);
    }
}
