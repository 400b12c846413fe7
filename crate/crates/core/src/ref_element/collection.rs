use num_traits::Zero;

use super::bary::{BaryPoint, Perm3};
use super::basis::{fine_mass, BasisTag};
use crate::error::RefError;
use crate::exact::RatMatrix;
use crate::scalar::Rational;

/// Names of the reference collections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollectionId {
    N,
    NTilde,
    NFine,
    Theta,
    Xi,
    PhiTilde,
    ThetaXi,
}

impl CollectionId {
    pub fn symbol(&self) -> &'static str {
        match self {
            CollectionId::N => "N",
            CollectionId::NTilde => "Ñ",
            CollectionId::NFine => "N_f",
            CollectionId::Theta => "Θ",
            CollectionId::Xi => "Ξ",
            CollectionId::PhiTilde => "Φ̃",
            CollectionId::ThetaXi => "Θ∪Ξ",
        }
    }
}

/// A function on the reference triangle given by nodal coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RefFunction {
    pub basis: BasisTag,
    pub coeffs: Vec<Rational>,
}

impl RefFunction {
    pub fn new(basis: BasisTag, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), basis.len(), "coefficient count does not match the basis");
        Self { basis, coeffs }
    }

    /// Coefficient at a node of the basis.
    pub fn coeff_at(&self, node: &BaryPoint) -> Option<&Rational> {
        self.basis.nodes().iter().position(|n| n == node).map(|k| &self.coeffs[k])
    }

    /// Values at all 15 fine nodes, i.e. the expansion in the fine basis.
    pub fn fine_values(&self) -> Vec<Rational> {
        let e = self.basis.embedding();
        (0..15)
            .map(|k| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .fold(Rational::zero(), |acc, (i, c)| acc + c * &e[(i, k)])
            })
            .collect()
    }

    pub fn nonzeros(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// `f ∘ p`, expressed in the same basis.
pub fn apply_symmetry(f: &RefFunction, p: Perm3) -> RefFunction {
    let nodes = f.basis.nodes();
    let coeffs =
        nodes.iter().map(|n| f.coeff_at(&n.permute(p)).expect("node set closed under symmetry").clone()).collect();
    RefFunction::new(f.basis, coeffs)
}

/// Whether a function indexed by `index` may be nonzero at `node` without
/// violating the vanishing property on edges and vertices away from `index`.
pub fn may_touch(index: &BaryPoint, node: &BaryPoint) -> bool {
    let iq = index.quarters();
    let nq = node.quarters();
    if (0..3).any(|i| iq[i] != 0 && nq[i] == 0) {
        return false;
    }
    node.class() != super::bary::NodeClass::Vertex || node == index
}

/// Functions on the reference triangle labelled by reference points.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCollection {
    pub id: CollectionId,
    pub basis: BasisTag,
    pub index: Vec<BaryPoint>,
    pub functions: Vec<RefFunction>,
}

impl LocalCollection {
    pub fn new(id: CollectionId, basis: BasisTag, index: Vec<BaryPoint>, functions: Vec<RefFunction>) -> Self {
        assert_eq!(index.len(), functions.len());
        assert!(functions.iter().all(|f| f.basis == basis));
        Self { id, basis, index, functions }
    }

    /// The nodal basis itself, indexed by its nodes.
    pub fn nodal(id: CollectionId, basis: BasisTag) -> Self {
        let n = basis.len();
        let functions = (0..n)
            .map(|i| RefFunction::new(basis, (0..n).map(|k| Rational::from_integer((i == k).into())).collect()))
            .collect();
        Self::new(id, basis, basis.nodes().to_vec(), functions)
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn position(&self, p: &BaryPoint) -> Option<usize> {
        self.index.iter().position(|x| x == p)
    }

    pub fn get(&self, p: &BaryPoint) -> Option<&RefFunction> {
        self.position(p).map(|i| &self.functions[i])
    }

    /// Coefficients as rows over the collection's basis.
    pub fn coefficient_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(self.functions.iter().map(|f| f.coeffs.clone()).collect())
    }

    /// Coefficients as rows over the fine basis.
    pub fn fine_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(self.functions.iter().map(RefFunction::fine_values).collect())
    }

    /// Disjoint union, re-expressed in a common basis when needed.
    pub fn union(id: CollectionId, a: &Self, b: &Self) -> Self {
        let lift = |c: &Self| -> Vec<RefFunction> {
            if a.basis == b.basis {
                c.functions.clone()
            } else {
                c.functions.iter().map(|f| RefFunction::new(BasisTag::SplitQuadratic, f.fine_values())).collect()
            }
        };
        let basis = if a.basis == b.basis { a.basis } else { BasisTag::SplitQuadratic };
        let index = a.index.iter().chain(&b.index).copied().collect();
        let functions = lift(a).into_iter().chain(lift(b)).collect();
        Self::new(id, basis, index, functions)
    }

    pub fn satisfies_vanishing(&self) -> bool {
        let nodes = self.basis.nodes();
        self.index
            .iter()
            .zip(&self.functions)
            .all(|(p, f)| nodes.iter().zip(&f.coeffs).all(|(n, c)| c.is_zero() || may_touch(p, n)))
    }

    pub fn satisfies_symmetry(&self) -> bool {
        Perm3::ALL.iter().all(|&p| {
            self.index.iter().zip(&self.functions).all(|(x, f)| match self.get(&x.permute(p)) {
                None => false,
                Some(g) => self.basis.nodes().iter().zip(&f.coeffs).all(|(n, c)| g.coeff_at(&n.permute(p)) == Some(c)),
            })
        })
    }

    pub fn satisfies_independence(&self) -> bool {
        self.coefficient_matrix().rank() == self.len()
    }

    /// Checks the vanishing, symmetry and independence properties.
    pub fn verify(&self) -> Result<(), RefError> {
        let fail = |property| Err(RefError::Property { collection: self.id.symbol().to_string(), property });
        if !self.satisfies_vanishing() {
            return fail("vanishing");
        }
        if !self.satisfies_symmetry() {
            return fail("symmetry");
        }
        if !self.satisfies_independence() {
            return fail("independence");
        }
        Ok(())
    }
}

/// Exact `L2` inner products of two reference collections divided by the
/// area of the reference triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct RefGram {
    pub rows: CollectionId,
    pub cols: CollectionId,
    pub row_index: Vec<BaryPoint>,
    pub col_index: Vec<BaryPoint>,
    pub entries: RatMatrix,
}

impl RefGram {
    pub fn entry(&self, row: &BaryPoint, col: &BaryPoint) -> Option<&Rational> {
        let i = self.row_index.iter().position(|x| x == row)?;
        let j = self.col_index.iter().position(|x| x == col)?;
        Some(&self.entries[(i, j)])
    }

    /// Invariance under simultaneous permutation of both index sets.
    pub fn is_symmetry_invariant(&self) -> bool {
        Perm3::ALL.iter().all(|&p| {
            self.row_index.iter().enumerate().all(|(i, r)| {
                self.col_index
                    .iter()
                    .enumerate()
                    .all(|(j, c)| self.entry(&r.permute(p), &c.permute(p)) == Some(&self.entries[(i, j)]))
            })
        })
    }
}

pub fn gram(a: &LocalCollection, b: &LocalCollection) -> RefGram {
    let fa = a.fine_matrix();
    let fb = b.fine_matrix();
    let entries = fa.mul(fine_mass()).mul(&fb.transpose());
    RefGram { rows: a.id, cols: b.id, row_index: a.index.clone(), col_index: b.index.clone(), entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ref_element::basis::REF_NODES;

    #[test]
    fn nodal_collections_have_all_properties() {
        for (id, tag) in [
            (CollectionId::N, BasisTag::Quadratic),
            (CollectionId::NTilde, BasisTag::SplitLinear),
            (CollectionId::NFine, BasisTag::SplitQuadratic),
        ] {
            LocalCollection::nodal(id, tag).verify().unwrap();
        }
    }

    #[test]
    fn symmetry_action_is_involutive() {
        let n = LocalCollection::nodal(CollectionId::NFine, BasisTag::SplitQuadratic);
        let t = Perm3([1, 0, 2]);
        for f in &n.functions {
            assert_eq!(&apply_symmetry(&apply_symmetry(f, t), t), f);
            assert_eq!(&apply_symmetry(f, Perm3::IDENTITY), f);
        }
    }

    #[test]
    fn vanishing_rule() {
        let v = REF_NODES[0];
        assert!(may_touch(&v, &v));
        assert!(!may_touch(&v, &REF_NODES[1]));
        assert!(may_touch(&v, &REF_NODES[5]));
        assert!(!may_touch(&v, &REF_NODES[3]));
        assert!(!may_touch(&REF_NODES[12], &REF_NODES[9]));
        assert!(may_touch(&REF_NODES[9], &REF_NODES[12]));
    }
}
