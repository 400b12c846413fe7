//! Reference-triangle data: node sets, local collections and their exact
//! inner products.

mod bary;
mod basis;
mod collection;
mod poly;
mod report;
mod tables;

use std::sync::OnceLock;

pub use bary::{BaryPoint, NodeClass, Perm3};
pub use basis::{
    fine_mass, node_index, p1_mass, p2_gradient_tensor, p2_mass, quarter_parents, sub_triangle_nodes, BasisTag,
    REF_NODES, SUB_TRIANGLES,
};
pub use collection::{apply_symmetry, gram, may_touch, CollectionId, LocalCollection, RefFunction, RefGram};
pub use poly::{integrate_monomial, p1_basis, p2_basis, BaryPoly};
pub use report::ref_report;
pub use tables::{
    basis_change_table, collections_for, derive_phi_tilde, expected_cross_gram, reconstruct, symmetric_orbits,
    Ordering, Reading, Reconstruction, SearchStats,
};

use crate::error::RefError;

/// All reference collections, built once and shared.
#[derive(Clone, Debug)]
pub struct Reference {
    pub n: LocalCollection,
    pub n_tilde: LocalCollection,
    pub n_fine: LocalCollection,
    pub theta: LocalCollection,
    pub xi: LocalCollection,
    pub phi_tilde: LocalCollection,
    pub theta_xi: LocalCollection,
    pub reconstruction: Reconstruction,
}

impl Reference {
    pub fn build() -> Result<Self, RefError> {
        let rec = reconstruct()?;
        let n = LocalCollection::nodal(CollectionId::N, BasisTag::Quadratic);
        let n_tilde = LocalCollection::nodal(CollectionId::NTilde, BasisTag::SplitLinear);
        let n_fine = LocalCollection::nodal(CollectionId::NFine, BasisTag::SplitQuadratic);
        let theta_xi = LocalCollection::union(CollectionId::ThetaXi, &rec.theta, &rec.xi);
        if !theta_xi.satisfies_independence() {
            return Err(RefError::Singular);
        }
        Ok(Self {
            n,
            n_tilde,
            n_fine,
            theta: rec.theta.clone(),
            xi: rec.xi.clone(),
            phi_tilde: rec.phi_tilde.clone(),
            theta_xi,
            reconstruction: rec,
        })
    }

    pub fn collection(&self, id: CollectionId) -> &LocalCollection {
        match id {
            CollectionId::N => &self.n,
            CollectionId::NTilde => &self.n_tilde,
            CollectionId::NFine => &self.n_fine,
            CollectionId::Theta => &self.theta,
            CollectionId::Xi => &self.xi,
            CollectionId::PhiTilde => &self.phi_tilde,
            CollectionId::ThetaXi => &self.theta_xi,
        }
    }
}

/// The shared reference data. Panics if the reconstruction is inconsistent,
/// which would indicate a corrupted coefficient table.
pub fn reference() -> &'static Reference {
    static CELL: OnceLock<Reference> = OnceLock::new();
    CELL.get_or_init(|| Reference::build().expect("reference element reconstruction failed"))
}

/// The coarse and complement two-scale collections.
pub fn build_theta_xi() -> Result<(LocalCollection, LocalCollection), RefError> {
    let rec = reconstruct()?;
    Ok((rec.theta, rec.xi))
}

/// The piecewise linear collection biorthogonal to `theta`.
pub fn build_phi_tilde(theta: &LocalCollection) -> Result<LocalCollection, RefError> {
    let (phi, _) = derive_phi_tilde(theta)?;
    phi.verify()?;
    Ok(phi)
}
