use crate::fe::{assemble_form, DofMap, Form, Space};
use crate::mesh::MeshHierarchy;
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// Bilinear form of a global operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Mass,
    Stiffness,
}

impl OperatorKind {
    fn form(self) -> Form {
        match self {
            OperatorKind::Mass => Form::Mass,
            OperatorKind::Stiffness => Form::Stiffness,
        }
    }
}

/// Treatment of the Dirichlet edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryMode {
    /// Dofs on the Dirichlet edges are removed.
    Dirichlet,
    /// All dofs are kept; the stiffness matrix is then only semidefinite.
    Neumann,
}

/// Quadratic Lagrange mass or stiffness matrix on one mesh level.
#[derive(Clone, Debug)]
pub struct OperatorMatrix<S> {
    pub kind: OperatorKind,
    pub level: usize,
    pub mode: BoundaryMode,
    pub dofs: DofMap,
    pub matrix: SparseMatrix<S>,
}

pub fn assemble_operator<S: Scalar>(h: &MeshHierarchy, level: usize, kind: OperatorKind) -> OperatorMatrix<S> {
    assemble_operator_with(h, level, kind, BoundaryMode::Dirichlet)
}

pub fn assemble_operator_with<S: Scalar>(
    h: &MeshHierarchy,
    level: usize,
    kind: OperatorKind,
    mode: BoundaryMode,
) -> OperatorMatrix<S> {
    let space = Space::primal(level);
    let dofs = match mode {
        BoundaryMode::Dirichlet => DofMap::of_space(h, space),
        BoundaryMode::Neumann => DofMap::all(h, space.vertex_level()),
    };
    let matrix = assemble_form(h, space, kind.form(), &dofs);
    OperatorMatrix { kind, level, mode, dofs, matrix }
}

/// Stiffness matrix of the piecewise linears on `T_level`.
pub fn linear_stiffness(h: &MeshHierarchy, level: usize) -> SparseMatrix<f64> {
    let space = Space { kind: crate::fe::SpaceKind::Linear, mesh_level: level };
    assemble_form(h, space, Form::Stiffness, &DofMap::of_space(h, space))
}
