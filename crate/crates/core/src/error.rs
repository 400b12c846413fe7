use thiserror::Error;

/// Errors raised while reading or validating a triangulation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeshError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mesh has no triangles")]
    Empty,
    #[error("triangle {triangle}: vertex index {index} out of range")]
    VertexIndex { triangle: usize, index: usize },
    #[error("triangle {triangle} is degenerate")]
    Degenerate { triangle: usize },
    #[error("vertex {vertex} is not used by any triangle")]
    DanglingVertex { vertex: usize },
    #[error("non-conforming mesh: {0}")]
    Nonconforming(String),
    #[error("dirichlet edge ({a}, {b}) on line {line} is not a boundary edge")]
    GammaEdge { line: usize, a: usize, b: usize },
}

/// Failures of the reference-element reconstruction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefError {
    #[error("basis change matrix is singular")]
    Singular,
    #[error("biorthogonality system for the dual collection is {0}")]
    DualSystem(&'static str),
    #[error("no node ordering reproduces the coefficient table")]
    NoOrdering,
    #[error("orderings disagree on the reconstructed collections")]
    AmbiguousOrdering,
    #[error("collection {collection} violates property {property}")]
    Property { collection: String, property: &'static str },
}

/// Errors of the global construction and the numerical back end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Reference(#[from] RefError),
    #[error("level {level} not available (hierarchy has {available})")]
    Level { level: usize, available: usize },
    #[error("collections live on different levels ({0} vs {1})")]
    LevelMismatch(usize, usize),
    #[error("size mismatch: expected {expected}, got {got}")]
    Size { expected: usize, got: usize },
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("biorthogonality check failed: {0}")]
    Biorthogonality(String),
    #[error("dense computation with {dofs} unknowns exceeds the limit of {limit}")]
    TooLarge { dofs: usize, limit: usize },
    #[error("level {level} exceeds the configured cap {cap}")]
    LevelCap { level: usize, cap: usize },
    #[error("eigen iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("linear algebra failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
