//! Continuous piecewise quadratic finite element wavelets on red-refined
//! triangulations.

pub mod assembly;
pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod fe;
pub mod mesh;
pub mod ref_element;
pub mod scalar;
pub mod sparse;
pub mod spectral;
pub mod wavelets;

pub use error::{Error, MeshError, RefError, Result};
pub use scalar::{rat, Rational, Scalar};
pub use sparse::SparseMatrix;

/// Number of threads used by dense linear algebra; `0` or `1` runs sequentially.
pub fn set_threads(n: usize) {
    faer::set_global_parallelism(if n <= 1 { faer::Par::Seq } else { faer::Par::rayon(n) });
}
