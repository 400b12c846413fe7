//! Wavelet construction and multilevel transforms.

mod angles;
mod build;
mod transform;

pub use angles::{angle_constants, AngleConstants, LevelScaling};
pub use build::{
    build_wavelets, correction_counts, two_scale_collections, TwoScaleCollections, WaveletKind, WaveletLevel,
};
pub use transform::{
    conjugate_gradient, dual_synthesis_matrix, dual_two_level, primal_dual_gram, DualTwoLevelTransform,
    MultilevelTransform, TwoLevelTransform,
};
