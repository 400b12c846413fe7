//! Operators, extreme eigenvalues and condition numbers of the wavelet bases.

mod condition;
pub mod dense;
mod lanczos;
mod operator;

pub use condition::{
    dense_matvec, dual_basis, dual_condition, format_kappa, lambda_min_check, normalized_dual_gram,
    symmetrized_reference_gram, wavelet_condition, ConditionReport, ConditionRow, DualBasis, Norm, WaveletOperator,
    DEFAULT_DUAL_CAP,
};
pub use lanczos::{lanczos_extremes, Extremes, LanczosOptions};
pub use operator::{
    assemble_operator, assemble_operator_with, linear_stiffness, BoundaryMode, OperatorKind, OperatorMatrix,
};
