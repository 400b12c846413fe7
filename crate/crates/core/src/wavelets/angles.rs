use faer::Mat;

use super::build::{build_wavelets, two_scale_collections};
use crate::assembly::global_gram;
use crate::error::{Error, Result};
use crate::fe::{assemble_form, DofMap, Form, Space};
use crate::mesh::MeshHierarchy;
use crate::scalar::to_f64;
use crate::sparse::SparseMatrix;
use crate::spectral::dense;

/// Stability constants of the two-scale construction on one level.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleConstants {
    pub level: usize,
    /// Inf-sup constant between `span Θ_j` and the dual space.
    pub delta: f64,
    /// Cosine of the smallest angle between `span Θ_j` and `span Ξ_{j+1}`.
    pub epsilon: f64,
    pub kappa_xi: f64,
    pub kappa_psi: f64,
    /// `(1 + δ⁻¹) / sqrt(1 − ε) · κ(Ξ)`.
    pub bound: f64,
}

pub fn angle_constants(h: &MeshHierarchy, j: usize, limit: usize) -> Result<AngleConstants> {
    let c = two_scale_collections::<f64>(h, j)?;
    dense::check_size(c.theta.len() + c.xi.len(), limit)?;
    let g = |a, b| -> Result<Mat<f64>> { Ok(dense::dense(&global_gram(h, a, b)?.scaled())) };
    let tt = g(&c.theta, &c.theta)?;
    let xx = g(&c.xi, &c.xi)?;
    let pp = g(&c.phi_tilde, &c.phi_tilde)?;
    let tx = g(&c.theta, &c.xi)?;
    let tp = g(&c.theta, &c.phi_tilde)?;
    let delta =
        *dense::principal_cosines(&tt, &tp, &pp)?.last().ok_or_else(|| Error::Singular("empty level".into()))?;
    let epsilon = dense::principal_cosines(&tt, &tx, &xx)?.first().copied().unwrap_or(0.0);
    let kappa_xi = dense::condition(&xx)?;
    let w = build_wavelets::<f64>(h, j + 1)?;
    let mu: Vec<f64> = w.scale_sq.iter().map(|m| to_f64(m).sqrt()).collect();
    let psi = SparseMatrix::from_triplets(
        w.columns.nrows(),
        w.columns.ncols(),
        w.columns.triplets().map(|(r, k, v)| (r, k, v * mu[k])).collect(),
    );
    let space = Space::primal(j + 1);
    let mass: SparseMatrix<f64> = assemble_form(h, space, Form::Mass, &DofMap::of_space(h, space));
    let gpsi = dense::dense(&psi.transpose().mul(&mass).mul(&psi));
    let kappa_psi = dense::condition(&gpsi)?;
    let bound = (1.0 + 1.0 / delta) / (1.0 - epsilon).sqrt() * kappa_xi;
    Ok(AngleConstants { level: j, delta, epsilon, kappa_xi, kappa_psi, bound })
}

/// Level weights `2^{-j s}` of a Sobolev scale.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelScaling {
    pub s: f64,
    pub factors: Vec<f64>,
}

impl LevelScaling {
    pub fn new(s: f64, levels: usize) -> Result<Self> {
        if !(s > -1.5 && s < 1.5) {
            return Err(Error::Numerical(format!("smoothness index {s} outside (-3/2, 3/2)")));
        }
        Ok(Self { s, factors: (0..levels).map(|j| (-(j as f64) * s).exp2()).collect() })
    }
}
