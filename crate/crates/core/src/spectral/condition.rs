use std::fmt::{self, Write as _};
use std::str::FromStr;

use faer::linalg::solvers::Solve;
use faer::Mat;

use super::dense::{self, MAX_DENSE_DOFS};
use super::lanczos::{lanczos_extremes, Extremes, LanczosOptions};
use super::operator::{assemble_operator, linear_stiffness, OperatorKind};
use crate::error::{Error, Result};
use crate::exact::RatMatrix;
use crate::mesh::MeshHierarchy;
use crate::ref_element::{gram, reference};
use crate::sparse::SparseMatrix;
use crate::wavelets::{build_wavelets, dual_synthesis_matrix, primal_dual_gram, MultilevelTransform, WaveletLevel};

/// Norm in which a basis is normalized and its condition measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    L2,
    H1,
    /// `H¹` seminorm of the dual wavelets.
    H1Dual,
}

impl Norm {
    pub fn name(self) -> &'static str {
        match self {
            Norm::L2 => "l2",
            Norm::H1 => "h1",
            Norm::H1Dual => "h1dual",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "l2" => Ok(Norm::L2),
            "h1" => Ok(Norm::H1),
            "h1dual" | "h1-dual" => Ok(Norm::H1Dual),
            _ => Err(format!("unknown norm `{s}` (expected l2, h1 or h1dual)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionRow {
    pub level: usize,
    pub dofs: usize,
    pub kappa: f64,
    pub extremes: Extremes,
    /// Largest deviation from biorthogonality of the normalized primal and
    /// dual bases (dual path only).
    pub biorthogonality: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub norm: Norm,
    pub rows: Vec<ConditionRow>,
}

/// Two significant digits, as in the published tables.
pub fn format_kappa(k: f64) -> String {
    if !k.is_finite() || k <= 0.0 {
        return format!("{k}");
    }
    let digits = (1 - k.log10().floor() as i32).max(0) as usize;
    format!("{k:.digits$}")
}

impl ConditionReport {
    pub fn kappas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.kappa).collect()
    }

    /// CSV with header `J,kappa,lambda_min,lambda_max,iters`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("J,kappa,lambda_min,lambda_max,iters\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{:.10e},{:.10e},{}",
                r.level,
                format_kappa(r.kappa),
                r.extremes.lambda_min,
                r.extremes.lambda_max,
                r.extremes.iterations
            );
        }
        s
    }
}

fn operator_kind(norm: Norm) -> OperatorKind {
    match norm {
        Norm::L2 => OperatorKind::Mass,
        Norm::H1 | Norm::H1Dual => OperatorKind::Stiffness,
    }
}

/// Diagonal of `Ψ_lᵀ A_l Ψ_l` with `A_l` the operator on the wavelets' own level.
fn level_diagonal(w: &WaveletLevel<f64>, a: &SparseMatrix<f64>) -> Vec<f64> {
    w.column_entries()
        .iter()
        .map(|col| {
            col.iter()
                .map(|(i, ci)| {
                    let (idx, vals) = a.row(*i);
                    let ai: f64 = idx
                        .iter()
                        .zip(vals)
                        .filter_map(|(k, v)| col.iter().find(|(r, _)| r == k).map(|(_, ck)| v * ck))
                        .sum();
                    ci * ai
                })
                .sum()
        })
        .collect()
}

/// The normalized wavelet Gram matrix `D Wᵀ A W D` as a matrix-free operator.
#[derive(Clone, Debug)]
pub struct WaveletOperator {
    pub transform: MultilevelTransform,
    pub operator: SparseMatrix<f64>,
    /// Entries of `D`.
    pub scale: Vec<f64>,
}

impl WaveletOperator {
    pub fn new(h: &MeshHierarchy, finest: usize, norm: Norm) -> Result<Self> {
        if norm == Norm::H1Dual {
            return Err(Error::Numerical("dual norm has no matrix-free operator".into()));
        }
        h.require(finest + 1)?;
        let levels = (0..=finest).map(|l| build_wavelets::<f64>(h, l)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_levels(h, levels, norm))
    }

    fn from_levels(h: &MeshHierarchy, levels: Vec<WaveletLevel<f64>>, norm: Norm) -> Self {
        let kind = operator_kind(norm);
        let mut scale = Vec::new();
        for w in &levels {
            let a = assemble_operator::<f64>(h, w.level, kind).matrix;
            scale.extend(level_diagonal(w, &a).into_iter().map(|d| 1.0 / d.sqrt()));
        }
        let finest = levels.len() - 1;
        let operator = assemble_operator::<f64>(h, finest, kind).matrix;
        Self { transform: MultilevelTransform::from_levels(h, levels), operator, scale }
    }

    pub fn len(&self) -> usize {
        self.scale.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scale.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let y: Vec<f64> = x.iter().zip(&self.scale).map(|(a, d)| a * d).collect();
        let v = self.transform.synthesize(&y);
        let av = self.operator.matvec(&v);
        let mut out = self.transform.transpose_apply(&av);
        out.iter_mut().zip(&self.scale).for_each(|(a, d)| *a *= d);
        out
    }

    /// The same matrix formed densely.
    pub fn dense(&self) -> Result<Mat<f64>> {
        dense::check_size(self.len(), MAX_DENSE_DOFS)?;
        let w = self.transform.dense();
        let a = dense::dense(&self.operator);
        let d = Mat::from_fn(w.nrows(), w.ncols(), |i, j| w[(i, j)] * self.scale[j]);
        Ok(d.transpose() * &a * &d)
    }
}

/// Condition numbers of the normalized wavelet bases `Ψ_0 ∪ … ∪ Ψ_J` for
/// `J = 0..=finest`. Levels without degrees of freedom get no row.
pub fn wavelet_condition(
    h: &MeshHierarchy,
    finest: usize,
    norm: Norm,
    opts: &LanczosOptions,
) -> Result<ConditionReport> {
    if norm == Norm::H1Dual {
        return dual_condition(h, finest, DEFAULT_DUAL_CAP, opts);
    }
    h.require(finest + 1)?;
    let levels = (0..=finest).map(|l| build_wavelets::<f64>(h, l)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for j in 0..=finest {
        let op = WaveletOperator::from_levels(h, levels[..=j].to_vec(), norm);
        if op.is_empty() {
            continue;
        }
        let ex = lanczos_extremes(|x| op.apply(x), op.len(), opts)?;
        rows.push(ConditionRow {
            level: j,
            dofs: op.len(),
            kappa: ex.condition(),
            extremes: ex,
            biorthogonality: None,
        });
    }
    Ok(ConditionReport { norm, rows })
}

/// Highest level for which dual bases are formed by default.
pub const DEFAULT_DUAL_CAP: usize = 6;

/// Dual wavelets of levels `0..=finest` in the piecewise linear nodal basis
/// on `T_{finest+1}`, with the primal synthesis matrix and the primal-dual
/// nodal Gram matrix.
#[derive(Clone, Debug)]
pub struct DualBasis {
    pub primal: Mat<f64>,
    pub dual: Mat<f64>,
    pub nodal_gram: Mat<f64>,
}

pub fn dual_basis(h: &MeshHierarchy, finest: usize, limit: usize) -> Result<DualBasis> {
    h.require(finest + 1)?;
    let t = MultilevelTransform::new(h, finest)?;
    dense::check_size(t.len(), limit)?;
    let primal = t.dense();
    let inv_t = dual_synthesis_matrix(h, finest, limit)?;
    let nodal_gram = dense::dense(&primal_dual_gram(h, finest)?);
    let dual = nodal_gram.partial_piv_lu().solve(&inv_t);
    Ok(DualBasis { primal, dual, nodal_gram })
}

fn max_identity_deviation(m: &Mat<f64>) -> f64 {
    let mut e = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let t = if i == j { 1.0 } else { 0.0 };
            e = e.max((m[(i, j)] - t).abs());
        }
    }
    e
}

/// `H¹` Gram matrix of the normalized dual wavelets of levels `0..=finest`
/// and the biorthogonality defect of the correspondingly rescaled pair.
pub fn normalized_dual_gram(h: &MeshHierarchy, finest: usize) -> Result<(Mat<f64>, f64)> {
    let b = dual_basis(h, finest, MAX_DENSE_DOFS)?;
    let a = dense::dense(&linear_stiffness(h, finest + 1));
    let g = b.dual.transpose() * &a * &b.dual;
    let n = g.nrows();
    let d: Vec<f64> = (0..n).map(|i| 1.0 / g[(i, i)].sqrt()).collect();
    let gn = Mat::from_fn(n, n, |r, c| g[(r, c)] * d[r] * d[c]);
    // the primal partner of a dual function scaled by d is scaled by 1/d
    let primal = Mat::from_fn(n, n, |r, c| b.primal[(r, c)] / d[c]);
    let dual = Mat::from_fn(n, n, |r, c| b.dual[(r, c)] * d[c]);
    let bio = max_identity_deviation(&(primal.transpose() * &b.nodal_gram * &dual));
    Ok((gn, bio))
}

/// Condition numbers of the `H¹`-normalized dual wavelets for `J = 0..=finest`.
pub fn dual_condition(h: &MeshHierarchy, finest: usize, cap: usize, opts: &LanczosOptions) -> Result<ConditionReport> {
    if finest > cap {
        return Err(Error::LevelCap { level: finest, cap });
    }
    h.require(finest + 1)?;
    let mut rows = Vec::new();
    for j in 0..=finest {
        let (gn, bio) = normalized_dual_gram(h, j)?;
        let n = gn.nrows();
        if n == 0 {
            continue;
        }
        let ex = lanczos_extremes(|x| dense_matvec(&gn, x), n, opts)?;
        rows.push(ConditionRow { level: j, dofs: n, kappa: ex.condition(), extremes: ex, biorthogonality: Some(bio) });
    }
    Ok(ConditionReport { norm: Norm::H1Dual, rows })
}

pub fn dense_matvec(m: &Mat<f64>, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; m.nrows()];
    for j in 0..m.ncols() {
        let xj = x[j];
        if xj != 0.0 {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += m[(i, j)] * xj;
            }
        }
    }
    y
}

/// Smallest eigenvalue of the symmetric part of the reference primal-dual
/// Gram matrix.
pub fn lambda_min_check() -> Result<f64> {
    let r = reference();
    let s = symmetrized_reference_gram(&gram(&r.n, &r.n_tilde).entries);
    let (lo, _) = dense::sym_extremes(&dense::from_rows(&s.to_f64()))?;
    Ok(lo)
}

/// `(G + Gᵀ) / 2`.
pub fn symmetrized_reference_gram(g: &RatMatrix) -> RatMatrix {
    let half = crate::scalar::rat(1, 2);
    RatMatrix::from_fn(g.nrows(), g.ncols(), |i, j| (&g[(i, j)] + &g[(j, i)]) * &half)
}
