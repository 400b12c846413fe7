//! Invariant checks of a constructed hierarchy.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::assembly::{assemble, global_gram};
use crate::error::Result;
use crate::fe::{assemble_form, embedding_matrix, moment_vectors, DofMap, Form, Space};
use crate::mesh::MeshHierarchy;
use crate::ref_element::{gram, reference, BasisTag, LocalCollection};
use crate::scalar::Rational;
use crate::spectral::{dense, lambda_min_check};
use crate::wavelets::{angle_constants, build_wavelets, correction_counts, WaveletKind, WaveletLevel};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Exact `⟨Θ_j, Φ̃_j⟩ = Id`.
pub fn check_theta_biorthogonal(h: &MeshHierarchy, j: usize) -> Result<bool> {
    let r = reference();
    let theta = assemble::<Rational>(h, j, &r.theta)?;
    let dual = assemble::<Rational>(h, j, &r.phi_tilde)?;
    Ok(global_gram(h, &theta, &dual)?.is_identity())
}

/// Largest absolute entry of `⟨Ψ_l, Ñ_{l-1}⟩`, exact.
pub fn wavelet_dual_products(h: &MeshHierarchy, w: &WaveletLevel<Rational>) -> Rational {
    if w.level == 0 {
        return Rational::zero();
    }
    let l = w.level;
    let space = Space::primal(l);
    let mass = assemble_form::<Rational>(h, space, Form::Mass, &DofMap::of_space(h, space));
    let hats = embedding_matrix::<Rational>(h, l - 1, BasisTag::SplitLinear);
    let products = w.columns.transpose().mul(&mass).mul(&hats);
    products.triplets().map(|(_, _, v)| v.abs()).max().unwrap_or_else(Rational::zero)
}

/// Triangles of `T_l` on which a wavelet column is nonzero.
pub fn support_triangles(h: &MeshHierarchy, w: &WaveletLevel<Rational>, col: &[(usize, Rational)]) -> Vec<usize> {
    let dofs = DofMap::of_space(h, Space::primal(w.level));
    let nz: BTreeSet<usize> = col.iter().filter(|(_, v)| !v.is_zero()).map(|(i, _)| dofs.vertex(*i)).collect();
    (0..h.triangles(w.level).len()).filter(|&t| h.quadratic_nodes(w.level, t).iter().any(|v| nz.contains(v))).collect()
}

/// Whether no support triangle touches the Dirichlet boundary.
pub fn support_avoids_gamma(h: &MeshHierarchy, level: usize, support: &[usize]) -> bool {
    support.iter().all(|&t| h.triangles(level)[t].iter().all(|&v| !h.on_gamma(v)))
}

/// Per wavelet: `Some([∫ψ, ∫ψx, ∫ψy])` when its support avoids the boundary.
pub fn wavelet_moments(h: &MeshHierarchy, w: &WaveletLevel<Rational>) -> Vec<Option<[Rational; 3]>> {
    let m = moment_vectors(h, w.level);
    w.column_entries()
        .iter()
        .map(|col| {
            if !support_avoids_gamma(h, w.level, &support_triangles(h, w, col)) {
                return None;
            }
            Some(std::array::from_fn(|k| col.iter().map(|(i, v)| v * &m[k][*i]).sum()))
        })
        .collect()
}

/// Support sizes of the wavelets away from the boundary, by kind.
pub fn interior_support_sizes(h: &MeshHierarchy, w: &WaveletLevel<Rational>) -> BTreeMap<WaveletKind, BTreeSet<usize>> {
    let mut out: BTreeMap<WaveletKind, BTreeSet<usize>> = BTreeMap::new();
    for (k, col) in w.column_entries().iter().enumerate() {
        if support_avoids_gamma(h, w.level, &support_triangles(h, w, col)) {
            out.entry(w.kinds[k]).or_default().insert(col.len());
        }
    }
    out
}

/// Whether every wavelet of level `l ≥ 1` is supported in the union of the
/// `T_{l-1}` triangles sharing a vertex with a triangle containing its centre.
pub fn supports_in_rings(h: &MeshHierarchy, w: &WaveletLevel<Rational>) -> bool {
    if w.level == 0 {
        return true;
    }
    let j = w.level - 1;
    let tris = h.triangles(j);
    let nodes: Vec<[usize; 15]> = (0..tris.len()).map(|t| h.local_nodes(j, t)).collect();
    let dofs = DofMap::of_space(h, Space::primal(w.level));
    w.column_entries().iter().zip(&w.index).all(|(col, &x)| {
        let Some(home) = nodes.iter().position(|n| n.contains(&x)) else { return false };
        let corners: BTreeSet<usize> = tris[home].iter().copied().collect();
        let ring: BTreeSet<usize> =
            (0..tris.len()).filter(|&t| tris[t].iter().any(|v| corners.contains(v))).flat_map(|t| nodes[t]).collect();
        col.iter().all(|(i, _)| ring.contains(&dofs.vertex(*i)))
    })
}

/// Extreme eigenvalues of the reference Gram matrix and the global scaled
/// Gram matrix of a collection on level `j`.
pub fn gram_bounds(h: &MeshHierarchy, j: usize, local: &LocalCollection) -> Result<((f64, f64), (f64, f64))> {
    let r = gram(local, local);
    let local_ex = dense::sym_extremes(&dense::from_rows(&r.entries.to_f64()))?;
    let g = assemble::<f64>(h, j, local)?;
    let global = global_gram(h, &g, &g)?.scaled();
    dense::check_size(global.nrows(), dense::MAX_DENSE_DOFS)?;
    let global_ex = dense::sym_extremes(&dense::dense(&global))?;
    Ok((local_ex, global_ex))
}

/// Largest cosine between the spans of two reference collections.
pub fn local_cosine(a: &LocalCollection, b: &LocalCollection) -> Result<f64> {
    let m = |x, y| dense::from_rows(&gram(x, y).entries.to_f64());
    Ok(dense::principal_cosines(&m(a, a), &m(a, b), &m(b, b))?.first().copied().unwrap_or(0.0))
}

/// Slack allowed when comparing global and reference spectra.
pub const SPECTRAL_SLACK: f64 = 1e-10;

/// Runs the invariant suite on levels `0..=finest`. The hierarchy must
/// contain level `finest + 2`.
pub fn run_checks(h: &MeshHierarchy, finest: usize) -> Result<Vec<CheckOutcome>> {
    h.require(finest + 2)?;
    let r = reference();
    let mut out = Vec::new();

    let ok = (0..=finest).map(|j| check_theta_biorthogonal(h, j)).collect::<Result<Vec<_>>>()?;
    out.push(CheckOutcome::new(
        "biorthogonality",
        ok.iter().all(|b| *b),
        format!("exact identity on levels 0..={finest}: {ok:?}"),
    ));

    let levels = (0..=finest + 1).map(|l| build_wavelets::<Rational>(h, l)).collect::<Result<Vec<_>>>()?;
    let worst = levels.iter().map(|w| wavelet_dual_products(h, w)).max().unwrap_or_else(Rational::zero);
    out.push(CheckOutcome::new("wavelet orthogonality", worst.is_zero(), format!("max |<psi, dual>| = {worst}")));

    let mut tested = 0;
    let mut nonzero = 0;
    for w in &levels[1..] {
        for m in wavelet_moments(h, w).into_iter().flatten() {
            tested += 1;
            if m.iter().any(|v| !v.is_zero()) {
                nonzero += 1;
            }
        }
    }
    out.push(CheckOutcome::new(
        "vanishing moments",
        nonzero == 0,
        format!("{tested} interior wavelets tested, {nonzero} with nonzero moments"),
    ));

    for (name, local) in [("N", &r.n), ("N~", &r.n_tilde), ("Theta+Xi", &r.theta_xi)] {
        let mut pass = true;
        let mut detail = Vec::new();
        for j in 0..=finest {
            let ((lo, hi), (glo, ghi)) = gram_bounds(h, j, local)?;
            pass &= glo >= lo - SPECTRAL_SLACK && ghi <= hi + SPECTRAL_SLACK;
            detail.push(format!("j={j}: [{glo:.6}, {ghi:.6}] in [{lo:.6}, {hi:.6}]"));
        }
        out.push(CheckOutcome::new(format!("gram bounds {name}"), pass, detail.join("; ")));
    }

    let local = local_cosine(&r.theta, &r.xi)?;
    let mut pass = true;
    let mut detail = Vec::new();
    for j in 0..=finest {
        let a = angle_constants(h, j, dense::MAX_DENSE_DOFS)?;
        pass &= a.epsilon <= local + SPECTRAL_SLACK && a.delta > 0.0;
        detail.push(format!("j={j}: cos={:.6} delta={:.6}", a.epsilon, a.delta));
    }
    out.push(CheckOutcome::new("angle", pass, format!("local cos={local:.6}; {}", detail.join("; "))));

    let lambda = lambda_min_check()?;
    out.push(CheckOutcome::new("lambda_min", lambda > 0.0, format!("{lambda:.12}")));

    let rings = levels.iter().all(|w| supports_in_rings(h, w));
    let mut hist = BTreeMap::new();
    for w in &levels[1..] {
        for (k, s) in interior_support_sizes(h, w) {
            hist.entry(k).or_insert_with(BTreeSet::new).extend(s);
        }
    }
    out.push(CheckOutcome::new(
        "supports",
        rings,
        format!("contained in coarse rings; sizes away from boundary {hist:?}"),
    ));

    let mut pass = true;
    for w in &levels[1..] {
        for (k, c) in w.kinds.iter().zip(correction_counts(w)) {
            pass &= match k {
                WaveletKind::Edge => c <= 1,
                WaveletKind::Interior => c <= 2,
                WaveletKind::Scaling => c == 0,
            };
        }
    }
    out.push(CheckOutcome::new(
        "correction rows",
        pass,
        "at most 1 term per edge-type and 2 per interior-type wavelet",
    ));
    Ok(out)
}
