use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanczosOptions {
    /// Relative residual `|β s_k| / |θ|` required for both extreme Ritz values.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Ritz values are recomputed every this many steps.
    pub check_every: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iter: 2000, seed: 0x5eed, check_every: 4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremes {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub iterations: usize,
    /// Largest relative Ritz residual of the two extremes.
    pub residual: f64,
}

impl Extremes {
    pub fn condition(&self) -> f64 {
        self.lambda_max / self.lambda_min
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Ritz values and the residual bound of both extremes.
fn ritz(alpha: &[f64], beta: &[f64], last_beta: f64) -> Result<(f64, f64, f64, f64)> {
    let k = alpha.len();
    let t = Mat::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let eig = t.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Numerical(format!("{e:?}")))?;
    let s = eig.S().column_vector();
    let u = eig.U();
    let (lo, hi) = (s[0], s[k - 1]);
    let r_lo = (last_beta * u[(k - 1, 0)]).abs() / lo.abs().max(f64::MIN_POSITIVE);
    let r_hi = (last_beta * u[(k - 1, k - 1)]).abs() / hi.abs().max(f64::MIN_POSITIVE);
    Ok((lo, hi, r_lo, r_hi))
}

/// Extreme eigenvalues of the symmetric operator `apply` on `R^n` by the
/// Lanczos process with full reorthogonalization.
pub fn lanczos_extremes(apply: impl Fn(&[f64]) -> Vec<f64>, n: usize, opts: &LanczosOptions) -> Result<Extremes> {
    if n == 0 {
        return Err(Error::Numerical("empty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|x| *x /= norm);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut residual = f64::INFINITY;
    let limit = opts.max_iter.min(n);
    for k in 0..limit {
        let mut w = apply(&q);
        let a = dot(&w, &q);
        alpha.push(a);
        basis.push(q);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&w, v);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = dot(&w, &w).sqrt();
        let scale = alpha.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let exhausted = b <= 1e-13 * scale.max(f64::MIN_POSITIVE) || k + 1 == n;
        if exhausted || (k + 1) % opts.check_every == 0 || k + 1 == limit {
            let (lo, hi, r_lo, r_hi) = ritz(&alpha, &beta, if exhausted { 0.0 } else { b })?;
            residual = r_lo.max(r_hi);
            if exhausted || residual <= opts.tol {
                return Ok(Extremes { lambda_min: lo, lambda_max: hi, iterations: k + 1, residual });
            }
        }
        beta.push(b);
        q = w.into_iter().map(|x| x / b).collect();
    }
    Err(Error::NoConvergence { iterations: limit, residual })
}
