mod common;

use common::smallest_root;
use femwave::ref_element::*;
use femwave::scalar::{rat, to_f64};
use femwave::spectral::{lambda_min_check, symmetrized_reference_gram};
use num_traits::Zero;
use proptest::prelude::*;

fn collections() -> Vec<&'static LocalCollection> {
    let r = reference();
    vec![&r.n, &r.n_tilde, &r.n_fine, &r.theta, &r.xi, &r.phi_tilde, &r.theta_xi]
}

#[test]
fn primal_dual_gram_matches_table() {
    let r = reference();
    let expected = [
        [16, -3, -3, -10, 0, 0],
        [-3, 16, -3, 0, -10, 0],
        [-3, -3, 16, 0, 0, -10],
        [2, 14, 14, 70, 30, 30],
        [14, 2, 14, 30, 70, 30],
        [14, 14, 2, 30, 30, 70],
    ];
    let g = gram(&r.n, &r.n_tilde);
    for (i, row) in expected.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            assert_eq!(g.entries[(i, j)], rat(v, 480), "entry ({i},{j})");
        }
    }
}

#[test]
fn coarse_and_dual_are_biorthogonal() {
    let r = reference();
    assert!(gram(&r.theta, &r.phi_tilde).entries.is_identity());
}

#[test]
fn cross_gram_values() {
    let r = reference();
    let g = gram(&r.xi, &r.phi_tilde);
    let mut seen = std::collections::BTreeSet::new();
    for (i, x) in g.row_index.iter().enumerate() {
        for (j, y) in g.col_index.iter().enumerate() {
            let v = g.entries[(i, j)].clone();
            assert_eq!(v, expected_cross_gram(x, y), "{x} vs {y}");
            if !v.is_zero() {
                seen.insert(v);
            }
        }
    }
    let want: std::collections::BTreeSet<_> = [rat(3, 100), rat(-1, 48), rat(27, 240)].into_iter().collect();
    assert_eq!(seen, want);
}

#[test]
fn collection_sizes() {
    let r = reference();
    assert_eq!((r.theta.len(), r.xi.len(), r.phi_tilde.len(), r.theta_xi.len()), (6, 9, 6, 15));
    assert!(r.theta_xi.satisfies_independence());
}

#[test]
fn lambda_min_matches_characteristic_polynomial() {
    let r = reference();
    let s = symmetrized_reference_gram(&gram(&r.n, &r.n_tilde).entries);
    assert!(s.is_symmetric());
    let oracle = smallest_root(&s);
    let lambda = lambda_min_check().unwrap();
    assert!(lambda > 0.0);
    assert!((lambda - oracle).abs() <= 1e-12, "{lambda} vs {oracle}");
}

#[test]
fn report_mentions_all_collections() {
    let text = ref_report(reference());
    for s in ["Θ", "Ξ", "Φ̃", "480"] {
        assert!(text.contains(s), "missing {s}");
    }
}

/// Composite centroid rule on a uniform subdivision of the reference
/// triangle, extrapolated from two resolutions.
fn quadrature_mean(a: u32, b: u32, c: u32) -> f64 {
    let rule = |n: usize| {
        let h = 1.0 / n as f64;
        let f = |x: f64, y: f64| x.powi(a as i32) * y.powi(b as i32) * (1.0 - x - y).powi(c as i32);
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n - i {
                let (x, y) = (i as f64 * h, j as f64 * h);
                s += f(x + h / 3.0, y + h / 3.0);
                if i + j + 1 < n {
                    s += f(x + 2.0 * h / 3.0, y + 2.0 * h / 3.0);
                }
            }
        }
        s / (n * n) as f64
    };
    (4.0 * rule(400) - rule(200)) / 3.0
}

fn perm() -> impl Strategy<Value = Perm3> {
    (0..6usize).prop_map(|i| Perm3::ALL[i])
}

proptest! {
    #[test]
    fn monomial_integrals_match_quadrature(a in 0u32..5, b in 0u32..5, c in 0u32..5) {
        let exact = to_f64(&integrate_monomial(a, b, c));
        let approx = quadrature_mean(a, b, c);
        prop_assert!((exact - approx).abs() <= 1e-6 * exact.abs().max(1e-3), "{} vs {}", exact, approx);
    }

    #[test]
    fn collections_commute_with_symmetries(k in 0usize..7, p in perm(), seed in 0usize..1000) {
        let c = collections()[k];
        let i = seed % c.len();
        let x = c.index[i];
        let image = c.get(&x.permute(p)).unwrap();
        for (n, v) in c.basis.nodes().iter().zip(&c.functions[i].coeffs) {
            prop_assert_eq!(image.coeff_at(&n.permute(p)), Some(v));
        }
        let back = apply_symmetry(image, p);
        prop_assert_eq!(&back, &c.functions[i]);
    }

    #[test]
    fn grams_are_symmetry_invariant(a in 0usize..7, b in 0usize..7, p in perm(), seed in 0usize..10000) {
        let (ca, cb) = (collections()[a], collections()[b]);
        let g = gram(ca, cb);
        let (i, j) = (seed % ca.len(), (seed / 7) % cb.len());
        let (x, y) = (ca.index[i], cb.index[j]);
        prop_assert_eq!(g.entry(&x, &y), g.entry(&x.permute(p), &y.permute(p)));
        let gt = gram(cb, ca);
        prop_assert_eq!(g.entry(&x, &y), gt.entry(&y, &x));
    }

    #[test]
    fn functions_respect_vanishing_rule(k in 0usize..7, seed in 0usize..1000) {
        let c = collections()[k];
        let i = seed % c.len();
        for (n, v) in c.basis.nodes().iter().zip(&c.functions[i].coeffs) {
            prop_assert!(v.is_zero() || may_touch(&c.index[i], n));
        }
    }
}
