use std::collections::BTreeMap;

use femwave::assembly::{assemble, global_gram, infsup_bound};
use femwave::diagnostics::{gram_bounds, local_cosine, SPECTRAL_SLACK};
use femwave::fe::{DofMap, Space};
use femwave::mesh::*;
use femwave::ref_element::{reference, LocalCollection};
use femwave::scalar::{int, rat};
use femwave::wavelets::{angle_constants, build_wavelets};
use femwave::Rational;
use proptest::prelude::*;

/// An irregular pentagon with two interior vertices and a partial Dirichlet boundary.
fn pentagon() -> Triangulation {
    let p = |x: (i64, i64), y: (i64, i64)| Point::new(rat(x.0, x.1), rat(y.0, y.1));
    let vertices = vec![
        p((0, 1), (0, 1)),
        p((2, 1), (0, 1)),
        p((5, 2), (3, 2)),
        p((1, 1), (5, 2)),
        p((-1, 2), (3, 2)),
        p((4, 5), (2, 3)),
        p((8, 5), (6, 5)),
    ];
    let triangles = vec![[0, 1, 5], [1, 6, 5], [1, 2, 6], [2, 3, 6], [3, 5, 6], [3, 4, 5], [4, 0, 5]];
    Triangulation::new(vertices, triangles, vec![(0, 1), (1, 2), (4, 0)]).unwrap()
}

fn meshes() -> Vec<(&'static str, Triangulation)> {
    vec![("unit square", unit_square()), ("l shape", l_shape()), ("pentagon", pentagon())]
}

#[test]
fn global_grams_respect_reference_bounds() {
    let r = reference();
    for (name, m) in meshes() {
        let h = MeshHierarchy::with_levels(&m, 4);
        for local in [&r.n, &r.n_tilde, &r.theta_xi] {
            for j in 0..=2 {
                let ((lo, hi), (glo, ghi)) = gram_bounds(&h, j, local).unwrap();
                assert!(glo >= lo - SPECTRAL_SLACK && ghi <= hi + SPECTRAL_SLACK, "{name} {:?} j={j}", local.id);
            }
        }
    }
}

#[test]
fn global_angle_not_smaller_than_local() {
    let r = reference();
    let local = local_cosine(&r.theta, &r.xi).unwrap();
    for (name, m) in meshes() {
        let h = MeshHierarchy::with_levels(&m, 3);
        for j in 0..=1 {
            let a = angle_constants(&h, j, 8000).unwrap();
            assert!(a.epsilon <= local + SPECTRAL_SLACK, "{name} j={j}");
            assert!(a.epsilon < 1.0 && a.delta > 0.0);
        }
    }
}

#[test]
fn theta_and_dual_biorthogonal_on_partial_boundary() {
    let r = reference();
    let h = MeshHierarchy::with_levels(&pentagon(), 4);
    for j in 0..=2 {
        let a = assemble::<Rational>(&h, j, &r.theta).unwrap();
        let b = assemble::<Rational>(&h, j, &r.phi_tilde).unwrap();
        assert!(global_gram(&h, &a, &b).unwrap().is_identity());
    }
}

#[test]
fn grams_are_symmetric() {
    let r = reference();
    let h = MeshHierarchy::with_levels(&l_shape(), 3);
    let cols: Vec<_> = [&r.n, &r.theta, &r.phi_tilde].iter().map(|c| assemble::<Rational>(&h, 1, c).unwrap()).collect();
    for a in &cols {
        let g = global_gram(&h, a, a).unwrap().unscaled;
        assert_eq!(g, g.transpose());
        for b in &cols {
            let ab = global_gram(&h, a, b).unwrap().unscaled;
            let ba = global_gram(&h, b, a).unwrap().unscaled;
            assert_eq!(ab, ba.transpose());
        }
    }
}

#[test]
fn level_mismatch_is_an_error() {
    let r = reference();
    let h = MeshHierarchy::with_levels(&unit_square(), 3);
    let a = assemble::<f64>(&h, 0, &r.n).unwrap();
    let b = assemble::<f64>(&h, 1, &r.n).unwrap();
    assert!(global_gram(&h, &a, &b).is_err());
}

#[test]
fn infsup_positive_on_all_meshes() {
    for (name, m) in meshes() {
        let h = MeshHierarchy::with_levels(&m, 4);
        for j in 0..=2 {
            assert!(infsup_bound(&h, j).unwrap() > 0.0, "{name} j={j}");
        }
    }
}

#[test]
fn mesh_files_round_trip() {
    for (_, m) in meshes() {
        let text = write_mesh(&m);
        assert_eq!(load_mesh(&text).unwrap(), m);
    }
    assert!(load_mesh("femwave-mesh 1\nv 0 0\nv 1 0\nv 0 1\nt 0 1 3\n").is_err());
    assert!(load_mesh("femwave-mesh 1\nv 0 0\nv 1 0\nv 2 0\nt 0 1 2\n").is_err());
    assert!(load_mesh("not a mesh\n").is_err());
}

type Key = (Rational, Rational);

fn key(h: &MeshHierarchy, v: usize) -> Key {
    let p = h.vertex(v);
    (p.x.clone(), p.y.clone())
}

/// Gram entries keyed by the coordinates of the index points.
fn keyed_gram(h: &MeshHierarchy, j: usize, a: &LocalCollection, b: &LocalCollection) -> BTreeMap<(Key, Key), Rational> {
    let ga = assemble::<Rational>(h, j, a).unwrap();
    let gb = assemble::<Rational>(h, j, b).unwrap();
    let g = global_gram(h, &ga, &gb).unwrap();
    let s = g.unscaled.map(|v| v.clone());
    s.triplets()
        .map(|(r, c, v)| ((key(h, ga.index[r]), key(h, gb.index[c])), v * &g.row_mu_sq[r] * &g.col_mu_sq[c]))
        .collect()
}

/// Wavelet coefficients keyed by centre and node coordinates.
fn keyed_wavelets(h: &MeshHierarchy, l: usize) -> BTreeMap<(Key, Key), Rational> {
    let w = build_wavelets::<Rational>(h, l).unwrap();
    let dofs = DofMap::of_space(h, Space::primal(l));
    w.columns.triplets().map(|(i, k, v)| ((key(h, w.index[k]), key(h, dofs.vertex(i))), v * &w.scale_sq[k])).collect()
}

fn shuffled(m: &Triangulation, seed: u64) -> Triangulation {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = m.vertices.len();
    let mut relabel: Vec<usize> = (0..n).collect();
    relabel.shuffle(&mut rng);
    let mut vertices = vec![m.vertices[0].clone(); n];
    for (old, &new) in relabel.iter().enumerate() {
        vertices[new] = m.vertices[old].clone();
    }
    let mut triangles: Vec<[usize; 3]> = m
        .triangles
        .iter()
        .map(|t| {
            let mut t = t.map(|v| relabel[v]);
            t.rotate_left(rng.gen_range(0..3));
            if rng.gen_bool(0.5) {
                t.swap(0, 1);
            }
            t
        })
        .collect();
    triangles.shuffle(&mut rng);
    let gamma = m.gamma_edges.iter().map(|&(a, b)| (relabel[a], relabel[b])).collect();
    Triangulation::new(vertices, triangles, gamma).unwrap()
}

fn scaled(m: &Triangulation, s: &Rational, shift: &Rational) -> Triangulation {
    let vertices = m.vertices.iter().map(|p| Point::new(&p.x * s + shift, &p.y * s - shift)).collect();
    Triangulation::new(vertices, m.triangles.clone(), m.gamma_edges.iter().copied().collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn assembly_independent_of_numbering(seed in any::<u64>(), which in 0usize..3) {
        let r = reference();
        let m = meshes().swap_remove(which).1;
        let a = MeshHierarchy::with_levels(&m, 2);
        let b = MeshHierarchy::with_levels(&shuffled(&m, seed), 2);
        prop_assert_eq!(keyed_gram(&a, 0, &r.theta, &r.phi_tilde), keyed_gram(&b, 0, &r.theta, &r.phi_tilde));
        prop_assert_eq!(keyed_gram(&a, 0, &r.xi, &r.phi_tilde), keyed_gram(&b, 0, &r.xi, &r.phi_tilde));
        prop_assert_eq!(keyed_wavelets(&a, 1), keyed_wavelets(&b, 1));
    }

    #[test]
    fn scaled_grams_invariant_under_similarity(num in 1i64..9, den in 1i64..9, shift in -3i64..3) {
        let r = reference();
        let m = l_shape();
        let s = rat(num, den);
        let a = MeshHierarchy::with_levels(&m, 2);
        let b = MeshHierarchy::with_levels(&scaled(&m, &s, &int(shift)), 2);
        let ga = assemble::<Rational>(&a, 0, &r.theta_xi).unwrap();
        let gb = assemble::<Rational>(&b, 0, &r.theta_xi).unwrap();
        let x = global_gram(&a, &ga, &ga).unwrap();
        let y = global_gram(&b, &gb, &gb).unwrap();
        prop_assert!(x.scaled().max_abs_diff(&y.scaled()) <= 1e-12);
    }
}
