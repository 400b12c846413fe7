//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Set `FEMWAVE_STRETCH=1` to also run the optional higher levels and
//! `FEMWAVE_STRICT=1` to exit nonzero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use femwave::assembly::{assemble, global_gram};
use femwave::diagnostics::{gram_bounds, interior_support_sizes, wavelet_moments, SPECTRAL_SLACK};
use femwave::mesh::{l_shape, unit_square, MeshHierarchy, Triangulation};
use femwave::ref_element::{expected_cross_gram, gram, Reference};
use femwave::scalar::rat;
use femwave::spectral::{
    dense, dual_condition, lambda_min_check, lanczos_extremes, symmetrized_reference_gram, wavelet_condition,
    LanczosOptions, Norm, WaveletOperator, DEFAULT_DUAL_CAP,
};
use femwave::wavelets::{build_wavelets, WaveletKind};
use femwave::Rational;
use num_traits::Zero;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn meshes() -> [(&'static str, Triangulation); 2] {
    [("unit-square", unit_square()), ("l-shape", l_shape())]
}

fn within_time(limit: Duration, t: Duration) -> (bool, String) {
    (t <= limit, format!("{:.3}s (limit {}s)", t.as_secs_f64(), limit.as_secs()))
}

fn reference_gram() -> Outcome {
    let start = Instant::now();
    let r = Reference::build().expect("reference construction");
    let g = gram(&r.n, &r.n_tilde);
    let elapsed = start.elapsed();
    let table = [
        [16, -3, -3, -10, 0, 0],
        [-3, 16, -3, 0, -10, 0],
        [-3, -3, 16, 0, 0, -10],
        [2, 14, 14, 70, 30, 30],
        [14, 2, 14, 30, 70, 30],
        [14, 14, 2, 30, 30, 70],
    ];
    let mismatches = (0..36).filter(|k| g.entries[(k / 6, k % 6)] != rat(table[k / 6][k % 6], 480)).count();
    let (fast, t) = within_time(Duration::from_secs(1), elapsed);
    outcome(mismatches == 0 && fast, format!("{mismatches} mismatching entries; {t}"))
}

fn biorthogonality() -> Outcome {
    let start = Instant::now();
    let r = femwave::ref_element::reference();
    let mut ok = gram(&r.theta, &r.phi_tilde).entries.is_identity();
    for (_, m) in meshes() {
        let h = MeshHierarchy::with_levels(&m, 5);
        for j in 0..=3 {
            let a = assemble::<Rational>(&h, j, &r.theta).unwrap();
            let b = assemble::<Rational>(&h, j, &r.phi_tilde).unwrap();
            ok &= global_gram(&h, &a, &b).unwrap().is_identity();
        }
    }
    let (fast, t) = within_time(Duration::from_secs(10), start.elapsed());
    outcome(ok && fast, format!("exact identity on both meshes, j <= 3: {ok}; {t}"))
}

fn cross_values() -> Outcome {
    let r = femwave::ref_element::reference();
    let g = gram(&r.xi, &r.phi_tilde);
    let mut values = BTreeSet::new();
    let mut ok = true;
    for (i, x) in g.row_index.iter().enumerate() {
        for (j, y) in g.col_index.iter().enumerate() {
            let v = &g.entries[(i, j)];
            ok &= *v == expected_cross_gram(x, y);
            if !v.is_zero() {
                values.insert(v.to_string());
            }
        }
    }
    let want: BTreeSet<String> = [rat(3, 100), rat(-1, 48), rat(27, 240)].iter().map(ToString::to_string).collect();
    ok &= values == want;
    outcome(ok, format!("nonzero values {values:?}"))
}

fn table(norm: Norm, targets: &[f64], tol: f64, stretch: &[f64]) -> Outcome {
    let opts = LanczosOptions::default();
    let finest = targets.len() + if stretch_enabled() { stretch.len() } else { 0 };
    let h = MeshHierarchy::with_levels(&unit_square(), finest + 1);
    let report = match norm {
        Norm::H1Dual => dual_condition(&h, finest, DEFAULT_DUAL_CAP, &opts),
        _ => wavelet_condition(&h, finest, norm, &opts),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let k = report.kappas();
    let mut ok = k[0] == 1.0;
    let mut parts = vec![format!("J=0 {:.4}", k[0])];
    for (j, &t) in targets.iter().chain(stretch).enumerate().take(finest) {
        let dev = (k[j + 1] - t) / t;
        let good = dev.abs() <= tol;
        let required = j < targets.len();
        if required {
            ok &= good;
        }
        let tag = match (good, required) {
            (true, _) => "",
            (false, true) => " OUT",
            (false, false) => " out (optional)",
        };
        parts.push(format!("J={} {:.4} vs {t} ({:+.2}%){tag}", j + 1, k[j + 1], 100.0 * dev));
    }
    outcome(ok, parts.join("; "))
}

fn vanishing_moments() -> Outcome {
    let mut tested = 0;
    let mut failed = 0;
    for (_, m) in meshes() {
        let h = MeshHierarchy::with_levels(&m, 4);
        for l in 1..=3 {
            let w = build_wavelets::<Rational>(&h, l).unwrap();
            for mo in wavelet_moments(&h, &w).into_iter().flatten() {
                tested += 1;
                failed += usize::from(mo.iter().any(|v| !v.is_zero()));
            }
        }
    }
    outcome(
        tested > 0 && failed == 0,
        format!("{tested} wavelets away from the boundary, {failed} with nonzero moments"),
    )
}

fn support_sizes() -> Outcome {
    let h = MeshHierarchy::with_levels(&unit_square(), 5);
    let mut edge = BTreeSet::new();
    let mut interior = BTreeSet::new();
    for l in 2..=4 {
        let w = build_wavelets::<Rational>(&h, l).unwrap();
        let s = interior_support_sizes(&h, &w);
        edge.extend(s.get(&WaveletKind::Edge).into_iter().flatten());
        interior.extend(s.get(&WaveletKind::Interior).into_iter().flatten());
    }
    let ok = edge == BTreeSet::from([11]) && interior == BTreeSet::from([13]);
    outcome(
        ok,
        format!("edge-type sizes {edge:?} (expected {{11}}), interior-type sizes {interior:?} (expected {{13}})"),
    )
}

fn gram_bound_suite() -> Outcome {
    let r = femwave::ref_element::reference();
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for (_, m) in meshes() {
        let h = MeshHierarchy::with_levels(&m, 5);
        for local in [&r.n, &r.n_tilde, &r.theta_xi] {
            for j in 0..=3 {
                match gram_bounds(&h, j, local) {
                    Ok(((lo, hi), (glo, ghi))) => {
                        worst = worst.max(lo - glo).max(ghi - hi);
                        ok &= glo >= lo - SPECTRAL_SLACK && ghi <= hi + SPECTRAL_SLACK;
                        cases += 1;
                    }
                    Err(e) => return outcome(false, format!("error: {e}")),
                }
            }
        }
    }
    outcome(ok, format!("{cases} cases; largest excursion beyond reference bounds {worst:.3e}"))
}

fn lambda_min() -> Outcome {
    let r = femwave::ref_element::reference();
    let s = symmetrized_reference_gram(&gram(&r.n, &r.n_tilde).entries);
    let oracle = common::smallest_root(&s);
    let l = lambda_min_check().unwrap();
    outcome(l > 0.0 && (l - oracle).abs() <= 1e-12, format!("lambda_min {l:.15} vs oracle {oracle:.15}"))
}

fn oracle_equivalence() -> Outcome {
    let opts = LanczosOptions::default();
    let mut worst = 0.0f64;
    for (_, m) in meshes() {
        let h = MeshHierarchy::with_levels(&m, 4);
        for norm in [Norm::L2, Norm::H1] {
            for j in 0..=3 {
                let op = WaveletOperator::new(&h, j, norm).unwrap();
                let ex = lanczos_extremes(|x| op.apply(x), op.len(), &opts).unwrap();
                let k = dense::condition(&op.dense().unwrap()).unwrap();
                worst = worst.max((ex.condition() - k).abs() / k);
            }
        }
    }
    outcome(worst <= 1e-4, format!("largest relative difference {worst:.3e}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn stretch_enabled() -> bool {
    std::env::var("FEMWAVE_STRETCH").is_ok_and(|v| v == "1")
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("reference primal-dual gram exact", reference_gram),
        ("biorthogonality of coarse and dual collections", biorthogonality),
        ("complement-dual cross values", cross_values),
        ("L2 condition numbers", || table(Norm::L2, &[4.8, 7.3, 8.3, 8.9, 9.2, 9.7], 0.02, &[9.8])),
        ("H1 condition numbers", || table(Norm::H1, &[27.0, 41.0, 54.0, 63.0, 70.0, 76.0], 0.02, &[81.0])),
        ("dual H1 condition numbers", || table(Norm::H1Dual, &[6.5, 14.0, 22.0, 28.0], 0.03, &[32.0])),
        ("vanishing moments", vanishing_moments),
        ("support sizes on the uniform mesh", support_sizes),
        ("global gram bounds", gram_bound_suite),
        ("lambda_min oracle", lambda_min),
        ("matrix-free vs dense condition numbers", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.passed);
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name}: {} [{:.1}s]", i + 1, o.detail, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("FEMWAVE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
