use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use femwave::mesh::{l_shape, unit_square, MeshHierarchy};
use femwave::spectral::{wavelet_condition, LanczosOptions, Norm, WaveletOperator};
use femwave::wavelets::{build_wavelets, MultilevelTransform};
use femwave::Rational;

fn refine(c: &mut Criterion) {
    let mut g = c.benchmark_group("refine");
    for levels in [3, 5] {
        g.bench_with_input(BenchmarkId::from_parameter(levels), &levels, |b, &l| {
            b.iter(|| MeshHierarchy::with_levels(black_box(&l_shape()), l))
        });
    }
    g.finish();
}

fn wavelets(c: &mut Criterion) {
    let h = MeshHierarchy::with_levels(&unit_square(), 5);
    let mut g = c.benchmark_group("build_wavelets");
    g.sample_size(20);
    for l in [2, 4] {
        g.bench_with_input(BenchmarkId::new("f64", l), &l, |b, &l| b.iter(|| build_wavelets::<f64>(&h, l).unwrap()));
    }
    g.bench_function("rational/3", |b| b.iter(|| build_wavelets::<Rational>(&h, 3).unwrap()));
    g.finish();
}

fn transform(c: &mut Criterion) {
    let h = MeshHierarchy::with_levels(&unit_square(), 6);
    let t = MultilevelTransform::new(&h, 5).unwrap();
    let x = vec![1.0; t.len()];
    c.bench_function("synthesize/5", |b| b.iter(|| t.synthesize(black_box(&x))));
    let op = WaveletOperator::new(&h, 5, Norm::H1).unwrap();
    c.bench_function("wavelet_operator_apply/5", |b| b.iter(|| op.apply(black_box(&x))));
}

fn condition(c: &mut Criterion) {
    let h = MeshHierarchy::with_levels(&unit_square(), 5);
    let opts = LanczosOptions::default();
    let mut g = c.benchmark_group("condition");
    g.sample_size(10);
    for norm in [Norm::L2, Norm::H1, Norm::H1Dual] {
        g.bench_function(norm.name(), |b| b.iter(|| wavelet_condition(&h, 3, norm, &opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, refine, wavelets, transform, condition);
criterion_main!(benches);
