use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use aggrex::cluster::{initial_partition, kmeans, KmeansOpts};
use aggrex::features::{build_day_elements, pairwise_matrix, pairwise_matrix_seq, Metric};
use aggrex::instance::{generate_synthetic, SyntheticSpec};

fn feature_set(n_days: usize) -> aggrex::features::FeatureSet {
    let mut spec = SyntheticSpec::default();
    spec.n_days = n_days;
    spec.n_areas = 3;
    let instance = generate_synthetic(&spec, 42).expect("valid spec");
    build_day_elements(&instance)
}

fn bench_pairwise(c: &mut Criterion) {
    let fs = feature_set(365);
    let days: Vec<usize> = (0..fs.n_days).collect();
    let mut group = c.benchmark_group("pairwise_dtw");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("parallel", fs.n_days), |b| {
        b.iter(|| pairwise_matrix(&fs, &days, Metric::Dtw))
    });
    group.bench_function(BenchmarkId::new("sequential", fs.n_days), |b| {
        b.iter(|| pairwise_matrix_seq(&fs, &days, Metric::Dtw))
    });
    group.finish();
}

fn bench_kmeans(c: &mut Criterion) {
    let fs = feature_set(365);
    let init = initial_partition(fs.n_days, 28);
    let mut group = c.benchmark_group("kmeans_28");
    group.sample_size(10);
    // the assignment loop switches between rayon and the sequential path
    // with the `parallel` feature; run the suite twice to compare:
    //   cargo bench --bench parallel
    //   cargo bench --bench parallel --no-default-features
    group.bench_function("lloyd", |b| {
        b.iter(|| kmeans(&fs, 28, &init, KmeansOpts::default()))
    });
    group.finish();
}

criterion_group!(benches, bench_pairwise, bench_kmeans);
criterion_main!(benches);
