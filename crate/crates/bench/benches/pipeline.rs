use breathradar::{
    estimate_interval, form_image_frames, harmonic_sum, process_cube, sliding_series,
    synthesize_cube, taylor_weights, AngleGrid, EstimatorParams, ProcessingOptions,
};
use breathradar_bench::{breathing_trace, bundled_cube, bundled_scene};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn imaging(c: &mut Criterion) {
    let cube = bundled_cube(20.0);
    let grid = AngleGrid::default();
    let weights = taylor_weights(12, 4, -30.0).unwrap();
    c.bench_function("form_image 400 frames x 24 ranges x 121 angles", |b| {
        b.iter(|| form_image_frames(black_box(&cube), 0..cube.n_frames(), &grid, &weights).unwrap())
    });
}

fn estimation(c: &mut Criterion) {
    let params = EstimatorParams::default();
    let trace = breathing_trace(1200, 2.32);
    c.bench_function("harmonic_sum single lag", |b| {
        b.iter(|| harmonic_sum(black_box(&trace.samples_m), 0, 46, &params).unwrap())
    });
    c.bench_function("estimate_interval one window", |b| {
        b.iter(|| estimate_interval(black_box(&trace), 0, &params).unwrap())
    });

    let long = breathing_trace(21_600, 2.32);
    let mut group = c.benchmark_group("long");
    group.sample_size(10);
    group.bench_function("sliding_series 18 min", |b| {
        b.iter(|| sliding_series(black_box(&long), &params).unwrap())
    });
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let (cfg, scene) = bundled_scene(60.0);
    let mut group = c.benchmark_group("simulation");
    group.sample_size(10);
    group.bench_function("synthesize_cube 60 s", |b| {
        b.iter(|| synthesize_cube(black_box(&scene), &cfg, 1).unwrap())
    });
    let cube = bundled_cube(120.0);
    group.bench_function("process_cube 120 s", |b| {
        b.iter(|| process_cube(black_box(&cube), &ProcessingOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, imaging, estimation, simulation);
criterion_main!(benches);
