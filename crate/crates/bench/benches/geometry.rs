use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spd_geom::divergence::{divergence, DivergenceSpec};
use spd_geom::experiments::{curvature_grid_with_sample, CurvatureSample, GridConfig};
use spd_geom::kernel::{mean_kernel_check, power_wasserstein_mean, MeanGrid};
use spd_geom::mixed::{me_curvature, MeGeometry, MpePair};
use spd_geom::{SpdMatrix, SymmetricMatrix};

fn inputs(n: usize) -> (SpdMatrix, [SymmetricMatrix; 4]) {
    let s = CurvatureSample::generate(n, 1, 2, 5);
    let x = SymmetricMatrix::new(s.planes[0].0.clone()).unwrap();
    let y = SymmetricMatrix::new(s.planes[0].1.clone()).unwrap();
    let z = SymmetricMatrix::new(s.planes[1].0.clone()).unwrap();
    let t = SymmetricMatrix::new(s.planes[1].1.clone()).unwrap();
    let m = x.as_matrix() * x.as_matrix() + SymmetricMatrix::identity(n).as_matrix();
    let sigma = SpdMatrix::from_matrix((&m + m.transpose()) * 0.5).unwrap();
    (sigma, [x, y, z, t])
}

fn curvature(c: &mut Criterion) {
    let metric = MpePair::new(1.0, 0.0).metric().unwrap();
    let mut group = c.benchmark_group("me_curvature");
    for n in [3, 8, 16, 32] {
        let (sigma, [x, y, z, t]) = inputs(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| me_curvature(&metric, black_box(&sigma), &x, &y, &z, &t).unwrap())
        });
    }
    group.finish();
}

fn sectional_on_diagonal(c: &mut Criterion) {
    let metric = MpePair::new(0.5, -1.5).metric().unwrap();
    let sample = CurvatureSample::generate(3, 1, 1, 42);
    let geom = MeGeometry::diagonal(&metric, &sample.matrices[0]).unwrap();
    let (x, y) = &sample.planes[0];
    c.bench_function("sectional_eigen n=3", |b| {
        b.iter(|| geom.sectional_eigen(black_box(x), black_box(y)).unwrap())
    });
}

fn grid(c: &mut Criterion) {
    let cfg = GridConfig {
        alpha: "-1:1:0.5".parse().unwrap(),
        beta: "-1:1:0.5".parse().unwrap(),
        n_matrices: 20,
        n_planes: 20,
        ..GridConfig::default()
    };
    let sample = CurvatureSample::generate(cfg.dim, cfg.n_matrices, cfg.n_planes, cfg.seed);
    c.bench_function("curvature_grid 5x5 cells, 400 triples", |b| {
        b.iter(|| curvature_grid_with_sample(&cfg, black_box(&sample)).unwrap())
    });
}

fn divergences(c: &mut Criterion) {
    let (sigma, [x, ..]) = inputs(8);
    let m = x.as_matrix() * x.as_matrix() * 0.5 + SymmetricMatrix::identity(8).as_matrix() * 2.0;
    let lambda = SpdMatrix::from_matrix((&m + m.transpose()) * 0.5).unwrap();
    let mut group = c.benchmark_group("divergence n=8");
    for (name, spec) in [
        ("ab(0.5,1.5)", DivergenceSpec::ab(0.5, 1.5)),
        (
            "uv(pow 0.5, pow 1.5)",
            DivergenceSpec::uv(spd_geom::ScalarFunction::pow(0.5), spd_geom::ScalarFunction::pow(1.5)),
        ),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| divergence(&spec, black_box(&sigma), &lambda).unwrap())
        });
    }
    group.finish();
}

fn mean_check(c: &mut Criterion) {
    let spec = power_wasserstein_mean(1.5).unwrap();
    let grid = MeanGrid {
        points: 100,
        ..MeanGrid::default()
    };
    c.bench_function("mean_kernel_check 100 points", |b| {
        b.iter(|| mean_kernel_check(|x, y| spec.mean(x, y), black_box(&grid)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = curvature, sectional_on_diagonal, grid, divergences, mean_check
}
criterion_main!(benches);
