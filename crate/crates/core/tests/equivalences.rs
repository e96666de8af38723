mod common;

use common::{random_diagonal, random_spd, random_sym, rng};
use spd_geom::deformed::{bures_wasserstein_metric, sylvester_solve, MetricHandle};
use spd_geom::kernel::{builtin_kernels, catalog_entry, kernel_metric_eval, KernelMap};
use spd_geom::linalg::univariate_differential;
use spd_geom::mixed::{me_kernel, me_metric_eval, MpePair};
use spd_geom::{ScalarFunction, SpdMatrix, SymmetricMatrix};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn trace_formulas(sigma: &SpdMatrix, x: &SymmetricMatrix, y: &SymmetricMatrix) -> Vec<(&'static str, f64)> {
    let s_inv = sigma.as_matrix().clone().try_inverse().unwrap();
    let dlog_x = univariate_differential(&ScalarFunction::log(), sigma, x).unwrap();
    let dlog_y = univariate_differential(&ScalarFunction::log(), sigma, y).unwrap();
    let l = sylvester_solve(sigma, x).unwrap();
    vec![
        ("euclidean", x.frobenius(y)),
        ("log-euclidean", dlog_x.frobenius(&dlog_y)),
        (
            "affine-invariant",
            (&s_inv * x.as_matrix() * &s_inv * y.as_matrix()).trace(),
        ),
        ("bures-wasserstein", 0.5 * l.frobenius(y)),
        ("bogoliubov-kubo-mori", dlog_x.frobenius(y)),
    ]
}

#[test]
fn kernels_match_trace_formulas_on_diagonal_points() {
    let mut r = rng(11);
    for case in 0..100 {
        let n = 2 + case % 3;
        let sigma = random_diagonal(&mut r, n);
        let (x, y) = (random_sym(&mut r, n), random_sym(&mut r, n));
        for (name, expected) in trace_formulas(&sigma, &x, &y) {
            let k = catalog_entry(name).unwrap().kernel;
            let got = kernel_metric_eval(&k, &sigma, &x, &y).unwrap();
            assert!(rel(got, expected) < 1e-9, "{name} case {case}: {got} vs {expected}");
        }
    }
}

#[test]
fn kernels_match_trace_formulas_on_dense_points() {
    let mut r = rng(12);
    for _ in 0..40 {
        let sigma = random_spd(&mut r, 4);
        let (x, y) = (random_sym(&mut r, 4), random_sym(&mut r, 4));
        for (name, expected) in trace_formulas(&sigma, &x, &y) {
            let got = kernel_metric_eval(&catalog_entry(name).unwrap().kernel, &sigma, &x, &y).unwrap();
            assert!(rel(got, expected) < 1e-9, "{name}: {got} vs {expected}");
        }
        let bw = bures_wasserstein_metric(&sigma, &x, &y).unwrap();
        let k = kernel_metric_eval(&KernelMap::bures_wasserstein(), &sigma, &x, &y).unwrap();
        assert!(rel(bw, k) < 1e-9);
        let l = sylvester_solve(&sigma, &x).unwrap();
        let residual = sigma.as_matrix() * l.as_matrix() + l.as_matrix() * sigma.as_matrix() - x.as_matrix();
        assert!(residual.norm() < 1e-10 * (1.0 + x.norm()));
    }
}

#[test]
fn classical_metrics_are_mixed_power_euclidean() {
    let pairs = [
        ("euclidean", (1.0, 1.0)),
        ("log-euclidean", (0.0, 0.0)),
        ("affine-invariant", (1.0, -1.0)),
        ("bogoliubov-kubo-mori", (1.0, 0.0)),
    ];
    let mut r = rng(13);
    for (name, (a, b)) in pairs {
        let m = MpePair::new(a, b).metric().unwrap();
        let kernel = catalog_entry(name).unwrap().kernel;
        for _ in 0..10 {
            let sigma = random_spd(&mut r, 3);
            let (x, y) = (random_sym(&mut r, 3), random_sym(&mut r, 3));
            let via_me = me_metric_eval(&m, &sigma, &x, &y).unwrap();
            let via_kernel = kernel_metric_eval(&kernel, &sigma, &x, &y).unwrap();
            let via_me_kernel = kernel_metric_eval(&me_kernel(&m), &sigma, &x, &y).unwrap();
            assert!(rel(via_me, via_kernel) < 1e-9, "{name}");
            assert!(rel(via_me, via_me_kernel) < 1e-9, "{name}");
        }
    }
}

#[test]
fn deformed_kernels_match_pullback_construction() {
    let handles = vec![
        MetricHandle::power_euclidean(0.5).unwrap(),
        MetricHandle::power_euclidean(-1.5).unwrap(),
        MetricHandle::power_affine(0.7).unwrap(),
        MetricHandle::power_wasserstein(1.5).unwrap(),
        MetricHandle::alpha_procrustes(0.25).unwrap(),
    ];
    let mut r = rng(14);
    for h in &handles {
        for _ in 0..10 {
            let sigma = random_spd(&mut r, 3);
            let (x, y) = (random_sym(&mut r, 3), random_sym(&mut r, 3));
            let direct = h.metric_eval(&sigma, &x, &y).unwrap();
            let built = h.eval_via_construction(&sigma, &x, &y).unwrap();
            assert!(rel(direct, built) < 1e-9, "{}: {direct} vs {built}", h.kernel().name());
        }
    }
}

#[test]
fn catalog_kernels_are_symmetric_and_positive() {
    let samples = [1e-3, 0.2, 1.0, 3.5, 1e3];
    for e in builtin_kernels() {
        for &x in &samples {
            for &y in &samples {
                let (a, b) = (e.kernel.eval(x, y), e.kernel.eval(y, x));
                assert!(a > 0.0 && rel(a, b) < 1e-14, "{}", e.name);
            }
        }
    }
}
