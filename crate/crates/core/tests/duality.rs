mod common;

use common::{random_spd, random_sym, rng};
use spd_geom::divergence::{divergence, dual_divergence, induced_metric_fd, DivergenceSpec};
use spd_geom::mixed::{me_metric_eval, MpePair};
use spd_geom::ScalarFunction;

const PAIRS: [(f64, f64); 5] = [(1.0, 1.0), (1.0, 0.0), (1.0, -1.0), (0.5, 1.5), (0.0, 0.0)];

#[test]
fn divergences_induce_mixed_power_euclidean_metrics() {
    let mut r = rng(21);
    for (a, b) in PAIRS {
        let spec = DivergenceSpec::ab(a, b);
        let metric = MpePair::new(a, b).metric().unwrap();
        for n in [2, 3] {
            for _ in 0..20 {
                let sigma = random_spd(&mut r, n);
                let (x, y) = (random_sym(&mut r, n), random_sym(&mut r, n));
                let fd = induced_metric_fd(&spec, &sigma, &x, &y).unwrap();
                let exact = me_metric_eval(&metric, &sigma, &x, &y).unwrap();
                let scale = me_metric_eval(&metric, &sigma, &x, &x).unwrap().sqrt()
                    * me_metric_eval(&metric, &sigma, &y, &y).unwrap().sqrt();
                assert!((fd - exact).abs() <= 1e-4 * scale, "({a},{b}) n={n}: {fd} vs {exact}");
            }
        }
    }
}

#[test]
fn closed_form_and_quadrature_agree() {
    let mut r = rng(22);
    for (a, b) in PAIRS {
        let closed = DivergenceSpec::ab(a, b);
        let quad = DivergenceSpec::uv(ScalarFunction::power_or_log(a), ScalarFunction::power_or_log(b));
        for _ in 0..5 {
            let (s, t) = (random_spd(&mut r, 3), random_spd(&mut r, 3));
            let d1 = divergence(&closed, &s, &t).unwrap();
            let d2 = divergence(&quad, &s, &t).unwrap();
            assert!((d1 - d2).abs() <= 1e-8 * (1.0 + d1.abs()), "({a},{b}): {d1} vs {d2}");
        }
    }
}

#[test]
fn divergences_vanish_on_the_diagonal_and_are_positive_off_it() {
    let mut r = rng(23);
    for (a, b) in PAIRS {
        let spec = DivergenceSpec::ab(a, b);
        for _ in 0..10 {
            let (s, t) = (random_spd(&mut r, 3), random_spd(&mut r, 3));
            assert!(divergence(&spec, &s, &s).unwrap().abs() < 1e-10);
            assert!(divergence(&spec, &s, &t).unwrap() > 0.0);
            let d = dual_divergence(&spec, &s, &t).unwrap();
            let swapped = divergence(&spec.dual(), &s, &t).unwrap();
            assert!((d - swapped).abs() <= 1e-10 * (1.0 + d.abs()));
        }
    }
}
