use nalgebra::DMatrix;
use proptest::prelude::*;
use spd_geom::deformed::{deformed_distance, MetricHandle};
use spd_geom::divergence::{divergence, DivergenceSpec};
use spd_geom::mixed::{
    me_curvature, me_metric_eval, mpe_distance_commuting, mpe_geodesic_commuting, mpe_log_commuting, MpePair,
};
use spd_geom::{SpdMatrix, SymmetricMatrix};

const N: usize = 3;

fn entries(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, k)
}

fn sym(v: &[f64]) -> SymmetricMatrix {
    let m = DMatrix::from_row_slice(N, N, v);
    SymmetricMatrix::new((&m + m.transpose()) * 0.5).unwrap()
}

fn spd(v: &[f64]) -> SpdMatrix {
    let m = DMatrix::from_row_slice(N, N, v);
    let s = &m * m.transpose() + DMatrix::identity(N, N) * 0.3;
    SpdMatrix::from_matrix((&s + s.transpose()) * 0.5).unwrap()
}

fn orthogonal(v: &[f64]) -> DMatrix<f64> {
    let m = DMatrix::from_row_slice(N, N, v) + DMatrix::identity(N, N) * 2.0;
    m.qr().q()
}

fn conj(q: &DMatrix<f64>, s: &SymmetricMatrix) -> SymmetricMatrix {
    let m = q * s.as_matrix() * q.transpose();
    SymmetricMatrix::new((&m + m.transpose()) * 0.5).unwrap()
}

fn conj_spd(q: &DMatrix<f64>, s: &SpdMatrix) -> SpdMatrix {
    SpdMatrix::new(conj(q, s.as_sym())).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn pair() -> impl Strategy<Value = MpePair> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| MpePair::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_and_curvature_are_orthogonally_invariant(
        p in pair(), s in entries(9), q in entries(9), x in entries(9), y in entries(9),
    ) {
        let m = p.metric().unwrap();
        let (sigma, q) = (spd(&s), orthogonal(&q));
        let (x, y) = (sym(&x), sym(&y));
        let (qs, qx, qy) = (conj_spd(&q, &sigma), conj(&q, &x), conj(&q, &y));
        let g = me_metric_eval(&m, &sigma, &x, &y).unwrap();
        let gq = me_metric_eval(&m, &qs, &qx, &qy).unwrap();
        prop_assert!(close(g, gq, 1e-9), "{} vs {}", g, gq);
        let r = me_curvature(&m, &sigma, &x, &y, &y, &x).unwrap();
        let rq = me_curvature(&m, &qs, &qx, &qy, &qy, &qx).unwrap();
        prop_assert!(close(r, rq, 1e-8), "{} vs {}", r, rq);
    }

    #[test]
    fn curvature_has_tensor_symmetries(
        p in pair(), s in entries(9), x in entries(9), y in entries(9), z in entries(9), t in entries(9),
    ) {
        let m = p.metric().unwrap();
        let sigma = spd(&s);
        let (x, y, z, t) = (sym(&x), sym(&y), sym(&z), sym(&t));
        let r = |a: &SymmetricMatrix, b: &SymmetricMatrix, c: &SymmetricMatrix, d: &SymmetricMatrix| {
            me_curvature(&m, &sigma, a, b, c, d).unwrap()
        };
        let base = r(&x, &y, &z, &t);
        prop_assert!(close(base, -r(&y, &x, &z, &t), 1e-9));
        prop_assert!(close(base, -r(&x, &y, &t, &z), 1e-9));
        prop_assert!(close(base, r(&z, &t, &x, &y), 1e-9));
        let bianchi = base + r(&y, &z, &x, &t) + r(&z, &x, &y, &t);
        prop_assert!(bianchi.abs() <= 1e-9 * (1.0 + base.abs()), "bianchi {}", bianchi);
    }

    #[test]
    fn divergence_is_orthogonally_invariant(
        a in -1.5f64..1.5, b in -1.5f64..1.5, s in entries(9), l in entries(9), q in entries(9),
    ) {
        let spec = DivergenceSpec::ab(a, b);
        let (sigma, lambda, q) = (spd(&s), spd(&l), orthogonal(&q));
        let d = divergence(&spec, &sigma, &lambda).unwrap();
        let dq = divergence(&spec, &conj_spd(&q, &sigma), &conj_spd(&q, &lambda)).unwrap();
        prop_assert!(d >= -1e-12);
        prop_assert!(close(d, dq, 1e-9), "{} vs {}", d, dq);
    }

    #[test]
    fn commuting_log_and_exp_are_inverse(
        p in pair().prop_filter("α₀ ≠ 0", |p| p.alpha0().abs() > 0.05),
        q in entries(9), ds in prop::collection::vec(0.2f64..5.0, N), dl in prop::collection::vec(0.2f64..5.0, N),
    ) {
        let q = orthogonal(&q);
        let sigma = conj_spd(&q, &SpdMatrix::diagonal(&ds).unwrap());
        let lambda = conj_spd(&q, &SpdMatrix::diagonal(&dl).unwrap());
        let v = mpe_log_commuting(&p, &sigma, &lambda).unwrap();
        let end = mpe_geodesic_commuting(&p, &sigma, &v).unwrap().eval(1.0).unwrap();
        let err = (end.as_matrix() - lambda.as_matrix()).norm();
        prop_assert!(err <= 1e-9 * (1.0 + lambda.as_matrix().norm()), "round trip error {}", err);

        let d = mpe_distance_commuting(&p, &sigma, &lambda).unwrap();
        let d_back = mpe_distance_commuting(&p, &lambda, &sigma).unwrap();
        prop_assert!(close(d, d_back, 1e-12));
        let m = p.metric().unwrap();
        let speed = me_metric_eval(&m, &sigma, &v, &v).unwrap().sqrt();
        prop_assert!(close(d, speed, 1e-9), "distance {} vs initial speed {}", d, speed);
    }

    #[test]
    fn flat_distances_satisfy_triangle_inequality(
        p in prop_oneof![Just(1.0), Just(0.5), Just(-1.0), Just(2.0)],
        a in entries(9), b in entries(9), c in entries(9),
    ) {
        let h = MetricHandle::power_euclidean(p).unwrap();
        let (a, b, c) = (spd(&a), spd(&b), spd(&c));
        let ab = deformed_distance(&h, &a, &b).unwrap();
        let bc = deformed_distance(&h, &b, &c).unwrap();
        let ac = deformed_distance(&h, &a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
    }
}
