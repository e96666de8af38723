#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spd_geom::mixed::{me_connection, me_metric_eval, MixedEuclideanMetric};
use spd_geom::{SpdMatrix, SymmetricMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> SymmetricMatrix {
    let a: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    let m = nalgebra::DMatrix::from_row_slice(n, n, &a);
    SymmetricMatrix::new((&m + m.transpose()) * 0.5).unwrap()
}

pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> SpdMatrix {
    let a: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    let m = nalgebra::DMatrix::from_row_slice(n, n, &a);
    let s = &m * m.transpose() / n as f64 + nalgebra::DMatrix::identity(n, n) * 0.2;
    SpdMatrix::from_matrix((&s + s.transpose()) * 0.5).unwrap()
}

pub fn random_diagonal(rng: &mut ChaCha8Rng, n: usize) -> SpdMatrix {
    let d: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal).exp()).collect();
    SpdMatrix::diagonal(&d).unwrap()
}

/// `R(X, Y, Z, T) = -g(R(X, Y) Z, T)` with `R(X, Y) Z = ∇_X ∇_Y Z - ∇_Y ∇_X Z`
/// for constant coordinate fields, the derivatives of the Christoffel term
/// taken by central differences.
pub fn fd_curvature(
    m: &MixedEuclideanMetric,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    y: &SymmetricMatrix,
    z: &SymmetricMatrix,
    t: &SymmetricMatrix,
) -> f64 {
    let gamma = |s: &SpdMatrix, a: &SymmetricMatrix, b: &SymmetricMatrix| me_connection(m, s, a, b).unwrap();
    let deriv = |dir: &SymmetricMatrix, a: &SymmetricMatrix, b: &SymmetricMatrix| {
        let h = 1e-4 * sigma.min_eigenvalue() / dir.norm();
        let plus = sigma.try_add(&dir.scale(h)).unwrap();
        let minus = sigma.try_add(&dir.scale(-h)).unwrap();
        (&gamma(&plus, a, b) - &gamma(&minus, a, b)).scale(0.5 / h)
    };
    let gyz = gamma(sigma, y, z);
    let gxz = gamma(sigma, x, z);
    let r = &(&deriv(x, y, z) - &deriv(y, x, z)) + &(&gamma(sigma, x, &gyz) - &gamma(sigma, y, &gxz));
    -me_metric_eval(m, sigma, &r, t).unwrap()
}
