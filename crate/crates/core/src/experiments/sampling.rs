use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::SymmetricMatrix;

pub const DEFAULT_SEED: u64 = 42;

/// `diag(exp(g_i - ḡ))` with `g_i` iid standard normal, so the determinant is 1.
pub fn random_unit_det_diagonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mean = g.iter().sum::<f64>() / n as f64;
    g.iter().map(|x| (x - mean).exp()).collect()
}

/// `(A + Aᵀ) / 2` with `A` having iid standard normal entries, drawn row by row.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymmetricMatrix {
    let a: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    let m = DMatrix::from_row_slice(n, n, &a);
    SymmetricMatrix::symmetrized(m)
}

/// The shared `(D, X, Y)` sample of a curvature grid: every diagonal matrix
/// is paired with every plane.
#[derive(Clone, Debug)]
pub struct CurvatureSample {
    pub dim: usize,
    /// Diagonals of the base points.
    pub matrices: Vec<Vec<f64>>,
    pub planes: Vec<(DMatrix<f64>, DMatrix<f64>)>,
}

impl CurvatureSample {
    /// Draws all matrices, then all planes, from one ChaCha8 stream.
    pub fn generate(dim: usize, n_matrices: usize, n_planes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let matrices = (0..n_matrices)
            .map(|_| random_unit_det_diagonal(&mut rng, dim))
            .collect();
        let planes = (0..n_planes)
            .map(|_| {
                let x = random_symmetric(&mut rng, dim).into_matrix();
                let y = random_symmetric(&mut rng, dim).into_matrix();
                (x, y)
            })
            .collect();
        Self { dim, matrices, planes }
    }
}
