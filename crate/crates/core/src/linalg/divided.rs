//! First and second divided differences with stabilized branches near
//! coincident arguments.
//!
//! `f[1](x, y)` uses `f'` at the midpoint when `|x - y| <= DD_SWITCH * max(x, y)`;
//! otherwise the difference quotient (or the function's own cancellation-free
//! quotient when it provides one). `f[2](x, y, z)` divides along the pair with
//! the largest separation; when that separation is below
//! `DD2_SWITCH * max(x, y, z)` it returns `f''(centroid) / 2`, whose error is
//! second order in the spread.

use nalgebra::DMatrix;

use super::scalar::ScalarFunction;

/// Relative separation below which `f[1]` switches to `f'(midpoint)`.
pub const DD_SWITCH: f64 = 1e-7;

/// Relative spread below which `f[2]` switches to `f''(centroid) / 2`.
pub const DD2_SWITCH: f64 = 1e-5;

pub fn divided_diff_1(f: &ScalarFunction, x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == lo {
        return f.first(hi);
    }
    if hi - lo <= DD_SWITCH * hi {
        return f.first(0.5 * (hi + lo));
    }
    f.quotient(hi, lo)
}

pub fn divided_diff_2(f: &ScalarFunction, x: f64, y: f64, z: f64) -> f64 {
    let mut v = [x, y, z];
    v.sort_by(f64::total_cmp);
    let [a, b, c] = v;
    if c - a <= DD2_SWITCH * c {
        return 0.5 * f.second((a + b + c) / 3.0);
    }
    (divided_diff_1(f, b, c) - divided_diff_1(f, b, a)) / (c - a)
}

/// Divided differences of `f` tabulated on a fixed set of eigenvalues.
#[derive(Clone, Debug)]
pub struct DividedDifferenceTable {
    n: usize,
    first: DMatrix<f64>,
    second: Vec<f64>,
}

impl DividedDifferenceTable {
    pub fn new(f: &ScalarFunction, d: &[f64]) -> Self {
        let n = d.len();
        let first = DMatrix::from_fn(n, n, |i, j| divided_diff_1(f, d[i], d[j]));
        let mut second = vec![0.0; n * n * n];
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let w = divided_diff_2(f, d[i], d[j], d[k]);
                    for (p, q, r) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        second[(p * n + q) * n + r] = w;
                    }
                }
            }
        }
        Self { n, first, second }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `f[1](d_i, d_j)`.
    #[inline]
    pub fn first(&self, i: usize, j: usize) -> f64 {
        self.first[(i, j)]
    }

    pub fn first_matrix(&self) -> &DMatrix<f64> {
        &self.first
    }

    /// `f[2](d_i, d_j, d_k)`.
    #[inline]
    pub fn second(&self, i: usize, j: usize, k: usize) -> f64 {
        self.second[(i * self.n + j) * self.n + k]
    }
}
