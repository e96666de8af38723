//! Univariate matrix maps `f(PDP^T) = P diag(f(d)) P^T` and their first two
//! derivatives, all evaluated in the eigenbasis of the base point.

use nalgebra::DMatrix;

use super::divided::DividedDifferenceTable;
use super::matrix::{SpdMatrix, SymmetricMatrix};
use super::scalar::ScalarFunction;
use crate::error::{GeomError, Result};

fn eval_checked(f: &ScalarFunction, x: f64) -> Result<f64> {
    let y = f.value(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(GeomError::DomainError {
            name: f.name().to_string(),
            at: x,
        })
    }
}

/// `f(Σ)`.
pub fn univariate_apply(f: &ScalarFunction, sigma: &SpdMatrix) -> Result<SymmetricMatrix> {
    let values = sigma
        .eigenvalues()
        .iter()
        .map(|&d| eval_checked(f, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(sigma.eig().recompose(&values))
}

/// `f(Σ)` for maps into `(0, ∞)`, keeping the eigenbasis of `Σ`.
pub fn univariate_apply_spd(f: &ScalarFunction, sigma: &SpdMatrix) -> Result<SpdMatrix> {
    let values = sigma
        .eigenvalues()
        .iter()
        .map(|&d| eval_checked(f, d))
        .collect::<Result<Vec<_>>>()?;
    SpdMatrix::from_eigen(sigma.eig().vectors().clone(), values)
}

/// Applies an entrywise eigenbasis weight `w(i, j)` to `X`: `P (w ∘ P^T X P) P^T`.
pub(crate) fn weighted(sigma: &SpdMatrix, x: &SymmetricMatrix, w: impl Fn(usize, usize) -> f64) -> SymmetricMatrix {
    let mut xp = sigma.eig().to_eigenbasis(x);
    let n = xp.nrows();
    for j in 0..n {
        for i in 0..n {
            xp[(i, j)] *= w(i, j);
        }
    }
    sigma.eig().from_eigenbasis(xp)
}

/// `d_Σ f(X)`; in the eigenbasis entry `(i, j)` is scaled by `f[1](d_i, d_j)`.
pub fn univariate_differential(f: &ScalarFunction, sigma: &SpdMatrix, x: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    x.ensure_dim(sigma.dim())?;
    let t = DividedDifferenceTable::new(f, sigma.eigenvalues());
    Ok(weighted(sigma, x, |i, j| t.first(i, j)))
}

/// `(d_Σ f)^{-1}(W)`; requires `f` to be a diffeomorphism so that no
/// divided difference vanishes.
pub fn univariate_differential_inverse(
    f: &ScalarFunction,
    sigma: &SpdMatrix,
    w: &SymmetricMatrix,
) -> Result<SymmetricMatrix> {
    f.require_diffeomorphism()?;
    w.ensure_dim(sigma.dim())?;
    let t = DividedDifferenceTable::new(f, sigma.eigenvalues());
    Ok(weighted(sigma, w, |i, j| 1.0 / t.first(i, j)))
}

/// Eigenbasis form of the Hessian:
/// `[H(X', Y')]_ij = Σ_k f[2](d_i, d_j, d_k) (X'_ik Y'_jk + X'_jk Y'_ik)`.
pub(crate) fn hessian_eigenbasis(t: &DividedDifferenceTable, xp: &DMatrix<f64>, yp: &DMatrix<f64>) -> DMatrix<f64> {
    let n = t.dim();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for k in 0..n {
                s += t.second(i, j, k) * (xp[(i, k)] * yp[(j, k)] + xp[(j, k)] * yp[(i, k)]);
            }
            h[(i, j)] = s;
            h[(j, i)] = s;
        }
    }
    h
}

/// `H_Σ f(X, Y)`, the symmetric bilinear second derivative of the map.
pub fn univariate_hessian(
    f: &ScalarFunction,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    y: &SymmetricMatrix,
) -> Result<SymmetricMatrix> {
    x.ensure_dim(sigma.dim())?;
    y.ensure_dim(sigma.dim())?;
    let t = DividedDifferenceTable::new(f, sigma.eigenvalues());
    let eig = sigma.eig();
    let h = hessian_eigenbasis(&t, &eig.to_eigenbasis(x), &eig.to_eigenbasis(y));
    Ok(eig.from_eigenbasis(h))
}
