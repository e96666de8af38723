//! Symmetric eigendecomposition, divided differences and the calculus of
//! univariate matrix maps.

mod divided;
mod matrix;
mod scalar;
mod univariate;

pub use divided::{divided_diff_1, divided_diff_2, DividedDifferenceTable, DD2_SWITCH, DD_SWITCH};
pub use matrix::{sym_eigendecompose, EigenDecomposition, SpdMatrix, SymmetricMatrix, EIG_FLOOR, SYM_TOL};
pub use scalar::{Fn1, Fn2, ScalarFunction};
pub(crate) use univariate::{hessian_eigenbasis, weighted};
pub use univariate::{
    univariate_apply, univariate_apply_spd, univariate_differential, univariate_differential_inverse,
    univariate_hessian,
};
