//! Riemannian and information geometry on symmetric positive definite
//! matrices.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: eigendecomposition, divided differences and univariate
//!   matrix maps with their differentials and Hessians.
//! - [`kernel`]: kernel metrics, the catalog of classical O(n)-invariant
//!   metrics, cometrics and the numerical mean-kernel verifier.
//! - [`deformed`]: pullback ("deformed") metrics, the power families and the
//!   Bures-Wasserstein tensor through the Sylvester equation.
//! - [`mixed`]: balanced and mixed-Euclidean metrics, their connection,
//!   curvature tensor and commuting-case geodesics.
//! - [`divergence`]: (α,β)- and (u,v)-divergences with their potentials.
//! - [`experiments`]: the sectional-curvature grid and mean-kernel scans.

pub mod deformed;
pub mod divergence;
pub mod error;
pub mod experiments;
pub mod kernel;
pub mod linalg;
pub mod mixed;

pub use error::{GeomError, Result};
pub use linalg::{ScalarFunction, SpdMatrix, SymmetricMatrix};
