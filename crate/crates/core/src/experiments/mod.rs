//! Monte-Carlo and scanning experiments: bounds of the sectional curvature
//! of `MPE(α, β)` over an `(α, β)` grid, and the classification of
//! power-Wasserstein metrics as mean kernel metrics.

mod grid;
mod range;
mod sampling;

pub use grid::{curvature_grid, curvature_grid_with_sample, GridCell, GridConfig};
pub use range::ParamRange;
pub use sampling::{random_symmetric, random_unit_det_diagonal, CurvatureSample, DEFAULT_SEED};
