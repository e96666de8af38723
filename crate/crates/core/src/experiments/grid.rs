use rayon::prelude::*;

use super::range::ParamRange;
use super::sampling::{CurvatureSample, DEFAULT_SEED};
use crate::error::{GeomError, Result};
use crate::mixed::{MeGeometry, MpePair};

#[derive(Clone, Debug, PartialEq)]
pub struct GridConfig {
    pub alpha: ParamRange,
    pub beta: ParamRange,
    pub dim: usize,
    pub n_matrices: usize,
    pub n_planes: usize,
    pub seed: u64,
}

impl Default for GridConfig {
    /// `[-2, 2]²` with step 0.05 in dimension 3, 1000 matrices and 1000 planes.
    fn default() -> Self {
        let r = ParamRange {
            lo: -2.0,
            hi: 2.0,
            step: 0.05,
        };
        Self {
            alpha: r,
            beta: r,
            dim: 3,
            n_matrices: 1000,
            n_planes: 1000,
            seed: DEFAULT_SEED,
        }
    }
}

impl GridConfig {
    /// Step 0.25 with 100 matrices and 100 planes.
    pub fn fast() -> Self {
        let r = ParamRange {
            lo: -2.0,
            hi: 2.0,
            step: 0.25,
        };
        Self {
            alpha: r,
            beta: r,
            n_matrices: 100,
            n_planes: 100,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.alpha.validate()?;
        self.beta.validate()?;
        if self.dim < 2 {
            return Err(GeomError::InvalidConfig(format!(
                "dimension must be at least 2, got {}",
                self.dim
            )));
        }
        if self.n_matrices == 0 || self.n_planes == 0 {
            return Err(GeomError::InvalidConfig("sample counts must be positive".into()));
        }
        Ok(())
    }
}

/// Bounds of the sectional curvature of `MPE(alpha, beta)` over the sample.
#[derive(Clone, Debug, PartialEq)]
pub struct GridCell {
    pub alpha: f64,
    pub beta: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    /// `(matrix index, plane index)` attaining the minimum.
    pub argmin: (usize, usize),
    pub argmax: (usize, usize),
    pub n_skipped: usize,
}

fn cell(sample: &CurvatureSample, alpha: f64, beta: f64) -> Result<GridCell> {
    let metric = MpePair::new(alpha, beta).metric()?;
    let mut out = GridCell {
        alpha,
        beta,
        kappa_min: f64::INFINITY,
        kappa_max: f64::NEG_INFINITY,
        argmin: (0, 0),
        argmax: (0, 0),
        n_skipped: 0,
    };
    for (mi, d) in sample.matrices.iter().enumerate() {
        let geom = MeGeometry::diagonal(&metric, d)?;
        for (pi, (x, y)) in sample.planes.iter().enumerate() {
            match geom.sectional_eigen(x, y) {
                Ok(k) => {
                    if k < out.kappa_min {
                        out.kappa_min = k;
                        out.argmin = (mi, pi);
                    }
                    if k > out.kappa_max {
                        out.kappa_max = k;
                        out.argmax = (mi, pi);
                    }
                }
                Err(GeomError::DegeneratePlane { .. }) => out.n_skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    if out.n_skipped == sample.matrices.len() * sample.planes.len() {
        out.kappa_min = f64::NAN;
        out.kappa_max = f64::NAN;
    }
    Ok(out)
}

/// Evaluates every `(α, β)` cell on a precomputed sample; cells are ordered
/// by `α`, then `β`.
pub fn curvature_grid_with_sample(cfg: &GridConfig, sample: &CurvatureSample) -> Result<Vec<GridCell>> {
    cfg.validate()?;
    let alphas = cfg.alpha.values()?;
    let betas = cfg.beta.values()?;
    let pairs: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
        .collect();
    pairs.par_iter().map(|&(a, b)| cell(sample, a, b)).collect()
}

/// Draws the shared sample from `cfg.seed` and evaluates the grid.
pub fn curvature_grid(cfg: &GridConfig) -> Result<Vec<GridCell>> {
    cfg.validate()?;
    let sample = CurvatureSample::generate(cfg.dim, cfg.n_matrices, cfg.n_planes, cfg.seed);
    curvature_grid_with_sample(cfg, &sample)
}
