//! Mixed-Euclidean metrics `ME(u, v)`, the balanced metrics of two deformed
//! Euclidean metrics, and the mixed-power-Euclidean family `MPE(α, β)`.
//!
//! In the eigenbasis `Σ = P diag(d) Pᵀ`, with `u_ij = u[1](d_i, d_j)` and
//! `u_ijk = u[2](d_i, d_j, d_k)`:
//!
//! * metric: `g(X, Y) = N Σ_ij u_ij v_ij X'_ij Y'_ij`, `N = 1 / (u'(1) v'(1))`;
//! * connection: `Γ(X, Y) = ½ ((d u)⁻¹ H u(X, Y) + (d v)⁻¹ H v(X, Y))`;
//! * curvature: `R(X, Y, Z, T) = N Σ ρ_ijkl (X'_ij Y'_jk Z'_kl T'_li - Y'_ij X'_jk Z'_kl T'_li
//!   + X'_ij Z'_jk Y'_kl T'_li - Y'_ij Z'_jk X'_kl T'_li)` with
//!   `ρ_ijkl = A_ijl A_kjl / (2 u_jl v_jl)` and `A_ijl = u_ij v_ijl - v_ij u_ijl`,
//!   under the convention `R(X, Y, Z, T) = -g(R(X, Y) Z, T)`.
//!
//! The curvature sum factorizes over `(j, l)`, so it is evaluated in `O(n³)`
//! without materializing `ρ`.

use nalgebra::DMatrix;

use crate::deformed::{
    deform_metric, deformed_distance, deformed_geodesic, deformed_log, deformed_parallel_transport, GeodesicCurve,
    MetricHandle, MetricKind,
};
use crate::error::{GeomError, Result};
use crate::kernel::{log_spaced, KernelMap};
use crate::linalg::{
    divided_diff_1, hessian_eigenbasis, DividedDifferenceTable, EigenDecomposition, ScalarFunction, SpdMatrix,
    SymmetricMatrix,
};

pub const COMMUTE_TOL: f64 = 1e-10;
pub const SEC_DENOM_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct MixedEuclideanMetric {
    u: ScalarFunction,
    v: ScalarFunction,
    normalizer: f64,
}

impl MixedEuclideanMetric {
    pub fn new(u: ScalarFunction, v: ScalarFunction) -> Result<Self> {
        u.require_diffeomorphism()?;
        v.require_diffeomorphism()?;
        let normalizer = 1.0 / (u.first(1.0) * v.first(1.0));
        if !normalizer.is_finite() || normalizer == 0.0 {
            return Err(GeomError::InvalidPair(format!(
                "u'(1) v'(1) must be finite and nonzero for ({}, {})",
                u.name(),
                v.name()
            )));
        }
        let grid = log_spaced(1e-2, 1e2, 15);
        for &x in &grid {
            for &y in &grid {
                let c = normalizer * divided_diff_1(&u, x, y) * divided_diff_1(&v, x, y);
                if !(c > 0.0) || !c.is_finite() {
                    return Err(GeomError::InvalidPair(format!(
                        "coefficient of ({}, {}) is not positive at ({x}, {y})",
                        u.name(),
                        v.name()
                    )));
                }
            }
        }
        Ok(Self { u, v, normalizer })
    }

    pub fn u(&self) -> &ScalarFunction {
        &self.u
    }

    pub fn v(&self) -> &ScalarFunction {
        &self.v
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// The same metric with `u` and `v` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            u: self.v.clone(),
            v: self.u.clone(),
            normalizer: self.normalizer,
        }
    }

    pub fn handle(&self) -> MetricHandle {
        MetricHandle::from_parts(
            MetricKind::MixedEuclidean {
                u: self.u.clone(),
                v: self.v.clone(),
            },
            me_kernel(self),
            1.0,
        )
    }

    /// Geometric data at `Σ` reused across tangent vectors.
    pub fn at(&self, sigma: &SpdMatrix) -> MeGeometry {
        MeGeometry::new(self, sigma)
    }
}

/// `MPE(α, β) = ME(F_α, F_β)` with `F_α = pow_α` for `α ≠ 0` and `F_0 = log`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpePair {
    pub alpha: f64,
    pub beta: f64,
}

impl MpePair {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn u(&self) -> ScalarFunction {
        ScalarFunction::power_or_log(self.alpha)
    }

    pub fn v(&self) -> ScalarFunction {
        ScalarFunction::power_or_log(self.beta)
    }

    pub fn metric(&self) -> Result<MixedEuclideanMetric> {
        MixedEuclideanMetric::new(self.u(), self.v())
    }

    /// `(α + β) / 2`.
    pub fn alpha0(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }
}

/// `φ_{u,v} = √(φ_u φ_v)` with `φ_u = (u'(1) / u[1])²`.
pub fn me_kernel(m: &MixedEuclideanMetric) -> KernelMap {
    let (u, v) = (m.u.clone(), m.v.clone());
    let (u1, v1) = (u.first(1.0), v.first(1.0));
    let name = format!("me({}, {})", u.name(), v.name());
    KernelMap::new(name, move |x, y| {
        let pu = u1 / divided_diff_1(&u, x, y);
        let pv = v1 / divided_diff_1(&v, x, y);
        (pu * pu * pv * pv).sqrt()
    })
}

/// Eigenbasis data of `ME(u, v)` at one base point.
#[derive(Clone, Debug)]
pub struct MeGeometry {
    n: usize,
    eig: EigenDecomposition,
    normalizer: f64,
    u1: DMatrix<f64>,
    v1: DMatrix<f64>,
    u_table: DividedDifferenceTable,
    v_table: DividedDifferenceTable,
    /// `N u_ij v_ij`.
    weight: DMatrix<f64>,
    /// `A_ijl` at `(i * n + j) * n + l`.
    a: Vec<f64>,
    /// `1 / (2 u_jl v_jl)`.
    c: DMatrix<f64>,
}

impl MeGeometry {
    pub fn new(m: &MixedEuclideanMetric, sigma: &SpdMatrix) -> Self {
        Self::build(m, sigma.eig().clone())
    }

    /// Geometry at `diag(d)` in the given coordinate order, so tangent
    /// vectors need no rotation. Entries of `d` must be positive.
    pub fn diagonal(m: &MixedEuclideanMetric, d: &[f64]) -> Result<Self> {
        if d.is_empty() || d.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            let min = d.iter().copied().fold(f64::INFINITY, f64::min);
            return Err(GeomError::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(Self::build(m, EigenDecomposition::diagonal_unsorted(d)))
    }

    fn build(m: &MixedEuclideanMetric, eig: EigenDecomposition) -> Self {
        let d = eig.values();
        let n = d.len();
        let ut = DividedDifferenceTable::new(&m.u, d);
        let vt = DividedDifferenceTable::new(&m.v, d);
        let u1 = ut.first_matrix().clone();
        let v1 = vt.first_matrix().clone();
        let weight = u1.component_mul(&v1) * m.normalizer;
        let mut a = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    a[(i * n + j) * n + l] = u1[(i, j)] * vt.second(i, j, l) - v1[(i, j)] * ut.second(i, j, l);
                }
            }
        }
        let c = DMatrix::from_fn(n, n, |j, l| 0.5 / (u1[(j, l)] * v1[(j, l)]));
        Self {
            n,
            eig,
            normalizer: m.normalizer,
            u1,
            v1,
            u_table: ut,
            v_table: vt,
            weight,
            a,
            c,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eig(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn to_eigenbasis(&self, x: &SymmetricMatrix) -> Result<DMatrix<f64>> {
        x.ensure_dim(self.n)?;
        Ok(self.eig.to_eigenbasis(x))
    }

    /// Metric on eigenbasis components.
    pub fn metric_eigen(&self, xp: &DMatrix<f64>, yp: &DMatrix<f64>) -> f64 {
        let mut s = 0.0;
        for j in 0..self.n {
            for i in 0..self.n {
                s += self.weight[(i, j)] * xp[(i, j)] * yp[(i, j)];
            }
        }
        s
    }

    #[inline]
    fn a(&self, i: usize, j: usize, l: usize) -> f64 {
        self.a[(i * self.n + j) * self.n + l]
    }

    /// `Σ_ijkl ρ_ijkl P_ij Q_jk S_kl T_li`.
    fn chain(&self, p: &DMatrix<f64>, q: &DMatrix<f64>, s: &DMatrix<f64>, t: &DMatrix<f64>) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for j in 0..n {
            for l in 0..n {
                let mut left = 0.0;
                let mut right = 0.0;
                for i in 0..n {
                    left += self.a(i, j, l) * p[(i, j)] * t[(l, i)];
                    right += self.a(i, j, l) * q[(j, i)] * s[(i, l)];
                }
                total += self.c[(j, l)] * left * right;
            }
        }
        total
    }

    /// Curvature on eigenbasis components.
    pub fn curvature_eigen(&self, x: &DMatrix<f64>, y: &DMatrix<f64>, z: &DMatrix<f64>, t: &DMatrix<f64>) -> f64 {
        self.normalizer
            * (self.chain(x, y, z, t) - self.chain(y, x, z, t) + self.chain(x, z, y, t) - self.chain(y, z, x, t))
    }

    /// Sectional curvature of the plane spanned by eigenbasis components.
    pub fn sectional_eigen(&self, x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<f64> {
        let gxx = self.metric_eigen(x, x);
        let gyy = self.metric_eigen(y, y);
        let gxy = self.metric_eigen(x, y);
        let gg = gxx * gyy;
        let denom = gg - gxy * gxy;
        if !(denom > SEC_DENOM_FLOOR * gg) {
            return Err(GeomError::DegeneratePlane { gram: denom });
        }
        Ok(self.curvature_eigen(x, y, x, y) / denom)
    }

    pub fn metric(&self, x: &SymmetricMatrix, y: &SymmetricMatrix) -> Result<f64> {
        Ok(self.metric_eigen(&self.to_eigenbasis(x)?, &self.to_eigenbasis(y)?))
    }

    pub fn curvature(
        &self,
        x: &SymmetricMatrix,
        y: &SymmetricMatrix,
        z: &SymmetricMatrix,
        t: &SymmetricMatrix,
    ) -> Result<f64> {
        Ok(self.curvature_eigen(
            &self.to_eigenbasis(x)?,
            &self.to_eigenbasis(y)?,
            &self.to_eigenbasis(z)?,
            &self.to_eigenbasis(t)?,
        ))
    }

    pub fn sectional(&self, x: &SymmetricMatrix, y: &SymmetricMatrix) -> Result<f64> {
        self.sectional_eigen(&self.to_eigenbasis(x)?, &self.to_eigenbasis(y)?)
    }

    pub fn connection(&self, x: &SymmetricMatrix, y: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        let xp = self.to_eigenbasis(x)?;
        let yp = self.to_eigenbasis(y)?;
        let hu = hessian_eigenbasis(&self.u_table, &xp, &yp);
        let hv = hessian_eigenbasis(&self.v_table, &xp, &yp);
        let g = DMatrix::from_fn(self.n, self.n, |i, j| {
            0.5 * (hu[(i, j)] / self.u1[(i, j)] + hv[(i, j)] / self.v1[(i, j)])
        });
        Ok(self.eig.from_eigenbasis(g))
    }
}

/// Eigenbasis curvature coefficients `ρ_ijkl`, fully tabulated.
#[derive(Clone, Debug)]
pub struct CurvatureCoefficients {
    d: Vec<f64>,
    rho: Vec<f64>,
}

impl CurvatureCoefficients {
    pub fn new(m: &MixedEuclideanMetric, sigma: &SpdMatrix) -> Self {
        let g = m.at(sigma);
        let n = g.n;
        let mut rho = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        rho[((i * n + j) * n + k) * n + l] = g.c[(j, l)] * g.a(i, j, l) * g.a(k, j, l);
                    }
                }
            }
        }
        Self {
            d: sigma.eigenvalues().to_vec(),
            rho,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.d
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.d.len();
        self.rho[((i * n + j) * n + k) * n + l]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.rho
    }
}

/// `⟨Π⁺_{Σ→I} X, Π⁻_{Σ→I} Y⟩` for the flat transports of the `u`- and
/// `v`-deformed Euclidean metrics.
pub fn balanced_form(
    u: &ScalarFunction,
    v: &ScalarFunction,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    y: &SymmetricMatrix,
) -> Result<f64> {
    let hu = deform_metric(&MetricHandle::euclidean(), u)?;
    let hv = deform_metric(&MetricHandle::euclidean(), v)?;
    let id = SpdMatrix::identity(sigma.dim());
    let px = deformed_parallel_transport(&hu, sigma, &id, x)?;
    let py = deformed_parallel_transport(&hv, sigma, &id, y)?;
    Ok(px.frobenius(&py))
}

pub fn me_metric_eval(
    m: &MixedEuclideanMetric,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    y: &SymmetricMatrix,
) -> Result<f64> {
    m.at(sigma).metric(x, y)
}

/// The Christoffel term `Γ_Σ(X, Y)` of the Levi-Civita connection.
pub fn me_connection(
    m: &MixedEuclideanMetric,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    y: &SymmetricMatrix,
) -> Result<SymmetricMatrix> {
    m.at(sigma).connection(x, y)
}

pub fn me_curvature(
    m: &MixedEuclideanMetric,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    y: &SymmetricMatrix,
    z: &SymmetricMatrix,
    t: &SymmetricMatrix,
) -> Result<f64> {
    m.at(sigma).curvature(x, y, z, t)
}

pub fn sectional_curvature(
    m: &MixedEuclideanMetric,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    y: &SymmetricMatrix,
) -> Result<f64> {
    m.at(sigma).sectional(x, y)
}

/// `¼ [(ln|v'/u'|)'(1)]²`, the factor relating the curvature at the identity
/// to `½ tr(XYZT - YXZT)`.
pub fn identity_curvature_factor(m: &MixedEuclideanMetric) -> f64 {
    let c = m.v.second(1.0) / m.v.first(1.0) - m.u.second(1.0) / m.u.first(1.0);
    0.25 * c * c
}

fn commuting_handle(pair: &MpePair) -> Result<MetricHandle> {
    let a0 = pair.alpha0();
    if a0 == 0.0 {
        return Err(GeomError::InvalidPair(format!(
            "MPE({}, {}) has α + β = 0",
            pair.alpha, pair.beta
        )));
    }
    MetricHandle::power_euclidean(a0)
}

fn ensure_commuting(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<()> {
    b.ensure_dim(a.dim())?;
    let c = a.commutator_norm(b);
    let tol = COMMUTE_TOL * a.norm() * b.norm();
    if c > tol {
        return Err(GeomError::NotCommuting {
            commutator: c,
            tolerance: tol,
        });
    }
    Ok(())
}

/// `t ↦ (Σ^{α₀} + t d_Σpow_{α₀}(V))^{1/α₀}` for `V` commuting with `Σ`.
pub fn mpe_geodesic_commuting(pair: &MpePair, sigma: &SpdMatrix, v: &SymmetricMatrix) -> Result<GeodesicCurve> {
    let h = commuting_handle(pair)?;
    ensure_commuting(sigma.as_sym(), v)?;
    deformed_geodesic(&h, sigma, v)
}

/// `(d_Σpow_{α₀})⁻¹(Λ^{α₀} - Σ^{α₀})` for commuting `Σ`, `Λ`.
pub fn mpe_log_commuting(pair: &MpePair, sigma: &SpdMatrix, lambda: &SpdMatrix) -> Result<SymmetricMatrix> {
    let h = commuting_handle(pair)?;
    ensure_commuting(sigma.as_sym(), lambda.as_sym())?;
    deformed_log(&h, sigma, lambda)
}

/// `(1/|α₀|) ‖Λ^{α₀} - Σ^{α₀}‖` for commuting `Σ`, `Λ`.
pub fn mpe_distance_commuting(pair: &MpePair, sigma: &SpdMatrix, lambda: &SpdMatrix) -> Result<f64> {
    let h = commuting_handle(pair)?;
    ensure_commuting(sigma.as_sym(), lambda.as_sym())?;
    deformed_distance(&h, sigma, lambda)
}
