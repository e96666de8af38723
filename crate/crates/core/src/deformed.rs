//! Deformed metrics: pullbacks `f*g` of a base metric through univariate
//! diffeomorphisms, with closed-form distance, geodesics, logarithm and
//! parallel transport when the base is Euclidean. Also hosts the power
//! families and the Bures-Wasserstein tensor through the Sylvester equation.

use std::fmt;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::kernel::{kernel_metric_eval, KernelMap};
use crate::linalg::{
    divided_diff_1, sym_eigendecompose, univariate_apply, univariate_apply_spd, univariate_differential,
    univariate_differential_inverse, weighted, ScalarFunction, SpdMatrix, SymmetricMatrix,
};

#[derive(Clone, Debug)]
pub enum MetricKind {
    /// A kernel metric with no deformation structure attached.
    Kernel,
    /// Pullback of the Frobenius metric by `map`; flat.
    DeformedEuclidean { map: ScalarFunction },
    /// Pullback of a kernel base metric by `map`.
    Deformed {
        base: Box<MetricHandle>,
        map: ScalarFunction,
    },
    /// Balanced metric of the `u`- and `v`-deformed Euclidean metrics.
    MixedEuclidean { u: ScalarFunction, v: ScalarFunction },
}

/// An O(n)-invariant metric described by its kernel, a positive scale and,
/// when available, how it was built.
///
/// The metric is `scale * Σ_ij X'_ij Y'_ij / kernel(d_i, d_j)`.
#[derive(Clone)]
pub struct MetricHandle {
    kind: MetricKind,
    kernel: KernelMap,
    scale: f64,
}

impl fmt::Debug for MetricHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricHandle")
            .field("kernel", &self.kernel.name())
            .field("scale", &self.scale)
            .field("kind", &self.kind)
            .finish()
    }
}

fn pulled_back_kernel(base: &KernelMap, f: &ScalarFunction) -> KernelMap {
    let (base, f) = (base.clone(), f.clone());
    let name = format!("{}∘{}", base.name(), f.name());
    KernelMap::new(name, move |x, y| {
        let q = divided_diff_1(&f, x, y);
        base.eval(f.value(x), f.value(y)) / (q * q)
    })
}

impl MetricHandle {
    pub fn from_kernel(kernel: KernelMap) -> Self {
        Self {
            kind: MetricKind::Kernel,
            kernel,
            scale: 1.0,
        }
    }

    pub(crate) fn from_parts(kind: MetricKind, kernel: KernelMap, scale: f64) -> Self {
        Self { kind, kernel, scale }
    }

    pub fn euclidean() -> Self {
        Self {
            kind: MetricKind::DeformedEuclidean {
                map: ScalarFunction::identity(),
            },
            kernel: KernelMap::euclidean(),
            scale: 1.0,
        }
    }

    pub fn log_euclidean() -> Self {
        deform_metric(&Self::euclidean(), &ScalarFunction::log()).expect("log is a diffeomorphism")
    }

    pub fn affine_invariant() -> Self {
        Self::from_kernel(KernelMap::affine_invariant())
    }

    pub fn bures_wasserstein() -> Self {
        Self::from_kernel(KernelMap::bures_wasserstein())
    }

    /// `(1/p²) pow_p* g` for a base metric `g`.
    pub fn power_deformation(base: &MetricHandle, p: f64) -> Result<Self> {
        if p == 0.0 || !p.is_finite() {
            return Err(GeomError::InvalidPower(p));
        }
        Ok(deform_metric(base, &ScalarFunction::pow(p))?.with_scale(1.0 / (p * p)))
    }

    pub fn power_euclidean(p: f64) -> Result<Self> {
        Self::power_deformation(&Self::euclidean(), p)
    }

    pub fn power_affine(p: f64) -> Result<Self> {
        Self::power_deformation(&Self::affine_invariant(), p)
    }

    pub fn power_wasserstein(p: f64) -> Result<Self> {
        Self::power_deformation(&Self::bures_wasserstein(), p)
    }

    /// Alpha-Procrustes metric, the power-Wasserstein metric with `p = 2α`.
    pub fn alpha_procrustes(alpha: f64) -> Result<Self> {
        Self::power_wasserstein(2.0 * alpha)
    }

    /// Multiplies the metric by `s > 0`.
    pub fn with_scale(mut self, s: f64) -> Self {
        assert!(s > 0.0 && s.is_finite(), "metric scale must be positive");
        self.scale *= s;
        self
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn kernel(&self) -> &KernelMap {
        &self.kernel
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The kernel with the scale folded in, `kernel / scale`.
    pub fn effective_kernel(&self) -> KernelMap {
        let k = self.kernel.clone();
        let s = self.scale;
        KernelMap::new(format!("{}/{}", k.name(), s), move |x, y| k.eval(x, y) / s)
    }

    /// The diffeomorphism `u` when the metric is a deformed Euclidean metric.
    pub fn flat_map(&self) -> Option<&ScalarFunction> {
        match &self.kind {
            MetricKind::DeformedEuclidean { map } => Some(map),
            _ => None,
        }
    }

    /// `g_Σ(X, Y)` through the kernel.
    pub fn metric_eval(&self, sigma: &SpdMatrix, x: &SymmetricMatrix, y: &SymmetricMatrix) -> Result<f64> {
        Ok(self.scale * kernel_metric_eval(&self.kernel, sigma, x, y)?)
    }

    /// `g_Σ(X, Y)` evaluated by following the construction: the base metric
    /// at `f(Σ)` on `d_Σ f(X)` and `d_Σ f(Y)` for deformed metrics.
    pub fn eval_via_construction(&self, sigma: &SpdMatrix, x: &SymmetricMatrix, y: &SymmetricMatrix) -> Result<f64> {
        match &self.kind {
            MetricKind::Kernel | MetricKind::MixedEuclidean { .. } => self.metric_eval(sigma, x, y),
            MetricKind::DeformedEuclidean { map } => {
                let dx = univariate_differential(map, sigma, x)?;
                let dy = univariate_differential(map, sigma, y)?;
                Ok(self.scale * dx.frobenius(&dy))
            }
            MetricKind::Deformed { base, map } => {
                let fs = univariate_apply_spd(map, sigma)?;
                let dx = univariate_differential(map, sigma, x)?;
                let dy = univariate_differential(map, sigma, y)?;
                Ok(self.scale / base.scale * base.eval_via_construction(&fs, &dx, &dy)?)
            }
        }
    }

    pub fn norm(&self, sigma: &SpdMatrix, x: &SymmetricMatrix) -> Result<f64> {
        Ok(self.metric_eval(sigma, x, x)?.max(0.0).sqrt())
    }

    fn require_flat(&self) -> Result<&ScalarFunction> {
        self.flat_map()
            .ok_or_else(|| GeomError::UnsupportedBase(self.kernel.name().to_string()))
    }
}

/// Pullback `f*g` of `base` by the univariate diffeomorphism `f`.
pub fn deform_metric(base: &MetricHandle, f: &ScalarFunction) -> Result<MetricHandle> {
    if !f.is_diffeomorphism() {
        return Err(GeomError::NotDiffeomorphism(f.name().to_string()));
    }
    let (kind, kernel) = match &base.kind {
        MetricKind::DeformedEuclidean { map } => {
            let u = ScalarFunction::compose(map, f);
            let kernel = pulled_back_kernel(&base.kernel, f);
            (MetricKind::DeformedEuclidean { map: u }, kernel)
        }
        MetricKind::Deformed { base: inner, map } => {
            let g = ScalarFunction::compose(map, f);
            let kernel = pulled_back_kernel(&base.kernel, f);
            (
                MetricKind::Deformed {
                    base: inner.clone(),
                    map: g,
                },
                kernel,
            )
        }
        MetricKind::Kernel | MetricKind::MixedEuclidean { .. } => (
            MetricKind::Deformed {
                base: Box::new(base.clone()),
                map: f.clone(),
            },
            pulled_back_kernel(&base.kernel, f),
        ),
    };
    Ok(MetricHandle {
        kind,
        kernel,
        scale: base.scale,
    })
}

/// `√scale ‖u(Σ) - u(Λ)‖` for a deformed Euclidean metric.
pub fn deformed_distance(handle: &MetricHandle, sigma: &SpdMatrix, lambda: &SpdMatrix) -> Result<f64> {
    let u = handle.require_flat()?;
    lambda.as_sym().ensure_dim(sigma.dim())?;
    let a = univariate_apply(u, sigma)?;
    let b = univariate_apply(u, lambda)?;
    Ok(handle.scale.sqrt() * (&a - &b).norm())
}

pub type CurveFn = Arc<dyn Fn(f64) -> Result<SpdMatrix> + Send + Sync>;

/// A geodesic `t ↦ γ(t)` defined on the open interval `domain`.
#[derive(Clone)]
pub struct GeodesicCurve {
    evaluator: CurveFn,
    domain: (f64, f64),
}

impl fmt::Debug for GeodesicCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeodesicCurve(domain = {:?})", self.domain)
    }
}

impl GeodesicCurve {
    pub fn new(domain: (f64, f64), evaluator: impl Fn(f64) -> Result<SpdMatrix> + Send + Sync + 'static) -> Self {
        Self {
            evaluator: Arc::new(evaluator),
            domain,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.domain.0 && t < self.domain.1
    }

    pub fn eval(&self, t: f64) -> Result<SpdMatrix> {
        if !self.contains(t) {
            return Err(GeomError::DomainExit {
                t,
                lo: self.domain.0,
                hi: self.domain.1,
            });
        }
        (self.evaluator)(t)
    }
}

fn spectrum_inside(u: &ScalarFunction, w0: &SymmetricMatrix, v: &SymmetricMatrix, t: f64) -> bool {
    let m = w0 + &(v * t);
    match sym_eigendecompose(&m) {
        Ok(e) => e.values().iter().all(|&y| u.in_image(y)),
        Err(_) => false,
    }
}

/// Largest `s` along `direction` (±1) with `w0 + s v` spectrally inside the
/// image of `u`, or infinity when no exit is found.
fn domain_end(u: &ScalarFunction, w0: &SymmetricMatrix, v: &SymmetricMatrix, direction: f64) -> f64 {
    let inside = |s: f64| spectrum_inside(u, w0, v, direction * s);
    let mut good = 0.0;
    let mut bad = 1.0;
    while inside(bad) {
        good = bad;
        bad *= 2.0;
        if bad > 1e18 {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (good + bad);
        if mid <= good || mid >= bad {
            break;
        }
        if inside(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// `t ↦ u⁻¹(u(Σ) + t d_Σu(X))` on the interval where the argument stays in
/// the image of `u`.
pub fn deformed_geodesic(handle: &MetricHandle, sigma: &SpdMatrix, x: &SymmetricMatrix) -> Result<GeodesicCurve> {
    let u = handle.require_flat()?.clone();
    if !u.has_inverse() {
        return Err(GeomError::MissingInverse(u.name().to_string()));
    }
    x.ensure_dim(sigma.dim())?;
    let w0 = univariate_apply(&u, sigma)?;
    let v = univariate_differential(&u, sigma, x)?;
    let domain = if v.max_abs() == 0.0 {
        (f64::NEG_INFINITY, f64::INFINITY)
    } else {
        (-domain_end(&u, &w0, &v, -1.0), domain_end(&u, &w0, &v, 1.0))
    };
    let (lo, hi) = domain;
    Ok(GeodesicCurve::new(domain, move |t| {
        let m = &w0 + &(&v * t);
        let e = sym_eigendecompose(&m)?;
        let values = e
            .values()
            .iter()
            .map(|&y| {
                if u.in_image(y) {
                    u.inverse(y)
                } else {
                    Err(GeomError::DomainExit { t, lo, hi })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SpdMatrix::from_eigen(e.vectors().clone(), values)
    }))
}

/// `(d_Σu)⁻¹(u(Λ) - u(Σ))`.
pub fn deformed_log(handle: &MetricHandle, sigma: &SpdMatrix, lambda: &SpdMatrix) -> Result<SymmetricMatrix> {
    let u = handle.require_flat()?;
    lambda.as_sym().ensure_dim(sigma.dim())?;
    let diff = &univariate_apply(u, lambda)? - &univariate_apply(u, sigma)?;
    univariate_differential_inverse(u, sigma, &diff)
}

/// `(d_Λu)⁻¹(d_Σu(X))`; curve independent since the metric is flat.
pub fn deformed_parallel_transport(
    handle: &MetricHandle,
    sigma: &SpdMatrix,
    lambda: &SpdMatrix,
    x: &SymmetricMatrix,
) -> Result<SymmetricMatrix> {
    let u = handle.require_flat()?;
    lambda.as_sym().ensure_dim(sigma.dim())?;
    univariate_differential_inverse(u, lambda, &univariate_differential(u, sigma, x)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitRow {
    pub p: f64,
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    /// `g_I(d_Σlog(X), d_Σlog(X))` for the base metric.
    pub limit: f64,
    /// Log-log slope of the error between the last two rows.
    pub rate: Option<f64>,
}

/// Evaluates `(1/p²) g_{Σ^p}(d_Σpow_p(X), d_Σpow_p(X))` along `ps` and compares
/// with the `p → 0` limit.
pub fn power_family_limit_check(
    base: &MetricHandle,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    ps: &[f64],
) -> Result<LimitReport> {
    let dlog = univariate_differential(&ScalarFunction::log(), sigma, x)?;
    let limit = base.metric_eval(&SpdMatrix::identity(sigma.dim()), &dlog, &dlog)?;
    let rows = ps
        .iter()
        .map(|&p| {
            let pow = ScalarFunction::pow(p);
            let sp = univariate_apply_spd(&pow, sigma)?;
            let dx = univariate_differential(&pow, sigma, x)?;
            let value = base.metric_eval(&sp, &dx, &dx)? / (p * p);
            Ok(LimitRow {
                p,
                value,
                error: (value - limit).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rate = match rows.as_slice() {
        [.., a, b] if a.error > 0.0 && b.error > 0.0 && a.p != b.p => {
            Some((a.error / b.error).ln() / (a.p.abs() / b.p.abs()).ln())
        }
        _ => None,
    };
    Ok(LimitReport { rows, limit, rate })
}

/// The solution `S` of `Σ S + S Σ = X`.
pub fn sylvester_solve(sigma: &SpdMatrix, x: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    x.ensure_dim(sigma.dim())?;
    let d = sigma.eigenvalues();
    Ok(weighted(sigma, x, |i, j| 1.0 / (d[i] + d[j])))
}

/// Bures-Wasserstein metric `tr(Σ S_Σ(X) S_Σ(Y))`, symmetrized.
pub fn bures_wasserstein_metric(sigma: &SpdMatrix, x: &SymmetricMatrix, y: &SymmetricMatrix) -> Result<f64> {
    let sx = sylvester_solve(sigma, x)?;
    let sy = sylvester_solve(sigma, y)?;
    let s = sigma.as_matrix();
    let a = (s * sx.as_matrix() * sy.as_matrix()).trace();
    let b = (s * sy.as_matrix() * sx.as_matrix()).trace();
    Ok(0.5 * (a + b))
}
