//! Kernel metrics `g_Σ(X, Y) = Σ_ij X'_ij Y'_ij / φ(d_i, d_j)`, the catalog of
//! classical O(n)-invariant metrics, cometrics, and a numerical verifier for
//! the symmetric homogeneous mean axioms, applied to the power-Wasserstein
//! family.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{GeomError, Result};
use crate::linalg::{divided_diff_1, ScalarFunction, SpdMatrix, SymmetricMatrix};

pub type Bivariate = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A smooth symmetric positive bivariate function defining a kernel metric.
#[derive(Clone)]
pub struct KernelMap {
    name: String,
    phi: Bivariate,
}

impl fmt::Debug for KernelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KernelMap({})", self.name)
    }
}

/// `(x - y) / (log x - log y)`, continuous at `x = y`.
pub fn logarithmic_mean(x: f64, y: f64) -> f64 {
    1.0 / divided_diff_1(&ScalarFunction::log(), x, y)
}

pub fn arithmetic_mean(x: f64, y: f64) -> f64 {
    0.5 * (x + y)
}

pub fn geometric_mean(x: f64, y: f64) -> f64 {
    (x * y).sqrt()
}

impl KernelMap {
    pub fn new(name: impl Into<String>, phi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            phi: Arc::new(phi),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.phi)(x, y)
    }

    pub fn euclidean() -> Self {
        Self::new("euclidean", |_, _| 1.0)
    }

    pub fn log_euclidean() -> Self {
        Self::new("log-euclidean", |x, y| {
            let m = logarithmic_mean(x, y);
            m * m
        })
    }

    pub fn affine_invariant() -> Self {
        Self::new("affine-invariant", |x, y| x * y)
    }

    pub fn bures_wasserstein() -> Self {
        Self::new("bures-wasserstein", |x, y| 4.0 * arithmetic_mean(x, y))
    }

    pub fn bogoliubov_kubo_mori() -> Self {
        Self::new("bogoliubov-kubo-mori", logarithmic_mean)
    }

    /// Checks symmetry and positivity on the product grid `samples²`.
    pub fn validate(&self, samples: &[f64]) -> Result<()> {
        for &x in samples {
            for &y in samples {
                let a = self.eval(x, y);
                let b = self.eval(y, x);
                if !a.is_finite() || !(a > 0.0) {
                    return Err(GeomError::EvaluationError(format!(
                        "kernel `{}` at ({x}, {y}) = {a}",
                        self.name
                    )));
                }
                if (a - b).abs() > 1e-12 * a {
                    return Err(GeomError::EvaluationError(format!(
                        "kernel `{}` is not symmetric at ({x}, {y})",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `g_Σ(X, Y)` for the kernel metric of `phi`.
pub fn kernel_metric_eval(phi: &KernelMap, sigma: &SpdMatrix, x: &SymmetricMatrix, y: &SymmetricMatrix) -> Result<f64> {
    x.ensure_dim(sigma.dim())?;
    y.ensure_dim(sigma.dim())?;
    let eig = sigma.eig();
    let d = eig.values();
    let xp = eig.to_eigenbasis(x);
    let yp = eig.to_eigenbasis(y);
    let n = d.len();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            s += xp[(i, j)] * yp[(i, j)] / phi.eval(d[i], d[j]);
        }
    }
    Ok(s)
}

/// The kernel of the cometric, `1 / φ`.
pub fn cometric_kernel(phi: &KernelMap) -> KernelMap {
    let inner = phi.phi.clone();
    let name = match phi.name.strip_prefix("co-") {
        Some(base) => base.to_string(),
        None => format!("co-{}", phi.name),
    };
    KernelMap::new(name, move |x, y| 1.0 / inner(x, y))
}

/// `φ(x, y) = a m(x, y)^θ` for a candidate mean `m`.
#[derive(Clone)]
pub struct MeanKernelSpec {
    pub name: String,
    pub mean: Bivariate,
    pub coefficient: f64,
    pub power: f64,
}

impl fmt::Debug for MeanKernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeanKernelSpec")
            .field("name", &self.name)
            .field("coefficient", &self.coefficient)
            .field("power", &self.power)
            .finish()
    }
}

impl MeanKernelSpec {
    pub fn new(
        name: impl Into<String>,
        mean: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        coefficient: f64,
        power: f64,
    ) -> Self {
        Self {
            name: name.into(),
            mean: Arc::new(mean),
            coefficient,
            power,
        }
    }

    pub fn mean(&self, x: f64, y: f64) -> f64 {
        (self.mean)(x, y)
    }

    pub fn kernel(&self) -> KernelMap {
        let m = self.mean.clone();
        let (a, theta) = (self.coefficient, self.power);
        KernelMap::new(self.name.clone(), move |x, y| a * m(x, y).powf(theta))
    }
}

/// A catalog metric with both its kernel and its mean decomposition.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kernel: KernelMap,
    pub mean: MeanKernelSpec,
}

/// Euclidean, log-Euclidean, affine-invariant, Bures-Wasserstein and
/// Bogoliubov-Kubo-Mori metrics.
pub fn builtin_kernels() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "euclidean",
            kernel: KernelMap::euclidean(),
            // any mean works with θ = 0
            mean: MeanKernelSpec::new("euclidean", arithmetic_mean, 1.0, 0.0),
        },
        CatalogEntry {
            name: "log-euclidean",
            kernel: KernelMap::log_euclidean(),
            mean: MeanKernelSpec::new("log-euclidean", logarithmic_mean, 1.0, 2.0),
        },
        CatalogEntry {
            name: "affine-invariant",
            kernel: KernelMap::affine_invariant(),
            mean: MeanKernelSpec::new("affine-invariant", geometric_mean, 1.0, 2.0),
        },
        CatalogEntry {
            name: "bures-wasserstein",
            kernel: KernelMap::bures_wasserstein(),
            mean: MeanKernelSpec::new("bures-wasserstein", arithmetic_mean, 4.0, 1.0),
        },
        CatalogEntry {
            name: "bogoliubov-kubo-mori",
            kernel: KernelMap::bogoliubov_kubo_mori(),
            mean: MeanKernelSpec::new("bogoliubov-kubo-mori", logarithmic_mean, 1.0, 1.0),
        },
    ]
}

/// Looks up a catalog metric by name (`euclidean`, `log-euclidean`,
/// `affine`/`affine-invariant`, `bw`/`bures-wasserstein`, `bkm`/`bogoliubov-kubo-mori`).
pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    let canonical = match name {
        "affine" => "affine-invariant",
        "bw" => "bures-wasserstein",
        "bkm" => "bogoliubov-kubo-mori",
        "le" => "log-euclidean",
        other => other,
    };
    builtin_kernels().into_iter().find(|e| e.name == canonical)
}

/// Mean kernel metrics are geodesically complete exactly when `θ = 2`.
pub fn completeness_of(spec: &MeanKernelSpec) -> bool {
    (spec.power - 2.0).abs() <= 1e-12
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Symmetry,
    Homogeneity,
    Monotonicity,
    Betweenness,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Symmetry => "symmetry",
            Axiom::Homogeneity => "homogeneity",
            Axiom::Monotonicity => "monotonicity",
            Axiom::Betweenness => "betweenness",
        })
    }
}

/// Worst observed breach of one axiom, as a relative magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Violation {
    pub axiom: Axiom,
    pub x: f64,
    pub y: f64,
    pub magnitude: f64,
}

impl Violation {
    /// Larger magnitude wins; ties go to the smaller `x`, then `y`.
    fn worse_than(&self, other: &Violation) -> bool {
        self.magnitude > other.magnitude || (self.magnitude == other.magnitude && (self.x, self.y) < (other.x, other.y))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanCheckReport {
    pub is_mean: bool,
    /// At most one entry per axiom, ordered by axiom.
    pub violations: Vec<Violation>,
}

impl MeanCheckReport {
    pub fn worst(&self) -> Option<&Violation> {
        self.violations
            .iter()
            .fold(None, |acc: Option<&Violation>, v| match acc {
                Some(w) if !v.worse_than(w) => Some(w),
                _ => Some(v),
            })
    }

    pub fn violation(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

/// Sampling plan for [`mean_kernel_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct MeanGrid {
    pub points: usize,
    pub lo: f64,
    pub hi: f64,
    pub scales: Vec<f64>,
    /// Relative step of the one-sided monotonicity differences.
    pub mono_step: f64,
    /// Relative slack before a decrease counts as a monotonicity violation.
    pub mono_tol: f64,
    pub symmetry_tol: f64,
    pub homogeneity_tol: f64,
    pub betweenness_tol: f64,
}

impl Default for MeanGrid {
    fn default() -> Self {
        Self {
            points: 400,
            lo: 1e-3,
            hi: 1e3,
            scales: vec![0.1, 7.0, 100.0],
            mono_step: 1e-4,
            mono_tol: 1e-9,
            symmetry_tol: 1e-12,
            homogeneity_tol: 1e-9,
            betweenness_tol: 1e-10,
        }
    }
}

impl MeanGrid {
    pub fn samples(&self) -> Vec<f64> {
        log_spaced(self.lo, self.hi, self.points)
    }
}

pub(crate) fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

type Worst = [Option<Violation>; 4];

fn record(worst: &mut Worst, v: Violation) {
    let slot = &mut worst[v.axiom as usize];
    match slot {
        Some(w) if !v.worse_than(w) => {}
        _ => *slot = Some(v),
    }
}

fn merge(mut a: Worst, b: Worst) -> Worst {
    for v in b.into_iter().flatten() {
        record(&mut a, v);
    }
    a
}

/// Numerically checks that `m` is a symmetric homogeneous mean:
/// symmetry and betweenness pointwise on the grid, homogeneity for each
/// scale in `grid.scales`, and monotonicity in both arguments through
/// one-sided differences. Reports the worst violation of each axiom.
pub fn mean_kernel_check<M>(m: M, grid: &MeanGrid) -> Result<MeanCheckReport>
where
    M: Fn(f64, f64) -> f64 + Sync,
{
    let g = grid.samples();
    let rows: Vec<Result<Worst>> = g
        .par_iter()
        .map(|&x| {
            let mut worst: Worst = [None; 4];
            let eval = |a: f64, b: f64| -> Result<f64> {
                let v = m(a, b);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(GeomError::EvaluationError(format!("mean at ({a}, {b}) = {v}")))
                }
            };
            for &y in &g {
                let mxy = eval(x, y)?;
                let scale = mxy.abs().max(f64::MIN_POSITIVE);

                let sym = (mxy - eval(y, x)?).abs() / scale;
                if sym > grid.symmetry_tol {
                    record(
                        &mut worst,
                        Violation {
                            axiom: Axiom::Symmetry,
                            x,
                            y,
                            magnitude: sym,
                        },
                    );
                }

                let (lo, hi) = (x.min(y), x.max(y));
                let outside = (lo - mxy).max(mxy - hi).max(0.0) / hi;
                if outside > grid.betweenness_tol {
                    record(
                        &mut worst,
                        Violation {
                            axiom: Axiom::Betweenness,
                            x,
                            y,
                            magnitude: outside,
                        },
                    );
                }

                for &c in &grid.scales {
                    let h = (eval(c * x, c * y)? - c * mxy).abs() / (c * scale);
                    if h > grid.homogeneity_tol {
                        record(
                            &mut worst,
                            Violation {
                                axiom: Axiom::Homogeneity,
                                x,
                                y,
                                magnitude: h,
                            },
                        );
                    }
                }

                let dx = (mxy - eval(x + grid.mono_step * x, y)?) / scale;
                let dy = (mxy - eval(x, y + grid.mono_step * y)?) / scale;
                let drop = dx.max(dy);
                if drop > grid.mono_tol {
                    record(
                        &mut worst,
                        Violation {
                            axiom: Axiom::Monotonicity,
                            x,
                            y,
                            magnitude: drop,
                        },
                    );
                }
            }
            Ok(worst)
        })
        .collect();
    let mut worst: Worst = [None; 4];
    for r in rows {
        worst = merge(worst, r?);
    }
    let violations: Vec<Violation> = worst.into_iter().flatten().collect();
    Ok(MeanCheckReport {
        is_mean: violations.is_empty(),
        violations,
    })
}

/// The mean behind the power-Wasserstein kernel of parameter `p`:
/// `m(x, y) = [((x^p + y^p) / 2) (p (x - y) / (x^p - y^p))²]^{1/(2-p)}`
/// with `φ = 4 m^{2-p}`, i.e. `φ(x, y) = 2 p² (x^p + y^p) ((x - y) / (x^p - y^p))²`.
pub fn power_wasserstein_mean(p: f64) -> Result<MeanKernelSpec> {
    if p == 0.0 || p == 2.0 || !p.is_finite() {
        return Err(GeomError::InvalidPower(p));
    }
    let pow = ScalarFunction::pow(p);
    let exponent = 1.0 / (2.0 - p);
    let mean = move |x: f64, y: f64| {
        // (x - y) / (x^p - y^p) = 1 / pow_p[1](x, y), continuous at x = y
        let q = p / divided_diff_1(&pow, x, y);
        (0.5 * (x.powf(p) + y.powf(p)) * q * q).powf(exponent)
    };
    Ok(MeanKernelSpec::new(
        format!("power-wasserstein({p})"),
        mean,
        4.0,
        2.0 - p,
    ))
}

/// Closed-form power-Wasserstein kernel `2 p² (x^p + y^p) ((x - y) / (x^p - y^p))²`.
pub fn power_wasserstein_kernel(p: f64) -> Result<KernelMap> {
    if p == 0.0 || !p.is_finite() {
        return Err(GeomError::InvalidPower(p));
    }
    let pow = ScalarFunction::pow(p);
    Ok(KernelMap::new(format!("power-wasserstein({p})"), move |x, y| {
        let q = 1.0 / divided_diff_1(&pow, x, y);
        2.0 * p * p * (x.powf(p) + y.powf(p)) * q * q
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScanStatus {
    /// `p ∈ {0, 2}`, where the mean decomposition degenerates.
    Undefined,
    Classified(MeanCheckReport),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub p: f64,
    pub status: ScanStatus,
}

impl ScanRow {
    pub fn is_mean(&self) -> Option<bool> {
        match &self.status {
            ScanStatus::Undefined => None,
            ScanStatus::Classified(r) => Some(r.is_mean),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Bracket `(lo, hi)` around the first failing→passing transition,
    /// refined by bisection.
    pub boundary: Option<(f64, f64)>,
}

pub const BISECTION_STEPS: usize = 30;

/// Parameter values `lo, lo + step, ..., hi`, snapped to a 1e-12 lattice so
/// that exact values such as 0 and 2 are hit.
pub fn parameter_values(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(GeomError::InvalidConfig(format!("range {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|k| ((lo + k as f64 * step) * 1e12).round() / 1e12 + 0.0)
        .collect())
}

pub fn classify_power(p: f64, grid: &MeanGrid) -> Result<ScanStatus> {
    match power_wasserstein_mean(p) {
        Err(GeomError::InvalidPower(_)) => Ok(ScanStatus::Undefined),
        Err(e) => Err(e),
        Ok(spec) => Ok(ScanStatus::Classified(mean_kernel_check(|x, y| spec.mean(x, y), grid)?)),
    }
}

/// Classifies the power-Wasserstein metric over a range of `p` and, when the
/// range contains a failing→passing transition, brackets it by bisection.
pub fn mean_kernel_scan(p_lo: f64, p_hi: f64, step: f64, grid: &MeanGrid) -> Result<ScanReport> {
    let rows = parameter_values(p_lo, p_hi, step)?
        .into_iter()
        .map(|p| {
            Ok(ScanRow {
                p,
                status: classify_power(p, grid)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let defined: Vec<(f64, bool)> = rows.iter().filter_map(|r| r.is_mean().map(|b| (r.p, b))).collect();
    let transition = defined.windows(2).find(|w| !w[0].1 && w[1].1).map(|w| (w[0].0, w[1].0));
    let boundary = match transition {
        Some((mut lo, mut hi)) => {
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                match classify_power(mid, grid)? {
                    ScanStatus::Classified(r) if r.is_mean => hi = mid,
                    ScanStatus::Classified(_) => lo = mid,
                    ScanStatus::Undefined => break,
                }
            }
            Some((lo, hi))
        }
        None => None,
    };
    Ok(ScanReport { rows, boundary })
}
