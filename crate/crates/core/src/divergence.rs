//! `(α, β)`- and `(u, v)`-divergences, their potentials, and a finite
//! difference check that the divergence induces the Mixed-Euclidean metric.
//!
//! Divergences are normalized by `1 / (u'(1) v'(1))`, so that
//! `D(Σ, Σ') = ψ(Σ) + φ(Σ') - N tr(u(Σ) v(Σ'))` with `ψ(Σ) = N Σ_i h(d_i)`,
//! `h' = v u'`, and `φ = N tr(u v) - ψ`.

use std::fmt;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::linalg::{univariate_apply, Fn1, ScalarFunction, SpdMatrix, SymmetricMatrix};

#[derive(Clone)]
pub enum DivergenceSpec {
    Ab {
        alpha: f64,
        beta: f64,
    },
    Uv {
        u: ScalarFunction,
        v: ScalarFunction,
        /// Antiderivative of `v u'`; integrated numerically when absent.
        h: Option<Fn1>,
    },
}

impl fmt::Debug for DivergenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergenceSpec::Ab { alpha, beta } => write!(f, "Ab({alpha}, {beta})"),
            DivergenceSpec::Uv { u, v, h } => {
                write!(f, "Uv({}, {}, potential: {})", u.name(), v.name(), h.is_some())
            }
        }
    }
}

impl DivergenceSpec {
    pub fn ab(alpha: f64, beta: f64) -> Self {
        DivergenceSpec::Ab { alpha, beta }
    }

    pub fn uv(u: ScalarFunction, v: ScalarFunction) -> Self {
        DivergenceSpec::Uv { u, v, h: None }
    }

    /// A `(u, v)` divergence with a closed-form antiderivative `h` of `v u'`,
    /// checked against the integrand on a sample grid.
    pub fn uv_with_potential(
        u: ScalarFunction,
        v: ScalarFunction,
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let h: Fn1 = Arc::new(h);
        for k in 0..40 {
            let x = (-3.0 + 6.0 * k as f64 / 39.0_f64).exp();
            let step = 1e-5 * x;
            let fd = (h(x + step) - h(x - step)) / (2.0 * step);
            let target = v.value(x) * u.first(x);
            if (fd - target).abs() > 1e-6 * (1.0 + target.abs()) {
                return Err(GeomError::EvaluationError(format!(
                    "potential derivative at {x}: {fd} vs v u' = {target}"
                )));
            }
        }
        Ok(DivergenceSpec::Uv { u, v, h: Some(h) })
    }

    /// The pair of coordinate maps `(u, v)`.
    pub fn maps(&self) -> (ScalarFunction, ScalarFunction) {
        match self {
            DivergenceSpec::Ab { alpha, beta } => (
                ScalarFunction::power_or_log(*alpha),
                ScalarFunction::power_or_log(*beta),
            ),
            DivergenceSpec::Uv { u, v, .. } => (u.clone(), v.clone()),
        }
    }

    /// The dual divergence `(Σ, Σ') ↦ D(Σ', Σ)`.
    pub fn dual(&self) -> Self {
        match self {
            DivergenceSpec::Ab { alpha, beta } => DivergenceSpec::ab(*beta, *alpha),
            DivergenceSpec::Uv { u, v, .. } => DivergenceSpec::uv(v.clone(), u.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialValue {
    pub psi: f64,
    pub phi: f64,
}

fn check_dims(a: &SpdMatrix, b: &SpdMatrix) -> Result<()> {
    b.as_sym().ensure_dim(a.dim())
}

fn apply(f: &ScalarFunction, s: &SpdMatrix) -> Result<SymmetricMatrix> {
    univariate_apply(f, s)
}

fn trace_map(s: &SpdMatrix, f: impl Fn(f64) -> f64) -> f64 {
    s.eigenvalues().iter().map(|&d| f(d)).sum()
}

fn check_pair(alpha: f64, beta: f64) -> Result<()> {
    if alpha.is_finite() && beta.is_finite() {
        Ok(())
    } else {
        Err(GeomError::InvalidPair(format!("({alpha}, {beta})")))
    }
}

/// The `(α, β)`-divergence `D^{α,β}(Σ | Σ')`.
pub fn ab_divergence(alpha: f64, beta: f64, sigma: &SpdMatrix, sigma2: &SpdMatrix) -> Result<f64> {
    check_pair(alpha, beta)?;
    check_dims(sigma, sigma2)?;
    if alpha == 0.0 && beta != 0.0 {
        return ab_divergence(beta, alpha, sigma2, sigma);
    }
    let log = ScalarFunction::log();
    if alpha == 0.0 && beta == 0.0 {
        let d = &apply(&log, sigma)? - &apply(&log, sigma2)?;
        return Ok(0.5 * d.frobenius(&d));
    }
    let pa = ScalarFunction::pow(alpha);
    if alpha == beta {
        let d = &apply(&pa, sigma)? - &apply(&pa, sigma2)?;
        return Ok(d.frobenius(&d) / (2.0 * alpha * alpha));
    }
    if alpha == -beta {
        let cross = apply(&pa, sigma)?.frobenius(&apply(&ScalarFunction::pow(-alpha), sigma2)?);
        let ld = trace_map(sigma, f64::ln) - trace_map(sigma2, f64::ln);
        let n = sigma.dim() as f64;
        return Ok(-(n + alpha * ld - cross) / (alpha * alpha));
    }
    if beta == 0.0 {
        let sa = apply(&pa, sigma)?;
        let first = trace_map(sigma, |d| d.powf(alpha) * d.ln() - d.powf(alpha) / alpha);
        let second = trace_map(sigma2, |d| d.powf(alpha)) / alpha;
        let cross = sa.frobenius(&apply(&log, sigma2)?);
        return Ok((first + second - cross) / alpha);
    }
    let s = alpha + beta;
    let cross = apply(&pa, sigma)?.frobenius(&apply(&ScalarFunction::pow(beta), sigma2)?);
    let a = trace_map(sigma, |d| d.powf(s)) * alpha / s;
    let b = trace_map(sigma2, |d| d.powf(s)) * beta / s;
    Ok((a + b - cross) / (alpha * beta))
}

/// The potential `ψ^{α,β}(Σ)`.
pub fn ab_potential(alpha: f64, beta: f64, sigma: &SpdMatrix) -> Result<f64> {
    check_pair(alpha, beta)?;
    let v = if alpha == 0.0 && beta == 0.0 {
        trace_map(sigma, |d| 0.5 * d.ln() * d.ln())
    } else if alpha == 0.0 {
        trace_map(sigma, |d| d.powf(beta)) / (beta * beta)
    } else if alpha == beta {
        trace_map(sigma, |d| d.powf(2.0 * alpha)) / (2.0 * alpha * alpha)
    } else if alpha == -beta {
        -trace_map(sigma, f64::ln) / alpha
    } else if beta == 0.0 {
        trace_map(sigma, |d| d.powf(alpha) * d.ln() - d.powf(alpha) / alpha) / alpha
    } else {
        trace_map(sigma, |d| d.powf(alpha + beta)) / (beta * (alpha + beta))
    };
    Ok(v)
}

/// `ψ^{α,β}(Σ)` with its dual potential `φ = N tr(F_α(Σ) F_β(Σ)) - ψ`.
pub fn ab_potentials(alpha: f64, beta: f64, sigma: &SpdMatrix) -> Result<PotentialValue> {
    let psi = ab_potential(alpha, beta, sigma)?;
    let (u, v) = DivergenceSpec::ab(alpha, beta).maps();
    let n = 1.0 / (u.first(1.0) * v.first(1.0));
    let coupling = n * trace_map(sigma, |d| u.value(d) * v.value(d));
    Ok(PotentialValue {
        psi,
        phi: coupling - psi,
    })
}

pub const QUADRATURE_TOL: f64 = 1e-12;
const QUADRATURE_DEPTH: u32 = 48;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(GeomError::QuadratureFailure { a, b });
    }
    Ok(adaptive(f, a, m, left, 0.5 * tol, depth - 1)? + adaptive(f, m, b, right, 0.5 * tol, depth - 1)?)
}

/// `∫_a^b f` by adaptive Simpson to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let v = adaptive(f, a, b, simpson(f, a, b), tol, QUADRATURE_DEPTH)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GeomError::QuadratureFailure { a, b })
    }
}

struct UvParts {
    u: ScalarFunction,
    v: ScalarFunction,
    h: Option<Fn1>,
    normalizer: f64,
}

impl UvParts {
    fn new(spec: &DivergenceSpec) -> Result<Self> {
        let (u, v) = spec.maps();
        u.require_diffeomorphism()?;
        v.require_diffeomorphism()?;
        let h = match spec {
            DivergenceSpec::Uv { h, .. } => h.clone(),
            DivergenceSpec::Ab { .. } => None,
        };
        let normalizer = 1.0 / (u.first(1.0) * v.first(1.0));
        Ok(Self { u, v, h, normalizer })
    }

    /// `h(t) - h(1)`.
    fn antiderivative(&self, t: f64) -> Result<f64> {
        match &self.h {
            Some(h) => Ok(h(t) - h(1.0)),
            None => {
                let (u, v) = (&self.u, &self.v);
                integrate(&|s| v.value(s) * u.first(s), 1.0, t, QUADRATURE_TOL)
            }
        }
    }

    fn psi(&self, s: &SpdMatrix) -> Result<f64> {
        let mut total = 0.0;
        for &d in s.eigenvalues() {
            total += self.antiderivative(d)?;
        }
        Ok(self.normalizer * total)
    }

    fn coupling(&self, s: &SpdMatrix) -> f64 {
        self.normalizer * trace_map(s, |d| self.u.value(d) * self.v.value(d))
    }
}

/// Potentials `ψ`, `φ` of a `(u, v)` divergence at `Σ`, with `h(1) = 0`.
pub fn uv_potentials(spec: &DivergenceSpec, sigma: &SpdMatrix) -> Result<PotentialValue> {
    let parts = UvParts::new(spec)?;
    let psi = parts.psi(sigma)?;
    Ok(PotentialValue {
        psi,
        phi: parts.coupling(sigma) - psi,
    })
}

/// `ψ(Σ) + φ(Σ') - N tr(u(Σ) v(Σ'))`; `Ab` specs are evaluated through
/// `u = F_α`, `v = F_β` and quadrature.
pub fn uv_divergence(spec: &DivergenceSpec, sigma: &SpdMatrix, sigma2: &SpdMatrix) -> Result<f64> {
    check_dims(sigma, sigma2)?;
    let p = UvParts::new(spec)?;
    let phi2 = p.coupling(sigma2) - p.psi(sigma2)?;
    let cross = p.normalizer * apply(&p.u, sigma)?.frobenius(&apply(&p.v, sigma2)?);
    Ok(p.psi(sigma)? + phi2 - cross)
}

/// Closed form for `Ab`, potential form for `Uv`.
pub fn divergence(spec: &DivergenceSpec, sigma: &SpdMatrix, sigma2: &SpdMatrix) -> Result<f64> {
    match spec {
        DivergenceSpec::Ab { alpha, beta } => ab_divergence(*alpha, *beta, sigma, sigma2),
        DivergenceSpec::Uv { .. } => uv_divergence(spec, sigma, sigma2),
    }
}

/// `D*(Σ, Σ') = D(Σ', Σ)`.
pub fn dual_divergence(spec: &DivergenceSpec, sigma: &SpdMatrix, sigma2: &SpdMatrix) -> Result<f64> {
    divergence(spec, sigma2, sigma)
}

/// Relative base step of [`induced_metric_fd`].
pub const INDUCED_STEP: f64 = 1e-3;

/// `-∂_x ∂_y D` at `x = y = Σ` in directions `X`, `Y`, by the central
/// mixed second difference with step `h = INDUCED_STEP λ_min / (1 + ‖X‖ + ‖Y‖)`,
/// halved while `Σ ± hX` or `Σ ± hY` leaves the cone.
pub fn induced_metric_fd(
    spec: &DivergenceSpec,
    sigma: &SpdMatrix,
    x: &SymmetricMatrix,
    y: &SymmetricMatrix,
) -> Result<f64> {
    x.ensure_dim(sigma.dim())?;
    y.ensure_dim(sigma.dim())?;
    let mut h = INDUCED_STEP * sigma.min_eigenvalue() / (1.0 + x.norm() + y.norm());
    for _ in 0..30 {
        let points = (
            sigma.try_add(&x.scale(h)),
            sigma.try_add(&x.scale(-h)),
            sigma.try_add(&y.scale(h)),
            sigma.try_add(&y.scale(-h)),
        );
        if let (Ok(xp), Ok(xm), Ok(yp), Ok(ym)) = points {
            let d = |a: &SpdMatrix, b: &SpdMatrix| divergence(spec, a, b);
            let num = d(&xp, &yp)? - d(&xp, &ym)? - d(&xm, &yp)? + d(&xm, &ym)?;
            return Ok(-num / (4.0 * h * h));
        }
        h *= 0.5;
    }
    Err(GeomError::StepUnderflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> SpdMatrix {
        SpdMatrix::diagonal(d).unwrap()
    }

    fn pair() -> (SpdMatrix, SpdMatrix) {
        (
            SpdMatrix::from_row_slice(2, &[2.0, 0.4, 0.4, 1.0]).unwrap(),
            SpdMatrix::from_row_slice(2, &[0.7, -0.2, -0.2, 1.5]).unwrap(),
        )
    }

    const CASES: [(f64, f64); 6] = [(0.0, 0.0), (0.5, 0.5), (1.0, -1.0), (1.5, 0.0), (0.0, -0.7), (0.5, 1.5)];

    #[test]
    fn worked_values() {
        assert!((ab_divergence(1.0, 1.0, &diag(&[1.0]), &diag(&[3.0])).unwrap() - 2.0).abs() < 1e-15);
        let is = ab_divergence(1.0, -1.0, &diag(&[2.0]), &diag(&[1.0])).unwrap();
        assert!((is - (1.0 - 2.0_f64.ln())).abs() < 1e-15);
        let (s, s2) = pair();
        for (a, b) in CASES {
            assert!(ab_divergence(a, b, &s, &s).unwrap().abs() < 1e-14, "({a},{b})");
            assert!(ab_divergence(a, b, &s, &s2).unwrap() > 1e-6, "({a},{b})");
        }
    }

    #[test]
    fn potentials_worked_values() {
        assert_eq!(ab_potential(0.0, 0.0, &SpdMatrix::identity(3)).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((ab_potential(1.0, -1.0, &diag(&[e, 1.0])).unwrap() + 1.0).abs() < 1e-15);
        assert!((ab_potential(1.0, 1.0, &diag(&[1.0, 2.0])).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn potential_identity_reconstructs_divergence() {
        let (s, s2) = pair();
        for (a, b) in CASES {
            let p1 = ab_potentials(a, b, &s).unwrap();
            let p2 = ab_potentials(a, b, &s2).unwrap();
            let (u, v) = DivergenceSpec::ab(a, b).maps();
            let n = 1.0 / (u.first(1.0) * v.first(1.0));
            let cross = n * univariate_apply(&u, &s)
                .unwrap()
                .frobenius(&univariate_apply(&v, &s2).unwrap());
            let via = p1.psi + p2.phi - cross;
            let direct = ab_divergence(a, b, &s, &s2).unwrap();
            assert!(
                (via - direct).abs() <= 1e-9 * direct.abs().max(1.0),
                "({a},{b}): {via} vs {direct}"
            );
        }
    }

    #[test]
    fn uv_matches_closed_forms() {
        let (s, s2) = pair();
        for (a, b) in CASES {
            let uv = uv_divergence(&DivergenceSpec::ab(a, b), &s, &s2).unwrap();
            let ab = ab_divergence(a, b, &s, &s2).unwrap();
            assert!((uv - ab).abs() <= 1e-8 * ab.abs(), "({a},{b}): {uv} vs {ab}");
        }
        let id = ScalarFunction::identity();
        let spec = DivergenceSpec::uv_with_potential(id.clone(), id, |t| 0.5 * t * t).unwrap();
        let d = uv_divergence(&spec, &s, &s2).unwrap();
        let diff = s.as_sym() - s2.as_sym();
        assert!((d - 0.5 * diff.frobenius(&diff)).abs() < 1e-14);
        assert!(uv_divergence(&spec, &s, &s).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rejects_wrong_potential() {
        let id = ScalarFunction::identity();
        assert!(DivergenceSpec::uv_with_potential(id.clone(), id, |t| t * t).is_err());
    }

    #[test]
    fn dual_swaps_parameters() {
        let (s, s2) = pair();
        for (a, b) in CASES {
            let dual = dual_divergence(&DivergenceSpec::ab(a, b), &s, &s2).unwrap();
            let swapped = ab_divergence(b, a, &s, &s2).unwrap();
            assert!((dual - swapped).abs() <= 1e-12 * swapped.abs().max(1.0));
        }
        let d = ab_divergence(0.3, 0.3, &s, &s2).unwrap();
        assert!((dual_divergence(&DivergenceSpec::ab(0.3, 0.3), &s, &s2).unwrap() - d).abs() < 1e-15);
        assert!(dual_divergence(&DivergenceSpec::ab(1.0, 2.0), &s, &s).unwrap().abs() < 1e-14);
    }

    #[test]
    fn case_boundaries_converge_at_first_order() {
        let (s, s2) = pair();
        for (alpha, beta0) in [(1.0, 0.0), (0.7, -0.7), (0.6, 0.6)] {
            let target = ab_divergence(alpha, beta0, &s, &s2).unwrap();
            let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
                .iter()
                .map(|e| (ab_divergence(alpha, beta0 + e, &s, &s2).unwrap() - target).abs())
                .collect();
            for w in errs.windows(2) {
                let ratio = w[0] / w[1];
                assert!(ratio > 8.0 && ratio < 12.5, "({alpha},{beta0}): {errs:?}");
            }
        }
    }

    #[test]
    fn quadrature() {
        let v = integrate(&|x: f64| x.ln(), 1.0, 5.0, 1e-12).unwrap();
        assert!((v - (5.0 * 5.0_f64.ln() - 4.0)).abs() < 1e-11);
        let w = integrate(&|x: f64| x.powf(-1.5), 1.0, 0.01, 1e-12).unwrap();
        assert!((w + 18.0).abs() < 1e-10);
    }

    #[test]
    fn induced_metric_worked_values() {
        let (s, _) = pair();
        let x = SymmetricMatrix::from_row_slice(2, &[1.0, 0.5, 0.5, -0.3]).unwrap();
        let y = SymmetricMatrix::from_row_slice(2, &[0.2, -0.4, -0.4, 0.9]).unwrap();
        let g = induced_metric_fd(&DivergenceSpec::ab(1.0, 1.0), &s, &x, &y).unwrap();
        assert!((g - x.frobenius(&y)).abs() < 1e-6);
        let g = induced_metric_fd(&DivergenceSpec::ab(1.0, -1.0), &SpdMatrix::identity(2), &x, &y).unwrap();
        assert!((g - x.frobenius(&y)).abs() < 1e-6);
    }
}
