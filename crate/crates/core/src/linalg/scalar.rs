use std::fmt;
use std::sync::Arc;

use crate::error::{GeomError, Result};

pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A smooth function on `(0, ∞)` with explicit first and second derivatives,
/// used as the generator of a univariate matrix map.
///
/// Diffeomorphisms additionally record whether they are monotone, an
/// optional inverse and the open image interval, which is what the deformed
/// geodesic and logarithm need.
#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    value: Fn1,
    first: Fn1,
    second: Fn1,
    inverse: Option<Fn1>,
    image: (f64, f64),
    diffeomorphism: bool,
    quotient: Option<Fn2>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("diffeomorphism", &self.diffeomorphism)
            .field("image", &self.image)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        first: impl Fn(f64) -> f64 + Send + Sync + 'static,
        second: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Arc::new(value),
            first: Arc::new(first),
            second: Arc::new(second),
            inverse: None,
            image: (f64::NEG_INFINITY, f64::INFINITY),
            diffeomorphism: false,
            quotient: None,
        }
    }

    /// Marks the function as a diffeomorphism onto the open interval
    /// `image`, optionally with its inverse.
    pub fn with_diffeomorphism(mut self, image: (f64, f64), inverse: Option<Fn1>) -> Self {
        self.diffeomorphism = true;
        self.image = image;
        self.inverse = inverse;
        self
    }

    /// Supplies a cancellation-free evaluation of `(f(x) - f(y)) / (x - y)`
    /// for `x > y`.
    pub fn with_quotient(mut self, q: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.quotient = Some(Arc::new(q));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn first(&self, x: f64) -> f64 {
        (self.first)(x)
    }

    pub fn second(&self, x: f64) -> f64 {
        (self.second)(x)
    }

    pub fn is_diffeomorphism(&self) -> bool {
        self.diffeomorphism
    }

    pub fn image(&self) -> (f64, f64) {
        self.image
    }

    pub fn in_image(&self, y: f64) -> bool {
        y > self.image.0 && y < self.image.1
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        let inv = self
            .inverse
            .as_ref()
            .ok_or_else(|| GeomError::MissingInverse(self.name.clone()))?;
        Ok(inv(y))
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub(crate) fn quotient(&self, hi: f64, lo: f64) -> f64 {
        match &self.quotient {
            Some(q) => q(hi, lo),
            None => (self.value(hi) - self.value(lo)) / (hi - lo),
        }
    }

    pub(crate) fn require_diffeomorphism(&self) -> Result<()> {
        if self.diffeomorphism {
            Ok(())
        } else {
            Err(GeomError::NotDiffeomorphism(self.name.clone()))
        }
    }

    /// `x ↦ x`.
    pub fn identity() -> Self {
        let inv: Fn1 = Arc::new(|y| y);
        Self::new("id", |x| x, |_| 1.0, |_| 0.0)
            .with_diffeomorphism((0.0, f64::INFINITY), Some(inv))
            .with_quotient(|_, _| 1.0)
    }

    /// `x ↦ x^p` for `p != 0`.
    pub fn pow(p: f64) -> Self {
        assert!(p != 0.0, "pow_0 is not a diffeomorphism; use ScalarFunction::log");
        if p == 1.0 {
            let mut f = Self::identity();
            f.name = "pow(1)".into();
            return f;
        }
        let inv: Fn1 = Arc::new(move |y: f64| y.powf(1.0 / p));
        Self::new(
            format!("pow({p})"),
            move |x: f64| x.powf(p),
            move |x: f64| p * x.powf(p - 1.0),
            move |x: f64| p * (p - 1.0) * x.powf(p - 2.0),
        )
        .with_diffeomorphism((0.0, f64::INFINITY), Some(inv))
        .with_quotient(move |x, y| {
            if p == 2.0 {
                return x + y;
            }
            // y^(p-1) (t^p - 1) / (t - 1), t = x / y
            let h = (x - y) / y;
            y.powf(p - 1.0) * (p * h.ln_1p()).exp_m1() / h
        })
    }

    pub fn log() -> Self {
        let inv: Fn1 = Arc::new(f64::exp);
        Self::new("log", f64::ln, |x| 1.0 / x, |x| -1.0 / (x * x))
            .with_diffeomorphism((f64::NEG_INFINITY, f64::INFINITY), Some(inv))
            .with_quotient(|x, y| ((x - y) / y).ln_1p() / (x - y))
    }

    pub fn exp() -> Self {
        let inv: Fn1 = Arc::new(f64::ln);
        Self::new("exp", f64::exp, f64::exp, f64::exp)
            .with_diffeomorphism((1.0, f64::INFINITY), Some(inv))
            .with_quotient(|x, y| y.exp() * (x - y).exp_m1() / (x - y))
    }

    /// The mixed-power generator: `pow_α` for `α != 0` and `log` at `α = 0`.
    pub fn power_or_log(alpha: f64) -> Self {
        if alpha == 0.0 {
            Self::log()
        } else {
            Self::pow(alpha)
        }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &ScalarFunction, inner: &ScalarFunction) -> Self {
        let (o0, o1, o2) = (outer.value.clone(), outer.first.clone(), outer.second.clone());
        let (i0, i1, i2) = (inner.value.clone(), inner.first.clone(), inner.second.clone());
        let (o0b, o1b) = (o0.clone(), o1.clone());
        let i0b = i0.clone();
        let i0c = i0.clone();
        let i1b = i1.clone();
        let mut f = Self::new(
            format!("{}∘{}", outer.name, inner.name),
            move |x| o0(i0(x)),
            move |x| o1(i0b(x)) * i1(x),
            move |x| {
                let y = i0c(x);
                let d = i1b(x);
                o2(y) * d * d + o1b(y) * i2(x)
            },
        );
        if outer.diffeomorphism && inner.diffeomorphism {
            let inverse = match (&outer.inverse, &inner.inverse) {
                (Some(oi), Some(ii)) => {
                    let (oi, ii) = (oi.clone(), ii.clone());
                    Some(Arc::new(move |y| ii(oi(y))) as Fn1)
                }
                _ => None,
            };
            let (a, b) = inner.image;
            let at = |t: f64| {
                let y = o0b(t);
                if y.is_nan() {
                    o0b(t.max(0.0))
                } else {
                    y
                }
            };
            let ends = [at(a), at(b)];
            let lo = ends[0].min(ends[1]);
            let hi = ends[0].max(ends[1]);
            f = f.with_diffeomorphism((lo, hi), inverse);
        }
        f
    }

    /// Checks the derivative hooks against central differences and, for
    /// diffeomorphisms, the sign of `f'` on `samples`.
    pub fn validate(&self, samples: &[f64]) -> Result<()> {
        let mut sign = 0.0;
        for &x in samples {
            let h = 1e-5 * x;
            let fd = (self.value(x + h) - self.value(x - h)) / (2.0 * h);
            let d = self.first(x);
            if !fd.is_finite() || !d.is_finite() {
                return Err(GeomError::DomainError {
                    name: self.name.clone(),
                    at: x,
                });
            }
            if (fd - d).abs() > 1e-6 * (1.0 + d.abs()) {
                return Err(GeomError::EvaluationError(format!(
                    "derivative of `{}` at {x}: {d} vs finite difference {fd}",
                    self.name
                )));
            }
            if self.diffeomorphism {
                if d == 0.0 || (sign != 0.0 && d.signum() != sign) {
                    return Err(GeomError::NotDiffeomorphism(self.name.clone()));
                }
                sign = d.signum();
            }
        }
        Ok(())
    }
}
