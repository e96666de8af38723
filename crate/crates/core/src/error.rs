use thiserror::Error;

/// Errors raised by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("matrix is not symmetric (asymmetry {asymmetry:e} exceeds tolerance {tolerance:e})")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("function `{name}` is not defined at {at}")]
    DomainError { name: String, at: f64 },

    #[error("function `{0}` is not flagged as a diffeomorphism")]
    NotDiffeomorphism(String),

    #[error("function `{0}` has no inverse available")]
    MissingInverse(String),

    #[error("invalid power {0} (powers 0 and 2 are excluded)")]
    InvalidPower(f64),

    #[error("invalid parameter pair: {0}")]
    InvalidPair(String),

    #[error("matrices do not commute (commutator norm {commutator:e}, tolerance {tolerance:e})")]
    NotCommuting { commutator: f64, tolerance: f64 },

    #[error("tangent vectors span a degenerate plane (Gram determinant {gram:e})")]
    DegeneratePlane { gram: f64 },

    #[error("operation requires a flat deformed-Euclidean metric, got `{0}`")]
    UnsupportedBase(String),

    #[error("t = {t} lies outside the geodesic domain ({lo}, {hi})")]
    DomainExit { t: f64, lo: f64, hi: f64 },

    #[error("adaptive quadrature did not reach tolerance on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },

    #[error("finite-difference step underflowed while staying inside the SPD cone")]
    StepUnderflow,

    #[error("non-finite value while evaluating {0}")]
    EvaluationError(String),

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GeomError {
    fn from(e: std::io::Error) -> Self {
        GeomError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
