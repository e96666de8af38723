use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{GeomError, Result};

/// Relative symmetry tolerance: `|a_ij - a_ji| <= SYM_TOL * max|a|`.
pub const SYM_TOL: f64 = 1e-12;

/// Relative eigenvalue floor below which a matrix is not accepted as SPD.
pub const EIG_FLOOR: f64 = 1e-12;

/// A dense real symmetric matrix (an element of `Sym(n)`).
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix {
    m: DMatrix<f64>,
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymmetricMatrix{}", self.m)
    }
}

fn check_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(GeomError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

impl SymmetricMatrix {
    /// Validates symmetry and stores the exactly symmetrized matrix.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = check_square(&m)?;
        let scale = m.amax();
        if !scale.is_finite() {
            return Err(GeomError::EvaluationError("matrix entries".into()));
        }
        let tolerance = SYM_TOL * scale;
        let mut asymmetry = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                asymmetry = asymmetry.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if asymmetry > tolerance {
            return Err(GeomError::NotSymmetric { asymmetry, tolerance });
        }
        Ok(Self::symmetrized(m))
    }

    /// Builds from a matrix known to be symmetric up to rounding; the
    /// result is `(M + M^T) / 2`.
    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self { m: (m + t) * 0.5 }
    }

    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(GeomError::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, data))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(GeomError::NotSquare { rows: n, cols: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_slice(n, &data)
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self {
            m: DMatrix::from_diagonal(&DVector::from_column_slice(d)),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: DMatrix::zeros(n, n),
        }
    }

    /// `E_ij + E_ji` (or `E_ii` on the diagonal).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = 1.0;
        m[(j, i)] = 1.0;
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    /// Frobenius inner product `tr(A B)`.
    pub fn frobenius(&self, other: &Self) -> f64 {
        self.m.dot(&other.m)
    }

    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.amax()
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { m: &self.m * c }
    }

    /// Frobenius norm of the commutator `AB - BA`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (&self.m * &other.m - &other.m * &self.m).norm()
    }

    pub(crate) fn ensure_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn add(self, rhs: Self) -> SymmetricMatrix {
        SymmetricMatrix { m: &self.m + &rhs.m }
    }
}

impl Sub for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn sub(self, rhs: Self) -> SymmetricMatrix {
        SymmetricMatrix { m: &self.m - &rhs.m }
    }
}

impl Mul<f64> for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn mul(self, rhs: f64) -> SymmetricMatrix {
        self.scale(rhs)
    }
}

impl Neg for &SymmetricMatrix {
    type Output = SymmetricMatrix;
    fn neg(self) -> SymmetricMatrix {
        self.scale(-1.0)
    }
}

/// `Σ = P diag(d) P^T` with eigenvalues sorted in descending order and each
/// eigenvector's largest-magnitude component made positive.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    vectors: DMatrix<f64>,
    values: Vec<f64>,
}

impl EigenDecomposition {
    /// Sorts and sign-normalizes raw eigenpairs.
    fn normalized(vectors: DMatrix<f64>, values: Vec<f64>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let mut p = DMatrix::zeros(n, n);
        let mut d = Vec::with_capacity(n);
        for (k, &src) in order.iter().enumerate() {
            let col = vectors.column(src);
            let pivot = col.iamax();
            let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
            p.set_column(k, &(col * sign));
            d.push(values[src]);
        }
        Self { vectors: p, values: d }
    }

    /// `P = I` with the given eigenvalues in the given order, for base points
    /// already diagonal in the working coordinates.
    pub(crate) fn diagonal_unsorted(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            vectors: DMatrix::identity(n, n),
            values: values.to_vec(),
        }
    }

    /// Orthogonal factor `P` (columns are eigenvectors).
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// Eigenvalues in descending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `P^T X P`.
    pub fn to_eigenbasis(&self, x: &SymmetricMatrix) -> DMatrix<f64> {
        self.vectors.transpose() * x.as_matrix() * &self.vectors
    }

    /// `P M P^T`, symmetrized.
    pub fn from_eigenbasis(&self, m: DMatrix<f64>) -> SymmetricMatrix {
        SymmetricMatrix::symmetrized(&self.vectors * m * self.vectors.transpose())
    }

    /// `P diag(values) P^T`.
    pub fn recompose(&self, values: &[f64]) -> SymmetricMatrix {
        let d = DMatrix::from_diagonal(&DVector::from_column_slice(values));
        self.from_eigenbasis(d)
    }
}

fn is_diagonal(m: &DMatrix<f64>) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0))
}

/// Symmetric eigendecomposition with deterministic ordering and signs.
pub fn sym_eigendecompose(s: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let m = s.as_matrix();
    let n = s.dim();
    if is_diagonal(m) {
        let values = (0..n).map(|i| m[(i, i)]).collect();
        return Ok(EigenDecomposition::normalized(DMatrix::identity(n, n), values));
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0).ok_or(GeomError::EigenFailure)?;
    let values = eig.eigenvalues.iter().copied().collect();
    Ok(EigenDecomposition::normalized(eig.eigenvectors, values))
}

/// A symmetric positive definite matrix together with its eigendecomposition.
///
/// The decomposition is computed once, at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SpdMatrix {
    base: SymmetricMatrix,
    eig: EigenDecomposition,
}

impl SpdMatrix {
    pub fn new(base: SymmetricMatrix) -> Result<Self> {
        let eig = sym_eigendecompose(&base)?;
        Self::check_floor(&eig)?;
        Ok(Self { base, eig })
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        Self::new(SymmetricMatrix::new(m)?)
    }

    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(SymmetricMatrix::from_row_slice(n, data)?)
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(SymmetricMatrix::diagonal(d))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(SymmetricMatrix::identity(n)).expect("identity is SPD")
    }

    /// Assembles `P diag(values) P^T` for an orthogonal `P`, reusing `P` as
    /// the eigenbasis.
    pub fn from_eigen(vectors: DMatrix<f64>, values: Vec<f64>) -> Result<Self> {
        let eig = EigenDecomposition::normalized(vectors, values);
        Self::check_floor(&eig)?;
        let base = eig.recompose(eig.values());
        Ok(Self { base, eig })
    }

    fn check_floor(eig: &EigenDecomposition) -> Result<()> {
        let d = eig.values();
        let max = d[0];
        let min = d[d.len() - 1];
        if !(min > EIG_FLOOR * max) || !min.is_finite() || !max.is_finite() {
            return Err(GeomError::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn as_sym(&self) -> &SymmetricMatrix {
        &self.base
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        self.base.as_matrix()
    }

    pub fn eig(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eig.values()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eig.values().last().expect("non-empty")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eig.values()[0]
    }

    /// `λΣ` for `λ > 0`, sharing the eigenvectors.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let values = self.eig.values().iter().map(|d| d * lambda).collect();
        Self::from_eigen(self.eig.vectors().clone(), values)
    }

    pub fn try_add(&self, x: &SymmetricMatrix) -> Result<Self> {
        x.ensure_dim(self.dim())?;
        Self::new(&self.base + x)
    }
}
