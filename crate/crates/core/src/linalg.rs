//! Dense complex linear algebra primitives: Hermitian operators with cached
//! eigendecompositions, unitary exponentials, positive/negative splits and
//! trace norms. Everything downstream builds on this module.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Max-entry tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues with magnitude below this are assigned to the positive part of
/// a split, matching the `lambda_j >= 0` convention.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;
/// Default floor when testing positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-10;

/// Eigendecomposition of a Hermitian operator: real eigenvalues in ascending
/// order and the matching unitary of column eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// A dense complex matrix validated (and stored exactly) Hermitian.
///
/// Construction symmetrizes the input as `(M + M^dag)/2` after checking the
/// asymmetry is below [`HERMITICITY_TOL`], so stored operators are Hermitian
/// to the last bit and their eigenvalues are exactly real.
#[derive(Debug)]
pub struct HermitianOperator {
    matrix: CMatrix,
    spectrum: OnceLock<Spectrum>,
}

impl Clone for HermitianOperator {
    fn clone(&self) -> Self {
        Self {
            matrix: self.matrix.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

pub(crate) fn validate_complex_matrix(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

impl HermitianOperator {
    /// Validate and wrap a matrix. Fails on non-square, non-finite or
    /// non-Hermitian input.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        validate_complex_matrix(&matrix)?;
        let asym = max_abs_entry(&(&matrix - matrix.adjoint()));
        if asym > HERMITICITY_TOL {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Wrap a matrix known Hermitian by construction, symmetrizing away
    /// floating-point residue without a tolerance check.
    pub(crate) fn symmetrized(matrix: CMatrix) -> Self {
        let adj = matrix.adjoint();
        Self {
            matrix: (matrix + adj).scale(0.5),
            spectrum: OnceLock::new(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::symmetrized(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::symmetrized(CMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        Self::symmetrized(CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Real trace (the imaginary part vanishes for Hermitian operators).
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigendecomposition, computed once and cached. Eigenvalues ascend.
    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| {
            let eig = self.matrix.clone().symmetric_eigen();
            let mut order: Vec<usize> = (0..self.dim()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            let eigenvectors = CMatrix::from_fn(self.dim(), self.dim(), |i, j| {
                eig.eigenvectors[(i, order[j])]
            });
            Spectrum {
                eigenvalues,
                eigenvectors,
            }
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum().eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum().eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.spectrum().eigenvalues.last().expect("dim >= 1")
    }

    /// Operator norm `||.||_inf` (largest eigenvalue magnitude).
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs()))
    }

    /// `exp(i * s * H)`, computed through the eigendecomposition so the
    /// result is unitary up to rounding. Evolution for time `t` uses
    /// `s = -t/hbar`.
    pub fn expm_antihermitian(&self, s: f64) -> CMatrix {
        if s == 0.0 {
            return CMatrix::identity(self.dim(), self.dim());
        }
        let spec = self.spectrum();
        let phases: Vec<C64> = spec
            .eigenvalues
            .iter()
            .map(|&l| C64::new(0.0, s * l).exp())
            .collect();
        recompose(&spec.eigenvectors, &phases)
    }

    /// Apply a real function to the spectrum: `V f(diag) V^dag`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let spec = self.spectrum();
        let vals: Vec<C64> = spec
            .eigenvalues
            .iter()
            .map(|&l| C64::new(f(l), 0.0))
            .collect();
        HermitianOperator::symmetrized(recompose(&spec.eigenvectors, &vals))
    }

    /// Split into positive and negative parts: `A = A_plus - A_minus`, both
    /// positive semidefinite with orthogonal supports. Eigenvalues within
    /// [`ZERO_EIGENVALUE_TOL`] of zero land in `A_plus`.
    pub fn positive_negative_split(&self) -> (HermitianOperator, HermitianOperator) {
        let plus = self.map_eigenvalues(|l| if l >= -ZERO_EIGENVALUE_TOL { l } else { 0.0 });
        let minus = self.map_eigenvalues(|l| if l >= -ZERO_EIGENVALUE_TOL { 0.0 } else { -l });
        (plus, minus)
    }

    /// Orthogonal projector onto the positive eigenspace (zero eigenvalues
    /// included) and its complement.
    pub fn positive_negative_projectors(&self) -> (HermitianOperator, HermitianOperator) {
        let plus = self.map_eigenvalues(|l| if l >= -ZERO_EIGENVALUE_TOL { 1.0 } else { 0.0 });
        let minus = self.map_eigenvalues(|l| if l >= -ZERO_EIGENVALUE_TOL { 0.0 } else { 1.0 });
        (plus, minus)
    }

    /// Operator absolute value `|A| = A_plus + A_minus`.
    pub fn absolute(&self) -> HermitianOperator {
        self.map_eigenvalues(f64::abs)
    }

    /// Trace norm `||A||_1 = sum_j |lambda_j|`.
    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues().iter().map(|l| l.abs()).sum()
    }

    /// True iff the minimum eigenvalue is at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// `Re tr(H rho)` for any same-dimension matrix.
    pub fn real_expectation(&self, rho: &CMatrix) -> Result<f64> {
        if rho.nrows() != self.dim() || rho.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rho.nrows()));
        }
        Ok(trace_product(&self.matrix, rho).re)
    }
}

/// `V diag(vals) V^dag`.
fn recompose(vectors: &CMatrix, vals: &[C64]) -> CMatrix {
    let dim = vectors.nrows();
    let mut scaled = vectors.clone();
    for j in 0..dim {
        for i in 0..dim {
            scaled[(i, j)] *= vals[j];
        }
    }
    scaled * vectors.adjoint()
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Kronecker product with the first factor on the slow index:
/// `(a kron b)[(i*db + k), (j*db + l)] = a[i,j] * b[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    CMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Max-entry distance from unitarity, `max |U^dag U - I|`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_entry(&(u.adjoint() * u - CMatrix::identity(n, n)))
}
