//! Density matrices, ensembles, trace distance, the asymmetric `Delta`
//! functional behind the Helstrom bound, min-entropy, and the embedding of an
//! encoding state next to the classical ancilla register.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, HermitianOperator, C64, PSD_TOL};

/// Tolerance on `|tr(rho) - 1|` and on ensemble probability sums.
pub const TRACE_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let min = op.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        let tr = op.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        Ok(Self { op })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    /// Pure state `|v><v|` from a (not necessarily normalized) vector.
    pub fn pure(v: &[C64]) -> Result<Self> {
        let v = DVector::from_column_slice(v);
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v = v.scale(1.0 / n);
        Self::from_matrix(&v * v.adjoint())
    }

    /// Computational basis state `|index><index|`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[index] = C64::new(1.0, 0.0);
        Self::pure(&v)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CMatrix::identity(dim, dim).scale(1.0 / dim as f64);
        Self::from_matrix(m).expect("I/d is a state")
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    /// `tr(rho^2)`, 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        crate::linalg::trace_product(self.matrix(), self.matrix()).re
    }
}

/// Ordered list of `(probability, state)` pairs sharing one dimension.
///
/// Probabilities are validated, never renormalized: an out-of-tolerance sum
/// is the caller's bug and is reported as an error.
#[derive(Debug, Clone)]
pub struct Ensemble {
    items: Vec<(f64, DensityMatrix)>,
    dim: usize,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidDistribution("ensemble is empty".into()));
        }
        let dim = items[0].1.dim();
        for (p, state) in &items {
            if !(*p >= 0.0 && *p <= 1.0 + TRACE_TOL) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {p} outside [0, 1]"
                )));
            }
            if state.dim() != dim {
                return Err(Error::DimensionMismatch(dim, state.dim()));
            }
        }
        let total: f64 = items.iter().map(|(p, _)| *p).sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { items, dim })
    }

    /// Equal priors over the given states.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidDistribution("ensemble is empty".into()));
        }
        let p = 1.0 / n as f64;
        Self::new(states.into_iter().map(|s| (p, s)).collect())
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn items(&self) -> &[(f64, DensityMatrix)] {
        &self.items
    }

    pub fn probability(&self, x: usize) -> f64 {
        self.items[x].0
    }

    pub fn state(&self, x: usize) -> &DensityMatrix {
        &self.items[x].1
    }

    /// Index of the most likely symbol; ties break to the smallest index.
    pub fn x_max_index(&self) -> usize {
        let mut best = 0;
        for (x, (p, _)) in self.items.iter().enumerate().skip(1) {
            if *p > self.items[best].0 {
                best = x;
            }
        }
        best
    }
}

/// An encoding state tensored with a computational-basis ancilla projector,
/// `rho (x) |index><index|`, on `encoding_dim * ancilla_dim`.
#[derive(Debug, Clone)]
pub struct EmbeddedState {
    state: DensityMatrix,
    encoding_dim: usize,
    ancilla_dim: usize,
    ancilla_index: usize,
}

impl EmbeddedState {
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &CMatrix {
        self.state.matrix()
    }

    pub fn encoding_dim(&self) -> usize {
        self.encoding_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn ancilla_index(&self) -> usize {
        self.ancilla_index
    }
}

/// Embed `rho` next to an ancilla prepared in `|ancilla_index>`.
pub fn embed_with_ancilla(
    rho: &DensityMatrix,
    ancilla_dim: usize,
    ancilla_index: usize,
) -> Result<EmbeddedState> {
    if ancilla_index >= ancilla_dim {
        return Err(Error::IndexOutOfRange {
            index: ancilla_index,
            dim: ancilla_dim,
        });
    }
    let proj = DensityMatrix::basis_state(ancilla_dim, ancilla_index)?;
    let m = kron(rho.matrix(), proj.matrix());
    Ok(EmbeddedState {
        state: DensityMatrix::from_matrix(m)?,
        encoding_dim: rho.dim(),
        ancilla_dim,
        ancilla_index,
    })
}

/// Trace out the ancilla (second, fast-index) factor.
pub fn partial_trace_ancilla(m: &CMatrix, encoding_dim: usize, ancilla_dim: usize) -> CMatrix {
    CMatrix::from_fn(encoding_dim, encoding_dim, |i, j| {
        (0..ancilla_dim)
            .map(|k| m[(i * ancilla_dim + k, j * ancilla_dim + k)])
            .sum()
    })
}

/// Trace out the encoding (first, slow-index) factor.
pub fn partial_trace_encoding(m: &CMatrix, encoding_dim: usize, ancilla_dim: usize) -> CMatrix {
    CMatrix::from_fn(ancilla_dim, ancilla_dim, |i, j| {
        (0..encoding_dim)
            .map(|k| m[(k * ancilla_dim + i, k * ancilla_dim + j)])
            .sum()
    })
}

/// Trace distance `D(rho0, rho1) = ||rho0 - rho1||_1 / 2`.
pub fn trace_distance(r0: &DensityMatrix, r1: &DensityMatrix) -> Result<f64> {
    if r0.dim() != r1.dim() {
        return Err(Error::DimensionMismatch(r0.dim(), r1.dim()));
    }
    let diff = HermitianOperator::symmetrized(r0.matrix() - r1.matrix());
    Ok(0.5 * diff.trace_norm())
}

/// The asymmetric distinguishability functional
/// `Delta(pA rhoA, pB rhoB) = tr((pA rhoA - pB rhoB)^+)`.
pub fn delta_asymmetric(
    p_a: f64,
    r_a: &DensityMatrix,
    p_b: f64,
    r_b: &DensityMatrix,
) -> Result<f64> {
    if r_a.dim() != r_b.dim() {
        return Err(Error::DimensionMismatch(r_a.dim(), r_b.dim()));
    }
    if p_a < 0.0 || p_b < 0.0 {
        return Err(Error::InvalidDistribution(
            "weights must be nonnegative".into(),
        ));
    }
    let a = HermitianOperator::symmetrized(r_a.matrix().scale(p_a) - r_b.matrix().scale(p_b));
    let (plus, _) = a.positive_negative_split();
    Ok(plus.trace())
}

/// Optimal (time-unlimited) two-state guessing probability,
/// `p0 + Delta(p1 rho1, p0 rho0)`.
pub fn helstrom_guess(p0: f64, r0: &DensityMatrix, p1: f64, r1: &DensityMatrix) -> Result<f64> {
    if !(p0 >= 0.0 && p1 >= 0.0 && (p0 + p1 - 1.0).abs() <= TRACE_TOL) {
        return Err(Error::InvalidDistribution(format!(
            "priors ({p0}, {p1}) must be nonnegative and sum to 1"
        )));
    }
    Ok(p0 + delta_asymmetric(p1, r1, p0, r0)?)
}

/// Min-entropy in bits, `-log2(p_guess)`.
pub fn min_entropy(p_guess: f64) -> Result<f64> {
    if p_guess <= 0.0 || p_guess > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "guessing probability {p_guess} outside (0, 1]"
        )));
    }
    Ok(-p_guess.min(1.0).log2())
}
