//! The explicit Hamiltonian that nearly attains the max-energy bound.
//!
//! For two equiprobable states let `A = rho1 - rho0` and let `Pi+`, `Pi-`
//! project onto its positive and negative eigenspaces. The controlled flip
//!
//! ```text
//! H_hat = Pi- (x) I + Pi+ (x) (|0><1| + |1><0|),    H = E_max (H_hat + I) / 2
//! ```
//!
//! rotates the ancilla exactly on the sector where the Helstrom measurement
//! would answer `1`, giving the closed-form success curve
//! `1/2 + (1 - cos(t E_max / hbar)) D(rho0, rho1) / 4` and perfect
//! discrimination at `t = hbar pi / E_max`.

use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, HermitianOperator, C64};
use crate::states::{trace_distance, DensityMatrix};

/// The controlled-flip construction together with its ingredients.
#[derive(Debug, Clone)]
pub struct AttainingConstruction {
    h_hat: HermitianOperator,
    hamiltonian: HermitianOperator,
    e_max: f64,
    pi_plus: HermitianOperator,
    pi_minus: HermitianOperator,
}

impl AttainingConstruction {
    /// The Hermitian unitary `H_hat` (eigenvalues +-1).
    pub fn h_hat(&self) -> &HermitianOperator {
        &self.h_hat
    }

    /// `H = E_max (H_hat + I) / 2`, PSD with `||H||_inf = E_max`.
    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    /// Projector onto the nonnegative eigenspace of `rho1 - rho0`.
    pub fn pi_plus(&self) -> &HermitianOperator {
        &self.pi_plus
    }

    /// Projector onto the strictly negative eigenspace of `rho1 - rho0`.
    pub fn pi_minus(&self) -> &HermitianOperator {
        &self.pi_minus
    }
}

/// Build the construction for a pair of equal-dimension states.
///
/// `rho0 = rho1` is legal: the positive projector absorbs the whole kernel
/// and the success curve stays flat at 1/2.
pub fn build_attaining(
    r0: &DensityMatrix,
    r1: &DensityMatrix,
    e_max: f64,
) -> Result<AttainingConstruction> {
    if r0.dim() != r1.dim() {
        return Err(Error::DimensionMismatch(r0.dim(), r1.dim()));
    }
    let difference = HermitianOperator::symmetrized(r1.matrix() - r0.matrix());
    build_attaining_from_difference(&difference, e_max)
}

/// Build the construction directly from a Hermitian difference operator.
pub fn build_attaining_from_difference(
    difference: &HermitianOperator,
    e_max: f64,
) -> Result<AttainingConstruction> {
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "e_max must be positive, got {e_max}"
        )));
    }
    let (pi_plus, pi_minus) = difference.positive_negative_projectors();
    let dim = difference.dim();
    let flip = CMatrix::from_fn(2, 2, |i, j| {
        if i != j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let h_hat = HermitianOperator::symmetrized(
        kron(pi_minus.matrix(), &CMatrix::identity(2, 2)) + kron(pi_plus.matrix(), &flip),
    );
    let hamiltonian = HermitianOperator::symmetrized(
        (h_hat.matrix() + CMatrix::identity(2 * dim, 2 * dim)).scale(e_max / 2.0),
    );
    Ok(AttainingConstruction {
        h_hat,
        hamiltonian,
        e_max,
        pi_plus,
        pi_minus,
    })
}

/// Closed-form success curve of the construction:
/// `1/2 + (1 - cos(t e_max / hbar)) D(rho0, rho1) / 4`.
pub fn attaining_success_closed_form(
    r0: &DensityMatrix,
    r1: &DensityMatrix,
    e_max: f64,
    time: f64,
    hbar: f64,
) -> Result<f64> {
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "e_max must be positive, got {e_max}"
        )));
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let d = trace_distance(r0, r1)?;
    Ok(0.5 + 0.25 * (1.0 - (time * e_max / hbar).cos()) * d)
}

/// Time at which the construction distinguishes perfectly distinguishable
/// states perfectly: `hbar pi / e_max`.
pub fn perfect_discrimination_time(e_max: f64, hbar: f64) -> Result<f64> {
    if !(e_max > 0.0 && e_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "e_max must be positive, got {e_max}"
        )));
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    Ok(hbar * std::f64::consts::PI / e_max)
}
