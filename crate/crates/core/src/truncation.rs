//! Restriction of the interaction Hamiltonian to the low-energy subspace
//! that (approximately) supports the input states.
//!
//! The projector commutes with `H`, so the restriction error is preserved
//! under the evolution and the success probability moves by at most
//! `2 * epsilon`.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianOperator};
use crate::protocol::Protocol;
use crate::states::EmbeddedState;

/// A low-energy eigenprojector of `H` together with the restricted
/// Hamiltonian and the retained level indices (ascending energy order).
#[derive(Debug, Clone)]
pub struct TruncationResult {
    projector: HermitianOperator,
    truncated_h: HermitianOperator,
    epsilon: f64,
    kept_levels: Vec<usize>,
}

impl TruncationResult {
    pub fn projector(&self) -> &HermitianOperator {
        &self.projector
    }

    pub fn truncated_h(&self) -> &HermitianOperator {
        &self.truncated_h
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn kept_levels(&self) -> &[usize] {
        &self.kept_levels
    }

    pub fn rank(&self) -> usize {
        self.kept_levels.len()
    }
}

/// `(1/2) || rho - P rho P ||_1`.
fn restriction_error(rho: &CMatrix, projector: &CMatrix) -> f64 {
    let compressed = projector * rho * projector;
    HermitianOperator::symmetrized(rho - compressed).trace_norm() * 0.5
}

/// Greedy lowest-rank eigenprojector: add levels in increasing energy order
/// (ties by eigenbasis index) until every state satisfies
/// `(1/2) || rho~ - P rho~ P ||_1 <= epsilon`. Rank is at least 1 even for
/// `epsilon >= 1`.
pub fn truncation_projector(
    h: &HermitianOperator,
    states: &[EmbeddedState],
    epsilon: f64,
) -> Result<TruncationResult> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be nonnegative, got {epsilon}"
        )));
    }
    if !h.is_psd(1e-9) {
        return Err(Error::NotPositiveSemidefinite(h.min_eigenvalue()));
    }
    let dim = h.dim();
    for state in states {
        if state.matrix().nrows() != dim {
            return Err(Error::DimensionMismatch(state.matrix().nrows(), dim));
        }
    }
    let spec = h.spectrum();
    let mut projector = CMatrix::zeros(dim, dim);
    let mut truncated = CMatrix::zeros(dim, dim);
    let mut kept = Vec::new();
    for level in 0..dim {
        let v = spec.eigenvectors.column(level);
        let outer = v * v.adjoint();
        truncated += outer.scale(spec.eigenvalues[level]);
        projector += outer;
        kept.push(level);
        let worst = states
            .iter()
            .map(|s| restriction_error(s.matrix(), &projector))
            .fold(0.0f64, f64::max);
        if worst <= epsilon + 1e-12 {
            break;
        }
    }
    Ok(TruncationResult {
        projector: HermitianOperator::symmetrized(projector),
        truncated_h: HermitianOperator::symmetrized(truncated),
        epsilon,
        kept_levels: kept,
    })
}

/// `H_hat = P H P`, evaluated directly from the truncation's projector.
pub fn truncated_hamiltonian(tr: &TruncationResult, h: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::symmetrized(tr.projector.matrix() * h.matrix() * tr.projector.matrix())
}

/// `|P_succ(H, t) - P_succ(H_hat, t)|` for the protocol's ensemble and
/// deadline; guaranteed at most `2 * epsilon` when the truncation was built
/// from the protocol's (shifted) Hamiltonian and embedded states.
pub fn truncation_success_gap(protocol: &Protocol, tr: &TruncationResult) -> Result<f64> {
    let original = protocol.success_probability()?;
    let truncated = Protocol::with_ancilla_index(
        protocol.ensemble().clone(),
        tr.truncated_h.clone(),
        protocol.time(),
        protocol.hbar(),
        protocol.ancilla_index(),
    )?
    .success_probability()?;
    Ok((original - truncated).abs())
}
