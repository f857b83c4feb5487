//! C ABI for the tqsd library.
//!
//! Conventions:
//! - Every function returns a [`TqsdStatus`]; results come back through out
//!   pointers. `TQSD_STATUS_OK` is 0.
//! - Matrices cross the boundary as row-major interleaved doubles,
//!   `[re00, im00, re01, im01, ...]`, length `2 * dim * dim`.
//! - Handles (`TqsdOperator`, `TqsdState`, `TqsdEnsemble`, `TqsdProtocol`)
//!   are opaque; free them with the matching `*_free` function. Passing a
//!   handle to `*_free` twice, or using it after free, is undefined
//!   behavior, exactly as with `free(3)`.
//! - On any non-OK status, `tqsd_last_error_message` returns a description
//!   of the failure for the current thread.
//!
//! The header `include/tqsd.h` is generated from this file by cbindgen at
//! build time.

// Pointer and lifetime rules are the module-level conventions above; the
// per-function safety story never varies from them.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use tqsd::linalg::{CMatrix, C64};
use tqsd::states::embed_with_ancilla;
use tqsd::{DensityMatrix, Ensemble, Error, HermitianOperator};

/// Result codes for every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TqsdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    NotPositiveSemidefinite = 5,
    InvalidTrace = 6,
    InvalidDistribution = 7,
    IndexOutOfRange = 8,
    Unreachable = 9,
    NumericalError = 10,
    IoError = 11,
    Panic = 12,
}

/// Opaque Hermitian operator handle.
pub struct TqsdOperator {
    inner: HermitianOperator,
}

/// Opaque density-matrix handle.
pub struct TqsdState {
    inner: DensityMatrix,
}

/// Opaque ensemble handle.
pub struct TqsdEnsemble {
    inner: Ensemble,
}

/// Opaque protocol handle (ensemble + Hamiltonian + time + hbar).
pub struct TqsdProtocol {
    inner: tqsd::protocol::Protocol,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_last_error(message: &str) {
    LAST_ERROR.with(|slot| {
        let mut slot = slot.borrow_mut();
        slot.clear();
        slot.extend_from_slice(message.as_bytes());
        slot.push(0);
    });
}

fn status_of(err: &Error) -> TqsdStatus {
    match err {
        Error::NotSquare { .. } | Error::NonFinite { .. } | Error::InvalidArgument(_) => {
            TqsdStatus::InvalidArgument
        }
        Error::NotHermitian(_) => TqsdStatus::NotHermitian,
        Error::DimensionMismatch(_, _) => TqsdStatus::DimensionMismatch,
        Error::NotPositiveSemidefinite(_) => TqsdStatus::NotPositiveSemidefinite,
        Error::InvalidTrace(_) => TqsdStatus::InvalidTrace,
        Error::InvalidDistribution(_) => TqsdStatus::InvalidDistribution,
        Error::IndexOutOfRange { .. } => TqsdStatus::IndexOutOfRange,
        Error::Unreachable(_) => TqsdStatus::Unreachable,
        Error::InputFormat(_) => TqsdStatus::InvalidArgument,
        Error::Numerical(_) => TqsdStatus::NumericalError,
        Error::Io(_) => TqsdStatus::IoError,
    }
}

fn guard(body: impl FnOnce() -> Result<(), Error>) -> TqsdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TqsdStatus::Ok,
        Ok(Err(err)) => {
            set_last_error(&err.to_string());
            status_of(&err)
        }
        Err(_) => {
            set_last_error("internal panic");
            TqsdStatus::Panic
        }
    }
}

fn null_pointer() -> TqsdStatus {
    set_last_error("null pointer argument");
    TqsdStatus::NullPointer
}

unsafe fn matrix_from_raw(dim: usize, entries: *const f64) -> Result<CMatrix, Error> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let data = std::slice::from_raw_parts(entries, 2 * dim * dim);
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        let k = 2 * (i * dim + j);
        C64::new(data[k], data[k + 1])
    }))
}

unsafe fn write_matrix_raw(m: &CMatrix, out: *mut f64) {
    let dim = m.nrows();
    let data = std::slice::from_raw_parts_mut(out, 2 * dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let k = 2 * (i * dim + j);
            data[k] = m[(i, j)].re;
            data[k + 1] = m[(i, j)].im;
        }
    }
}

/// Copy the last error message (NUL terminated) into `buffer`. Returns the
/// number of bytes the full message needs, including the terminator; zero
/// means no error has been recorded on this thread.
#[no_mangle]
pub unsafe extern "C" fn tqsd_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        if slot.is_empty() {
            return 0;
        }
        if !buffer.is_null() && capacity > 0 {
            let n = slot.len().min(capacity);
            std::ptr::copy_nonoverlapping(slot.as_ptr(), buffer.cast::<u8>(), n);
            // Always terminate what we wrote.
            *buffer.add(n - 1) = 0;
        }
        slot.len()
    })
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/// Validate and wrap a Hermitian matrix (row-major interleaved).
#[no_mangle]
pub unsafe extern "C" fn tqsd_operator_new(
    dim: usize,
    entries: *const f64,
    out: *mut *mut TqsdOperator,
) -> TqsdStatus {
    if entries.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let inner = HermitianOperator::new(matrix_from_raw(dim, entries)?)?;
        *out = Box::into_raw(Box::new(TqsdOperator { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tqsd_operator_free(op: *mut TqsdOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

#[no_mangle]
pub unsafe extern "C" fn tqsd_operator_dim(op: *const TqsdOperator, out: *mut usize) -> TqsdStatus {
    if op.is_null() || out.is_null() {
        return null_pointer();
    }
    *out = (*op).inner.dim();
    TqsdStatus::Ok
}

/// Largest eigenvalue magnitude, `||H||_inf`.
#[no_mangle]
pub unsafe extern "C" fn tqsd_operator_spectral_norm(
    op: *const TqsdOperator,
    out: *mut f64,
) -> TqsdStatus {
    if op.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = (*op).inner.spectral_norm();
        Ok(())
    })
}

/// Eigenvalues in ascending order; `buffer` must hold `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn tqsd_operator_eigenvalues(
    op: *const TqsdOperator,
    buffer: *mut f64,
) -> TqsdStatus {
    if op.is_null() || buffer.is_null() {
        return null_pointer();
    }
    guard(|| {
        let eigenvalues = (*op).inner.eigenvalues();
        std::ptr::copy_nonoverlapping(eigenvalues.as_ptr(), buffer, eigenvalues.len());
        Ok(())
    })
}

/// Matrix entries, row-major interleaved; `buffer` needs `2 * dim * dim`.
#[no_mangle]
pub unsafe extern "C" fn tqsd_operator_entries(
    op: *const TqsdOperator,
    buffer: *mut f64,
) -> TqsdStatus {
    if op.is_null() || buffer.is_null() {
        return null_pointer();
    }
    write_matrix_raw((*op).inner.matrix(), buffer);
    TqsdStatus::Ok
}

// ---------------------------------------------------------------------------
// States and ensembles
// ---------------------------------------------------------------------------

/// Validate and wrap a density matrix (Hermitian, PSD, unit trace).
#[no_mangle]
pub unsafe extern "C" fn tqsd_state_new(
    dim: usize,
    entries: *const f64,
    out: *mut *mut TqsdState,
) -> TqsdStatus {
    if entries.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let inner = DensityMatrix::from_matrix(matrix_from_raw(dim, entries)?)?;
        *out = Box::into_raw(Box::new(TqsdState { inner }));
        Ok(())
    })
}

/// Computational basis state `|index><index|`.
#[no_mangle]
pub unsafe extern "C" fn tqsd_state_basis(
    dim: usize,
    index: usize,
    out: *mut *mut TqsdState,
) -> TqsdStatus {
    if out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let inner = DensityMatrix::basis_state(dim, index)?;
        *out = Box::into_raw(Box::new(TqsdState { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tqsd_state_free(state: *mut TqsdState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

#[no_mangle]
pub unsafe extern "C" fn tqsd_state_dim(state: *const TqsdState, out: *mut usize) -> TqsdStatus {
    if state.is_null() || out.is_null() {
        return null_pointer();
    }
    *out = (*state).inner.dim();
    TqsdStatus::Ok
}

/// Build an ensemble from parallel arrays of probabilities and states.
/// The states are copied; the caller keeps ownership of the handles.
#[no_mangle]
pub unsafe extern "C" fn tqsd_ensemble_new(
    count: usize,
    probabilities: *const f64,
    states: *const *const TqsdState,
    out: *mut *mut TqsdEnsemble,
) -> TqsdStatus {
    if probabilities.is_null() || states.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let probs = std::slice::from_raw_parts(probabilities, count);
        let handles = std::slice::from_raw_parts(states, count);
        let mut items = Vec::with_capacity(count);
        for (p, handle) in probs.iter().zip(handles) {
            if handle.is_null() {
                return Err(Error::InvalidArgument("null state handle".into()));
            }
            items.push((*p, (**handle).inner.clone()));
        }
        let inner = Ensemble::new(items)?;
        *out = Box::into_raw(Box::new(TqsdEnsemble { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tqsd_ensemble_free(ensemble: *mut TqsdEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

// ---------------------------------------------------------------------------
// Distinguishability
// ---------------------------------------------------------------------------

#[no_mangle]
pub unsafe extern "C" fn tqsd_trace_distance(
    r0: *const TqsdState,
    r1: *const TqsdState,
    out: *mut f64,
) -> TqsdStatus {
    if r0.is_null() || r1.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::states::trace_distance(&(*r0).inner, &(*r1).inner)?;
        Ok(())
    })
}

/// Optimal two-state guessing probability `p0 + Delta(p1 rho1, p0 rho0)`.
#[no_mangle]
pub unsafe extern "C" fn tqsd_helstrom_guess(
    p0: f64,
    r0: *const TqsdState,
    p1: f64,
    r1: *const TqsdState,
    out: *mut f64,
) -> TqsdStatus {
    if r0.is_null() || r1.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::states::helstrom_guess(p0, &(*r0).inner, p1, &(*r1).inner)?;
        Ok(())
    })
}

/// Min-entropy in bits, `-log2(p_guess)`.
#[no_mangle]
pub unsafe extern "C" fn tqsd_min_entropy(p_guess: f64, out: *mut f64) -> TqsdStatus {
    if out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::states::min_entropy(p_guess)?;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Protocol simulation
// ---------------------------------------------------------------------------

/// Build a protocol; the Hamiltonian must act on `dim * count` and is
/// shifted so its ground energy is zero.
#[no_mangle]
pub unsafe extern "C" fn tqsd_protocol_new(
    ensemble: *const TqsdEnsemble,
    hamiltonian: *const TqsdOperator,
    time: f64,
    hbar: f64,
    out: *mut *mut TqsdProtocol,
) -> TqsdStatus {
    if ensemble.is_null() || hamiltonian.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let inner = tqsd::protocol::Protocol::new(
            (*ensemble).inner.clone(),
            (*hamiltonian).inner.clone(),
            time,
            hbar,
        )?;
        *out = Box::into_raw(Box::new(TqsdProtocol { inner }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tqsd_protocol_free(protocol: *mut TqsdProtocol) {
    if !protocol.is_null() {
        drop(Box::from_raw(protocol));
    }
}

/// Average readout success probability of the protocol.
#[no_mangle]
pub unsafe extern "C" fn tqsd_protocol_success_probability(
    protocol: *const TqsdProtocol,
    out: *mut f64,
) -> TqsdStatus {
    if protocol.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = (*protocol).inner.success_probability()?;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// `gamma(k)`: 5/pi inside (1, 4), 3/pi otherwise.
#[no_mangle]
pub unsafe extern "C" fn tqsd_gamma_factor(k: f64, out: *mut f64) -> TqsdStatus {
    if out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::bounds::gamma_factor(k)?;
        Ok(())
    })
}

/// N-state average-energy bound on the success probability.
#[no_mangle]
pub unsafe extern "C" fn tqsd_many_states_bound(
    ensemble: *const TqsdEnsemble,
    hamiltonian: *const TqsdOperator,
    time: f64,
    hbar: f64,
    out: *mut f64,
) -> TqsdStatus {
    if ensemble.is_null() || hamiltonian.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out =
            tqsd::bounds::many_states_bound(&(*ensemble).inner, &(*hamiltonian).inner, time, hbar)?;
        Ok(())
    })
}

/// Two-state max-energy bound through the trace-distance functional.
#[no_mangle]
pub unsafe extern "C" fn tqsd_simple_trace_bound(
    p0: f64,
    r0: *const TqsdState,
    p1: f64,
    r1: *const TqsdState,
    hamiltonian: *const TqsdOperator,
    time: f64,
    hbar: f64,
    out: *mut f64,
) -> TqsdStatus {
    if r0.is_null() || r1.is_null() || hamiltonian.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::bounds::simple_trace_bound(
            p0,
            p1,
            &(*r0).inner,
            &(*r1).inner,
            &(*hamiltonian).inner,
            time,
            hbar,
        )?;
        Ok(())
    })
}

/// Two-state average-energy bound.
#[no_mangle]
pub unsafe extern "C" fn tqsd_avg_energy_two_state_bound(
    p0: f64,
    r0: *const TqsdState,
    p1: f64,
    r1: *const TqsdState,
    hamiltonian: *const TqsdOperator,
    time: f64,
    hbar: f64,
    out: *mut f64,
) -> TqsdStatus {
    if r0.is_null() || r1.is_null() || hamiltonian.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::bounds::avg_energy_two_state_bound(
            p0,
            p1,
            &(*r0).inner,
            &(*r1).inner,
            &(*hamiltonian).inner,
            time,
            hbar,
        )?;
        Ok(())
    })
}

/// Margolus-Levitin time for `rho` embedded next to a basis ancilla.
#[no_mangle]
pub unsafe extern "C" fn tqsd_margolus_levitin_time(
    hamiltonian: *const TqsdOperator,
    rho: *const TqsdState,
    ancilla_dim: usize,
    ancilla_index: usize,
    hbar: f64,
    out: *mut f64,
) -> TqsdStatus {
    if hamiltonian.is_null() || rho.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let embedded = embed_with_ancilla(&(*rho).inner, ancilla_dim, ancilla_index)?;
        *out = tqsd::bounds::margolus_levitin_time(&(*hamiltonian).inner, &embedded, hbar)?;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Attainment
// ---------------------------------------------------------------------------

/// The controlled-flip Hamiltonian `E_max (H_hat + I)/2` for a state pair,
/// on dimension `2 * dim`.
#[no_mangle]
pub unsafe extern "C" fn tqsd_attaining_hamiltonian(
    r0: *const TqsdState,
    r1: *const TqsdState,
    e_max: f64,
    out: *mut *mut TqsdOperator,
) -> TqsdStatus {
    if r0.is_null() || r1.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        let built = tqsd::attainment::build_attaining(&(*r0).inner, &(*r1).inner, e_max)?;
        *out = Box::into_raw(Box::new(TqsdOperator {
            inner: built.hamiltonian().clone(),
        }));
        Ok(())
    })
}

/// Closed-form success curve of the controlled-flip construction.
#[no_mangle]
pub unsafe extern "C" fn tqsd_attaining_success_closed_form(
    r0: *const TqsdState,
    r1: *const TqsdState,
    e_max: f64,
    time: f64,
    hbar: f64,
    out: *mut f64,
) -> TqsdStatus {
    if r0.is_null() || r1.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::attainment::attaining_success_closed_form(
            &(*r0).inner,
            &(*r1).inner,
            e_max,
            time,
            hbar,
        )?;
        Ok(())
    })
}

/// `hbar * pi / e_max`.
#[no_mangle]
pub unsafe extern "C" fn tqsd_perfect_discrimination_time(
    e_max: f64,
    hbar: f64,
    out: *mut f64,
) -> TqsdStatus {
    if out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::attainment::perfect_discrimination_time(e_max, hbar)?;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// CHSH
// ---------------------------------------------------------------------------

/// The quantum optimum `1/2 + 1/(2 sqrt(2))`.
#[no_mangle]
pub extern "C" fn tqsd_chsh_quantum_optimum() -> f64 {
    tqsd::chsh::CHSH_QUANTUM_OPTIMUM
}

/// Time-dependent Tsirelson bound for Bob's Hamiltonian.
#[no_mangle]
pub unsafe extern "C" fn tqsd_tsirelson_time_bound(
    bob_hamiltonian: *const TqsdOperator,
    time: f64,
    hbar: f64,
    out: *mut f64,
) -> TqsdStatus {
    if bob_hamiltonian.is_null() || out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::chsh::tsirelson_time_bound(&(*bob_hamiltonian).inner, time, hbar)?;
        Ok(())
    })
}

/// Minimum time to reach the optimum quantum violation.
#[no_mangle]
pub unsafe extern "C" fn tqsd_min_time_for_tsirelson(
    e_max: f64,
    hbar: f64,
    gamma: f64,
    out: *mut f64,
) -> TqsdStatus {
    if out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::chsh::min_time_for_tsirelson(e_max, hbar, gamma)?;
        Ok(())
    })
}

/// Lower bound on `||H||_inf` from an observed winning probability.
#[no_mangle]
pub unsafe extern "C" fn tqsd_energy_witness(
    q_observed: f64,
    time: f64,
    hbar: f64,
    out: *mut f64,
) -> TqsdStatus {
    if out.is_null() {
        return null_pointer();
    }
    guard(|| {
        *out = tqsd::chsh::energy_witness(q_observed, time, hbar)?;
        Ok(())
    })
}
