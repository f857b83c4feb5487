//! Time-limited quantum state discrimination.
//!
//! How much classical information can be pulled out of a quantum register in
//! a given time `t`? This crate models the readout as a unitary interaction
//! `U = exp(-iHt/hbar)` between the encoding register and a classical ancilla
//! that a referee measures in the computational basis, and provides:
//!
//! - an exact simulator for the resulting success probability
//!   ([`protocol::Protocol`]),
//! - the analytic upper bounds on that probability in terms of the maximum
//!   energy `||H||_inf` or the average energy of the inputs ([`bounds`]),
//! - the explicit controlled-flip Hamiltonian that nearly attains the
//!   max-energy bound and distinguishes two states perfectly at
//!   `t = hbar*pi/E_max` ([`attainment`]),
//! - a time-dependent Tsirelson bound for the CHSH game together with the
//!   derived minimum game time and energy witness ([`chsh`]),
//! - the low-energy spectral truncation with its `2*epsilon` success-probability
//!   guarantee ([`truncation`]),
//! - seeded random instance generation and CSV sweep drivers backing the
//!   `tqsd` command-line tool ([`sampling`], [`sweep`]).
//!
//! All operators are dense complex matrices (`dim <= 64` is the design
//! target); eigendecompositions are exact for Hermitian inputs, so no
//! truncation tolerances leak into the physics.

// Guards of the form `!(x > 0.0)` are deliberate: they reject NaN along
// with the out-of-range values, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Loops over question/answer/symbol labels stay index-form to mirror the
// two-outcome structure they enumerate.
#![allow(clippy::needless_range_loop)]

pub mod attainment;
pub mod bounds;
pub mod chsh;
mod error;
pub mod linalg;
pub mod protocol;
pub mod sampling;
pub mod states;
pub mod sweep;
pub mod truncation;

pub use error::{Error, Result};
pub use linalg::{CMatrix, HermitianOperator, C64};
pub use states::{DensityMatrix, EmbeddedState, Ensemble};
