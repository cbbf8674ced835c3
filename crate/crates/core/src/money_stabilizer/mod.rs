//! Public-key money from random stabilizer states.
//!
//! A note is `ℓ` random `n`-qubit stabilizer states plus a signed table of
//! `ℓ × m` signed Paulis. Each row is a uniform signed Pauli, except that
//! with probability `ε` it is drawn uniformly from the stabilizer group of
//! its state. Authentication measures one random row per state and accepts
//! on a strict majority of `+1` outcomes.
//!
//! States are simulated by their tableaux. The bank "forgets" them only in
//! the sense that nothing outside this module's tests and attack harnesses
//! looks at them.

mod attacks;
mod params;
mod scheme;
mod serial;
mod signature;
mod table;

pub use attacks::{
    attack_commuting, attack_gaussian, commuting_degrees, null_false_positive_rate, CommutingReport, CommutingState,
    ForgedState, GaussianForgery, DEFAULT_THRESHOLD_C,
};
pub use params::{Regime, SchemeParams, DEFAULT_SLACK, MAX_CELLS, MAX_N};
pub use scheme::{
    acceptance_probability, authenticate, authenticate_with, mint, per_row_plus_rate, per_state_plus_rates,
    reauthenticate_loop, AuthMode, AuthOutcome, ReauthTrace, StabBanknote,
};
pub use serial::{deserialize, serialize, NoteFile, MAGIC, STATE_MARKER};
pub use signature::{BankKeys, VerificationKey};
pub use table::MeasurementTable;

use thiserror::Error;

use crate::stabilizer::StabError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabMoneyError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("measurement table shape does not match the note")]
    TableShape,
    #[error("signature on the measurement table does not verify")]
    BadSignature,
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
    #[error(transparent)]
    Stabilizer(#[from] StabError),
}
