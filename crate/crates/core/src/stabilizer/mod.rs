//! Stabilizer-state engine: signed Paulis, generator tableaux, uniform
//! sampling, Pauli measurement and a bridge to the dense simulator.

mod pauli;
mod tableau;

pub use pauli::{SignedPauli, MAX_QUBITS};
pub use tableau::{stabilizer_state_count, PauliMeasurement, StabilizerTableau, MAX_DENSE_QUBITS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabError {
    #[error("qubit count {0} outside supported range 1..=64")]
    QubitCount(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("{0} qubits is too many for a dense state vector (max 12)")]
    TooLargeForDense(usize),
    #[error("invalid Pauli character {0:?}")]
    BadPauliChar(char),
}
