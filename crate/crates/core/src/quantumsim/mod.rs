//! Dense pure-state simulation: gates, two-outcome measurements, Haar
//! sampling, distance measures, reflection oracles and amplitude
//! amplification.

mod gate;
mod measure;
mod oracle;
mod state;

pub use gate::{apply_gate, inverse_circuit, Gate};
pub use measure::{measure_projector, project_onto, Measurement, Projector};
pub use oracle::{amplitude_amplify, predicted_iterations, reflection_oracle, Amplifier};
pub use state::{fidelity, haar_state, trace_distance, DenseState, MAX_QUBITS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("qubit count {0} outside supported range 1..=22")]
    QubitCount(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("invalid targets {targets:?} for a {num_qubits}-qubit state")]
    BadTargets { targets: Vec<usize>, num_qubits: usize },
    #[error("matrix is not unitary (max defect {0:e})")]
    NotUnitary(f64),
    #[error("start and target have zero overlap; amplification makes no progress")]
    ZeroOverlap,
    #[error("sampled a measurement branch of zero probability")]
    ZeroProbabilityBranch,
}
