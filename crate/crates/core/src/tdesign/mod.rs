//! Polynomial-phase states over GF(2ⁿ), their moment operators compared
//! with the Haar ensemble, and a catalogue of distinguishing experiments
//! that may also query the reflection oracle of the state.
//!
//! The state indexed by `x ∈ {0,1}^{n(d+1)}` is
//! `2^{−n/2} Σ_a e^{2πi·p_x(a)/2ⁿ} |a⟩`, where `a` ranges over the field
//! and `p_x` is the degree-`≤ d` polynomial whose `i`-th coefficient is the
//! `i`-th `n`-bit chunk of `x`.

mod distinguish;
mod moments;
mod states;

pub use distinguish::{advantage_bound, distinguisher_advantage, AdvantageReport, Strategy};
pub use moments::{
    design_moment, haar_moment, moment_distance, MomentMode, MomentOperator, MAX_EXACT_INDEX_BITS, MAX_MOMENT_QUBITS,
};
pub use states::{design_state, DesignSpec};

use thiserror::Error;

use crate::mathcore::MathError;
use crate::quantumsim::SimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DesignError {
    #[error("index has {found} bits, expected n(d+1) = {expected}")]
    IndexLength { expected: usize, found: usize },
    #[error("{0}")]
    TooLarge(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("t + 2T = {load} exceeds min(d/2, √(2ⁿ/2)); the advantage bound does not apply")]
    BoundInapplicable { load: usize },
    #[error("need at least one sample")]
    NoSamples,
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
