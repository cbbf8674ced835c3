//! Copy-protected point functions `f_s(x) = [x = s]`.
//!
//! Scheme A hands out `U_{g(s)}|0^m⟩` for a circuit decoded from a public
//! pseudorandom expansion `g(s)`; evaluation tests overlap with `U_{g(x)}|0^m⟩`.
//! Scheme B hands out coset states `(|σ⟩ + |σ τ_s⟩)/√2` over the symmetric
//! group; evaluation runs a controlled right-multiplication by `τ_x`.
//!
//! Also here: splitting and mixing pirates, the learning pirate for small
//! families, and the pretty-good-measurement pirate.

mod circuit;
mod perm;
mod pirates;
mod program;
mod scheme_a;
mod scheme_b;

pub use circuit::{decode_circuit, encode_circuit, gate_bit_cost, prg_expand};
pub use perm::{involution_encode, Perm};
pub use pirates::{
    baseline_pirate, learnability_pirate, pgm_confusion_from_gram, pgm_pirate_a, pgm_pirate_b, pgm_success_from_gram,
    split_program, trivial_mix_pirate, LearnResult, PgmReport,
};
pub use program::{EvalOutcome, Program};
pub use scheme_a::{scheme_a_eval, scheme_a_state, scheme_a_vend, ProgramA, SchemeAConfig};
pub use scheme_b::{scheme_b_eval, scheme_b_vend, CosetRegister, ProgramB, MAX_SUPPORT};

use thiserror::Error;

use crate::quantumsim::SimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CopyError {
    #[error("need {needed} bits to decode the circuit, got {available}")]
    InsufficientBits { needed: usize, available: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("input has {found} bits, key has {expected}")]
    InputLength { expected: usize, found: usize },
    #[error("every register is damaged; the program is depleted")]
    Depleted,
    #[error("odd number of parts ({0}) cannot be split evenly")]
    OddSplit(usize),
    #[error("family contains duplicate functions")]
    AmbiguousFamily,
    #[error("{0}")]
    TooLarge(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}
