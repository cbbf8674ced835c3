//! Exact arithmetic substrate: GF(2) linear algebra, GF(2ⁿ) fields, exact
//! tail probabilities and the seedable random source shared by every
//! experiment.

mod bitmatrix;
mod bits;
mod field;
mod rng;
pub mod stats;

pub use bitmatrix::{gf2_rank, gf2_solve, BitMatrix, Solution};
pub use bits::BitString;
pub use field::{is_irreducible, Field2n, FieldElement, MAX_DEGREE};
pub use rng::Rng;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MathError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field degree {0} outside 1..=16")]
    DegreeOutOfRange(u32),
    #[error("value {value} is not an element of GF(2^{n})")]
    ElementOutOfRange { value: u32, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid bit character {ch:?} at position {pos}")]
    BadBitChar { ch: char, pos: usize },
}
