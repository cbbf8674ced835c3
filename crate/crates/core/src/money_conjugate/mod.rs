//! Private-key money from conjugate coding (Wiesner and BBBW), with the
//! measure-and-resend forger, a cloning-strategy search and the adaptive
//! query attack.

mod attacks;
mod bank;
mod cloner;
mod note;
mod prf;

pub use attacks::{
    forge, measure_resend_counterfeit, query_attack, AcceptOnlyOracle, BankOracle, QueryAttackResult, QueryOracle,
};
pub use bank::{bases, Authenticator, BbbwBank, Verified, WiesnerBank};
pub use cloner::{optimize_cloner_1qubit, random_unitary, Bloch, ClonerSearch, ClonerStrategy};
pub use note::{Basis, ConjugateNote, QubitSpec};
pub use prf::Prf;

use thiserror::Error;

use crate::quantumsim::SimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoneyError {
    #[error("unknown serial {0}")]
    UnknownSerial(String),
    #[error("note length {0} is odd; BBBW needs an even number of PRF bits")]
    OddLength(usize),
    #[error("serial has {found} bits, expected {expected}")]
    SerialLength { expected: usize, found: usize },
    #[error("note has {found} qubits, expected {expected}")]
    WrongQubitCount { expected: usize, found: usize },
    #[error("register {0} is not a single qubit")]
    BadQubit(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AttackError {
    #[error("oracle returned only an accept bit; the attack needs the post-measurement note")]
    OracleRefused,
    #[error(transparent)]
    Money(#[from] MoneyError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
