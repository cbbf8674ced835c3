use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::scheme_a::{scheme_a_eval, ProgramA};
use super::scheme_b::{scheme_b_eval, ProgramB};
use super::CopyError;
use crate::mathcore::{BitString, Rng};
use crate::quantumsim::fidelity;

#[derive(Clone, Debug)]
pub struct EvalOutcome<P> {
    pub value: bool,
    pub post: P,
    /// Sum over measured registers of `√(1 − P[observed outcome])`, the
    /// trace-distance bound on how far each was disturbed.
    pub damage_bound: f64,
}

/// Anything a pirate can hand to a freeloader.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum Program {
    A(ProgramA),
    B(ProgramB),
    /// Ignores its input and answers with a fair coin.
    Guess {
        key_len: usize,
    },
}

impl Program {
    pub fn key_len(&self) -> usize {
        match self {
            Program::A(p) => p.key_len,
            Program::B(p) => p.key_len,
            Program::Guess { key_len } => *key_len,
        }
    }

    /// Number of copies (scheme A) or registers (scheme B).
    pub fn parts(&self) -> usize {
        match self {
            Program::A(p) => p.copies.len(),
            Program::B(p) => p.registers.len(),
            Program::Guess { .. } => 0,
        }
    }

    pub fn eval(&self, x: &BitString, rng: &mut Rng) -> Result<EvalOutcome<Program>, CopyError> {
        Ok(match self {
            Program::A(p) => {
                let o = scheme_a_eval(p, x, rng)?;
                EvalOutcome { value: o.value, post: Program::A(o.post), damage_bound: o.damage_bound }
            }
            Program::B(p) => {
                let o = scheme_b_eval(p, x, rng)?;
                EvalOutcome { value: o.value, post: Program::B(o.post), damage_bound: o.damage_bound }
            }
            Program::Guess { .. } => EvalOutcome { value: rng.random(), post: self.clone(), damage_bound: 0.0 },
        })
    }

    /// Product over parts of the per-part fidelity with `other`; `None` when
    /// the programs are not comparable part by part.
    pub fn fidelity(&self, other: &Program) -> Option<f64> {
        match (self, other) {
            (Program::A(a), Program::A(b)) if a.copies.len() == b.copies.len() => {
                a.copies.iter().zip(&b.copies).map(|(x, y)| fidelity(x, y).ok()).product()
            }
            (Program::B(a), Program::B(b)) if a.registers.len() == b.registers.len() => {
                Some(a.registers.iter().zip(&b.registers).map(|(x, y)| x.fidelity(y)).product())
            }
            _ => None,
        }
    }
}
