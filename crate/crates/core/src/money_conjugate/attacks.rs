use rand::Rng as _;

use super::bank::{Authenticator, Verified};
use super::note::{Basis, ConjugateNote, QubitSpec};
use super::AttackError;
use crate::mathcore::Rng;
use crate::quantumsim::{measure_projector, DenseState, Gate};

/// Something a counterfeiter can submit notes to.
pub trait QueryOracle {
    /// Submits a note. Oracles that keep the measured note return
    /// [`AttackError::OracleRefused`].
    fn query(&mut self, note: &ConjugateNote) -> Result<Verified, AttackError>;

    fn queries(&self) -> usize;
}

/// Query-secure access: the bank returns the post-measurement note.
pub struct BankOracle<'a, A: Authenticator> {
    bank: &'a A,
    rng: Rng,
    queries: usize,
}

impl<'a, A: Authenticator> BankOracle<'a, A> {
    pub fn new(bank: &'a A, rng: Rng) -> Self {
        Self { bank, rng, queries: 0 }
    }
}

impl<A: Authenticator> QueryOracle for BankOracle<'_, A> {
    fn query(&mut self, note: &ConjugateNote) -> Result<Verified, AttackError> {
        self.queries += 1;
        Ok(self.bank.verify_q(note, &mut self.rng)?)
    }

    fn queries(&self) -> usize {
        self.queries
    }
}

/// Plain private-key access: only the accept bit comes back.
pub struct AcceptOnlyOracle<'a, A: Authenticator> {
    bank: &'a A,
    rng: Rng,
    queries: usize,
}

impl<'a, A: Authenticator> AcceptOnlyOracle<'a, A> {
    pub fn new(bank: &'a A, rng: Rng) -> Self {
        Self { bank, rng, queries: 0 }
    }
}

impl<A: Authenticator> QueryOracle for AcceptOnlyOracle<'_, A> {
    fn query(&mut self, note: &ConjugateNote) -> Result<Verified, AttackError> {
        self.queries += 1;
        self.bank.verify(note, &mut self.rng)?;
        Err(AttackError::OracleRefused)
    }

    fn queries(&self) -> usize {
        self.queries
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryAttackResult {
    pub recovered: Vec<QubitSpec>,
    pub queries: usize,
    /// The victim note after the attack (undamaged for a correct run).
    pub note: ConjugateNote,
}

fn flip(q: &DenseState) -> DenseState {
    let mut out = q.clone();
    out.apply(&Gate::X(0)).expect("single-qubit register");
    out
}

/// Learns every qubit of `note` with one query each: flipping a qubit with
/// `X` leaves `|±⟩` intact (accept) and flips `|0⟩/|1⟩` (reject). The flip
/// is then undone and the qubit read out in its now-known basis.
pub fn query_attack<O: QueryOracle>(
    oracle: &mut O,
    note: &ConjugateNote,
    rng: &mut Rng,
) -> Result<QueryAttackResult, AttackError> {
    let start = oracle.queries();
    let mut current = note.clone();
    let mut recovered = Vec::with_capacity(note.len());
    for i in 0..note.len() {
        let mut probe = current.clone();
        probe.qubits[i] = flip(&probe.qubits[i]);
        let answer = oracle.query(&probe)?;
        let basis = if answer.accept { Basis::X } else { Basis::Z };
        current = answer.post;
        current.qubits[i] = flip(&current.qubits[i]);
        let zero = QubitSpec { basis, value: false };
        let m = measure_projector(&current.qubits[i], &zero.projector(), rng)?;
        current.qubits[i] = m.post;
        recovered.push(QubitSpec { basis, value: !m.outcome });
    }
    Ok(QueryAttackResult { recovered, queries: oracle.queries() - start, note: current })
}

/// Fresh note matching a learned classical description.
pub fn forge(note_serial: &crate::mathcore::BitString, specs: &[QubitSpec]) -> ConjugateNote {
    ConjugateNote::from_specs(note_serial.clone(), specs)
}

/// Measure each qubit in a uniformly guessed basis and emit two copies of
/// the observed state. Both copies pass with probability `(5/8)ⁿ`.
pub fn measure_resend_counterfeit(note: &ConjugateNote, rng: &mut Rng) -> (ConjugateNote, ConjugateNote) {
    let mut qubits = Vec::with_capacity(note.len());
    for q in &note.qubits {
        let basis = if rng.random::<bool>() { Basis::X } else { Basis::Z };
        let zero = QubitSpec { basis, value: false };
        let outcome = measure_projector(q, &zero.projector(), rng).map(|m| m.outcome).unwrap_or(false);
        qubits.push(QubitSpec { basis, value: !outcome }.state());
    }
    let copy = ConjugateNote { serial: note.serial.clone(), qubits };
    (copy.clone(), copy)
}
