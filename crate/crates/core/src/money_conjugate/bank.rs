use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng as _;

use super::note::{Basis, ConjugateNote, QubitSpec};
use super::prf::Prf;
use super::MoneyError;
use crate::mathcore::{BitString, Rng};
use crate::quantumsim::measure_projector;

/// Outcome of an authentication that hands the measured note back.
#[derive(Clone, Debug, PartialEq)]
pub struct Verified {
    pub accept: bool,
    pub post: ConjugateNote,
}

/// Bank-side verification of conjugate-coding notes.
pub trait Authenticator {
    /// Accept bit plus the post-measurement note (query-secure interface).
    fn verify_q(&self, note: &ConjugateNote, rng: &mut Rng) -> Result<Verified, MoneyError>;

    /// Accept bit only; the measured note stays with the bank.
    fn verify(&self, note: &ConjugateNote, rng: &mut Rng) -> Result<bool, MoneyError> {
        self.verify_q(note, rng).map(|v| v.accept)
    }
}

/// Measures every qubit in its recorded basis; accepts iff all values match.
fn measure_against(note: &ConjugateNote, specs: &[QubitSpec], rng: &mut Rng) -> Result<Verified, MoneyError> {
    if note.qubits.len() != specs.len() {
        return Err(MoneyError::WrongQubitCount { expected: specs.len(), found: note.qubits.len() });
    }
    let mut accept = true;
    let mut qubits = Vec::with_capacity(specs.len());
    for (i, (q, spec)) in note.qubits.iter().zip(specs).enumerate() {
        if q.num_qubits() != 1 {
            return Err(MoneyError::BadQubit(i));
        }
        let m = measure_projector(q, &spec.projector(), rng).map_err(|_| MoneyError::BadQubit(i))?;
        accept &= m.outcome;
        qubits.push(m.post);
    }
    Ok(Verified { accept, post: ConjugateNote { serial: note.serial.clone(), qubits } })
}

/// Wiesner's scheme: the bank keeps a classical description of every note.
#[derive(Debug)]
pub struct WiesnerBank {
    serial_len: usize,
    db: Mutex<HashMap<BitString, Vec<QubitSpec>>>,
}

impl Default for WiesnerBank {
    fn default() -> Self {
        Self::new(32)
    }
}

impl WiesnerBank {
    pub fn new(serial_len: usize) -> Self {
        Self { serial_len, db: Mutex::new(HashMap::new()) }
    }

    /// Mints a note of `n` qubits, each uniform over `{|0⟩,|1⟩,|+⟩,|−⟩}`.
    pub fn mint(&self, n: usize, rng: &mut Rng) -> ConjugateNote {
        let specs: Vec<QubitSpec> = (0..n).map(|_| QubitSpec::ALL[rng.random_range(0..4)]).collect();
        let mut db = self.db.lock().expect("bank lock poisoned");
        let serial = loop {
            let candidate = BitString::from_u64(rng.random(), self.serial_len);
            if !db.contains_key(&candidate) {
                break candidate;
            }
        };
        db.insert(serial.clone(), specs.clone());
        ConjugateNote::from_specs(serial, &specs)
    }

    pub fn issued(&self) -> usize {
        self.db.lock().expect("bank lock poisoned").len()
    }

    /// Classical record for a serial (for tests and experiment bookkeeping).
    pub fn record(&self, serial: &BitString) -> Option<Vec<QubitSpec>> {
        self.db.lock().expect("bank lock poisoned").get(serial).cloned()
    }
}

impl Authenticator for WiesnerBank {
    fn verify_q(&self, note: &ConjugateNote, rng: &mut Rng) -> Result<Verified, MoneyError> {
        let specs = self.record(&note.serial).ok_or_else(|| MoneyError::UnknownSerial(note.serial.to_string()))?;
        measure_against(note, &specs, rng)
    }
}

/// BBBW: note states are derived from the serial with a secret keyed PRF.
#[derive(Debug, Clone)]
pub struct BbbwBank {
    prf: Prf,
}

impl BbbwBank {
    /// `n` is the serial length and PRF output length; notes carry `n/2` qubits.
    pub fn new(n: usize, rng: &mut Rng) -> Result<Self, MoneyError> {
        Self::with_prf(Prf::random(n, rng))
    }

    pub fn with_prf(prf: Prf) -> Result<Self, MoneyError> {
        if prf.output_len() % 2 == 1 || prf.output_len() == 0 {
            return Err(MoneyError::OddLength(prf.output_len()));
        }
        Ok(Self { prf })
    }

    pub fn n(&self) -> usize {
        self.prf.output_len()
    }

    fn specs(&self, serial: &BitString) -> Result<Vec<QubitSpec>, MoneyError> {
        if serial.len() != self.n() {
            return Err(MoneyError::SerialLength { expected: self.n(), found: serial.len() });
        }
        let g = self.prf.eval(serial);
        Ok((0..self.n() / 2).map(|i| QubitSpec::from_block(g.get(2 * i), g.get(2 * i + 1))).collect())
    }

    pub fn mint(&self, serial: BitString) -> Result<ConjugateNote, MoneyError> {
        let specs = self.specs(&serial)?;
        Ok(ConjugateNote::from_specs(serial, &specs))
    }

    pub fn mint_random(&self, rng: &mut Rng) -> ConjugateNote {
        let bits: Vec<bool> = (0..self.n()).map(|_| rng.random()).collect();
        self.mint(BitString::from_bools(&bits)).expect("serial has the right length")
    }
}

impl Authenticator for BbbwBank {
    fn verify_q(&self, note: &ConjugateNote, rng: &mut Rng) -> Result<Verified, MoneyError> {
        let specs = self.specs(&note.serial)?;
        measure_against(note, &specs, rng)
    }
}

/// Per-qubit basis of a spec list, for reporting.
pub fn bases(specs: &[QubitSpec]) -> Vec<Basis> {
    specs.iter().map(|s| s.basis).collect()
}
