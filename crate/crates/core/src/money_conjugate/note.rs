use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mathcore::BitString;
use crate::quantumsim::{DenseState, Projector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Computational basis `{|0⟩, |1⟩}`.
    Z,
    /// Hadamard basis `{|+⟩, |−⟩}`.
    X,
}

/// One of the four conjugate-coding states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitSpec {
    pub basis: Basis,
    /// `|1⟩` in the Z basis, `|−⟩` in the X basis.
    pub value: bool,
}

impl QubitSpec {
    pub const ZERO: QubitSpec = QubitSpec { basis: Basis::Z, value: false };
    pub const ONE: QubitSpec = QubitSpec { basis: Basis::Z, value: true };
    pub const PLUS: QubitSpec = QubitSpec { basis: Basis::X, value: false };
    pub const MINUS: QubitSpec = QubitSpec { basis: Basis::X, value: true };

    pub const ALL: [QubitSpec; 4] = [Self::ZERO, Self::ONE, Self::PLUS, Self::MINUS];

    /// Block decoding `00 ↦ |0⟩, 01 ↦ |1⟩, 10 ↦ |+⟩, 11 ↦ |−⟩`
    /// (first bit picks the basis, second the value).
    pub fn from_block(b0: bool, b1: bool) -> Self {
        QubitSpec { basis: if b0 { Basis::X } else { Basis::Z }, value: b1 }
    }

    pub fn state(&self) -> DenseState {
        let h = FRAC_1_SQRT_2;
        let amps = match (self.basis, self.value) {
            (Basis::Z, false) => [1.0, 0.0],
            (Basis::Z, true) => [0.0, 1.0],
            (Basis::X, false) => [h, h],
            (Basis::X, true) => [h, -h],
        };
        DenseState::from_amplitudes(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect()).expect("unit vector")
    }

    pub fn flipped(&self) -> Self {
        QubitSpec { value: !self.value, ..*self }
    }

    pub(crate) fn projector(&self) -> Projector {
        Projector::Rank1(self.state())
    }
}

/// Banknote of single-qubit registers plus a classical serial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugateNote {
    pub serial: BitString,
    pub qubits: Vec<DenseState>,
}

impl ConjugateNote {
    pub fn from_specs(serial: BitString, specs: &[QubitSpec]) -> Self {
        Self { serial, qubits: specs.iter().map(QubitSpec::state).collect() }
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }
}
