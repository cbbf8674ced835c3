use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{DenseState, C0};
use super::SimError;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    /// Unitary on `targets`; `targets[j]` is bit `j` of the matrix index.
    Custom {
        targets: Vec<usize>,
        matrix: DMatrix<Complex64>,
    },
}

impl Gate {
    pub fn custom(targets: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Gate, SimError> {
        let dim = 1usize << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(SimError::DimensionMismatch { expected: dim, found: matrix.nrows() });
        }
        let defect = (matrix.adjoint() * &matrix - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(SimError::NotUnitary(defect));
        }
        Ok(Gate::Custom { targets, matrix })
    }

    pub fn targets(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => {
                vec![*q]
            }
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Custom { targets, .. } => targets.clone(),
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::T(q) => Gate::Tdg(*q),
            Gate::Tdg(q) => Gate::T(*q),
            Gate::Custom { targets, matrix } => Gate::Custom { targets: targets.clone(), matrix: matrix.adjoint() },
            self_inverse => self_inverse.clone(),
        }
    }

    fn check(&self, n: usize) -> Result<(), SimError> {
        let t = self.targets();
        for (i, &q) in t.iter().enumerate() {
            if q >= n || t[..i].contains(&q) {
                return Err(SimError::BadTargets { targets: t, num_qubits: n });
            }
        }
        Ok(())
    }
}

fn phase(q: usize, z: Complex64, amps: &mut [Complex64]) {
    let bit = 1 << q;
    for (i, a) in amps.iter_mut().enumerate() {
        if i & bit != 0 {
            *a *= z;
        }
    }
}

impl DenseState {
    /// Applies `g` in place.
    pub fn apply(&mut self, g: &Gate) -> Result<(), SimError> {
        g.check(self.num_qubits())?;
        let amps = self.amplitudes_mut();
        let t = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        match *g {
            Gate::H(q) => {
                let bit = 1 << q;
                for i in 0..amps.len() {
                    if i & bit == 0 {
                        let (a, b) = (amps[i], amps[i | bit]);
                        amps[i] = (a + b) * FRAC_1_SQRT_2;
                        amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::X(q) => {
                let bit = 1 << q;
                for i in 0..amps.len() {
                    if i & bit == 0 {
                        amps.swap(i, i | bit);
                    }
                }
            }
            Gate::Z(q) => phase(q, Complex64::new(-1.0, 0.0), amps),
            Gate::S(q) => phase(q, Complex64::i(), amps),
            Gate::Sdg(q) => phase(q, -Complex64::i(), amps),
            Gate::T(q) => phase(q, t, amps),
            Gate::Tdg(q) => phase(q, t.conj(), amps),
            Gate::Cnot { control, target } => {
                let (c, tb) = (1 << control, 1 << target);
                for i in 0..amps.len() {
                    if i & c != 0 && i & tb == 0 {
                        amps.swap(i, i | tb);
                    }
                }
            }
            Gate::Custom { ref targets, ref matrix } => {
                let k = targets.len();
                let mask: usize = targets.iter().map(|&q| 1 << q).sum();
                let offsets: Vec<usize> = (0..1usize << k)
                    .map(|local| (0..k).filter(|&j| local >> j & 1 == 1).map(|j| 1 << targets[j]).sum())
                    .collect();
                let mut buf = vec![C0; 1 << k];
                for base in 0..amps.len() {
                    if base & mask != 0 {
                        continue;
                    }
                    for (slot, &off) in buf.iter_mut().zip(&offsets) {
                        *slot = amps[base | off];
                    }
                    for (r, &off) in offsets.iter().enumerate() {
                        amps[base | off] = (0..buf.len()).map(|c| matrix[(r, c)] * buf[c]).sum();
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<(), SimError> {
        gates.iter().try_for_each(|g| self.apply(g))
    }
}

/// Returns `g · s`.
pub fn apply_gate(s: &DenseState, g: &Gate) -> Result<DenseState, SimError> {
    let mut out = s.clone();
    out.apply(g)?;
    Ok(out)
}

/// Gates of the inverse circuit, in application order.
pub fn inverse_circuit(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().map(Gate::inverse).collect()
}
