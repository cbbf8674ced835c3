use std::f64::consts::PI;

use num_complex::Complex64;

use super::DesignError;
use crate::mathcore::{BitString, Field2n, FieldElement};
use crate::quantumsim::{DenseState, MAX_QUBITS};

#[derive(Clone, Debug)]
pub struct DesignSpec {
    pub n: usize,
    /// Maximum polynomial degree.
    pub d: usize,
    pub field: Field2n,
}

impl DesignSpec {
    pub fn new(n: usize, d: usize) -> Result<Self, DesignError> {
        if n > MAX_QUBITS {
            return Err(DesignError::TooLarge(format!("{n} qubits exceeds the dense limit {MAX_QUBITS}")));
        }
        Ok(Self { n, d, field: Field2n::new(n as u32)? })
    }

    pub fn index_bits(&self) -> usize {
        self.n * (self.d + 1)
    }

    /// Coefficients `c_0 … c_d`, chunk `i` of the index giving `c_i`.
    pub fn coefficients(&self, index: &BitString) -> Result<Vec<FieldElement>, DesignError> {
        if index.len() != self.index_bits() {
            return Err(DesignError::IndexLength { expected: self.index_bits(), found: index.len() });
        }
        Ok((0..=self.d).map(|i| FieldElement(index.slice(i * self.n, self.n).to_u64() as u32)).collect())
    }

    /// Amplitudes for explicit coefficients.
    pub(crate) fn amplitudes(&self, coeffs: &[FieldElement]) -> Vec<Complex64> {
        let dim = 1usize << self.n;
        let norm = 1.0 / (dim as f64).sqrt();
        self.field
            .elements()
            .map(|a| {
                let v = self.field.eval_poly(coeffs, a).to_int();
                Complex64::from_polar(norm, 2.0 * PI * v as f64 / dim as f64)
            })
            .collect()
    }
}

pub fn design_state(spec: &DesignSpec, index: &BitString) -> Result<DenseState, DesignError> {
    let coeffs = spec.coefficients(index)?;
    Ok(DenseState::from_amplitudes(spec.amplitudes(&coeffs))?)
}
