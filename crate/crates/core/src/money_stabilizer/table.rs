use serde::{Deserialize, Serialize};

use super::StabMoneyError;
use crate::mathcore::BitString;
use crate::stabilizer::SignedPauli;

/// The `ℓ × m` grid of signed Paulis `E_ij`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementTable {
    n: usize,
    l: usize,
    m: usize,
    rows: Vec<SignedPauli>,
}

impl MeasurementTable {
    pub fn new(n: usize, l: usize, m: usize, rows: Vec<SignedPauli>) -> Result<Self, StabMoneyError> {
        if rows.len() != l * m || rows.iter().any(|p| p.n != n) {
            return Err(StabMoneyError::TableShape);
        }
        Ok(Self { n, l, m, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &SignedPauli {
        &self.rows[i * self.m + j]
    }

    /// The `m` measurements attached to state `i`.
    pub fn state_rows(&self, i: usize) -> &[SignedPauli] {
        &self.rows[i * self.m..(i + 1) * self.m]
    }

    pub fn state_rows_mut(&mut self, i: usize) -> &mut [SignedPauli] {
        &mut self.rows[i * self.m..(i + 1) * self.m]
    }

    /// Concatenated `[sign | x | z]` encodings, exactly `(2n+1)ℓm` bits.
    pub fn to_bits(&self) -> BitString {
        let w = 2 * self.n + 1;
        let mut out = BitString::zeros(w * self.rows.len());
        for (r, p) in self.rows.iter().enumerate() {
            let at = r * w;
            out.or_bits(at, p.sign as u64, 1);
            out.or_bits(at + 1, p.x, self.n);
            out.or_bits(at + 1 + self.n, p.z, self.n);
        }
        out
    }

    /// Packed little-endian bytes, `⌈(2n+1)ℓm / 8⌉` of them.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.to_bits().to_bytes()
    }

    pub fn from_bytes(bytes: &[u8], n: usize, l: usize, m: usize) -> Result<Self, StabMoneyError> {
        let w = 2 * n + 1;
        let bits = w * l * m;
        let need = bits.div_ceil(8);
        if bytes.len() < need {
            return Err(StabMoneyError::Parse { offset: bytes.len(), reason: format!("table needs {need} bytes") });
        }
        let all = BitString::from_bytes(&bytes[..need], bits);
        let rows = (0..l * m)
            .map(|r| SignedPauli::from_bits(&all.slice(r * w, w), n).expect("slice has the right width"))
            .collect();
        Self::new(n, l, m, rows)
    }
}
