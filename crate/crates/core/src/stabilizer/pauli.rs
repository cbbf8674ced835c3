use std::fmt;

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::StabError;
use crate::mathcore::{BitString, Rng};
use crate::quantumsim::DenseState;

pub const MAX_QUBITS: usize = 64;

pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Hermitian Pauli operator `(−1)^sign · P₀ ⊗ … ⊗ P_{n−1}`.
///
/// Qubit `k` is `I`, `X`, `Z`, `Y` for `(x_k, z_k)` = `00`, `10`, `01`, `11`.
/// As an operator this equals `(−1)^sign · i^{|x∧z|} · X^x Z^z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPauli {
    pub n: usize,
    pub sign: bool,
    pub x: u64,
    pub z: u64,
}

impl SignedPauli {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS);
        Self { n, sign: false, x: 0, z: 0 }
    }

    pub fn new(n: usize, sign: bool, x: u64, z: u64) -> Self {
        assert!(n <= MAX_QUBITS);
        assert_eq!(x & !mask(n), 0, "x bits beyond qubit count");
        assert_eq!(z & !mask(n), 0, "z bits beyond qubit count");
        Self { n, sign, x, z }
    }

    pub fn single_x(n: usize, q: usize) -> Self {
        Self::new(n, false, 1 << q, 0)
    }

    pub fn single_z(n: usize, q: usize) -> Self {
        Self::new(n, false, 0, 1 << q)
    }

    /// Uniform over the `2^{2n+1}` signed Paulis.
    pub fn random(n: usize, rng: &mut Rng) -> Self {
        let m = mask(n);
        Self { n, sign: rng.random(), x: rng.random::<u64>() & m, z: rng.random::<u64>() & m }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn negated(&self) -> Self {
        Self { sign: !self.sign, ..*self }
    }

    /// The unsigned part `(x, z)`.
    pub fn vector(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    pub fn commutes(&self, other: &SignedPauli) -> bool {
        debug_assert_eq!(self.n, other.n);
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `self · other = i^k · result` with `k ∈ {0,1,2,3}`; `k` is even
    /// exactly when the operators commute, and then it is absorbed into the
    /// sign so the returned phase is 0.
    pub fn mul(&self, other: &SignedPauli) -> (u8, SignedPauli) {
        debug_assert_eq!(self.n, other.n);
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = (self.x & self.z).count_ones() as i64 + (other.x & other.z).count_ones() as i64
            - (x & z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64;
        let e = e.rem_euclid(4) as u8;
        let sign = self.sign ^ other.sign ^ (e >= 2);
        (e & 1, SignedPauli { n: self.n, sign, x, z })
    }

    /// Product of two commuting Paulis.
    pub fn mul_commuting(&self, other: &SignedPauli) -> SignedPauli {
        let (phase, p) = self.mul(other);
        debug_assert_eq!(phase, 0, "product of anticommuting Paulis is not Hermitian");
        p
    }

    /// `[sign | x₀…x_{n−1} | z₀…z_{n−1}]`, `2n + 1` bits.
    pub fn to_bits(&self) -> BitString {
        let mut b = BitString::zeros(2 * self.n + 1);
        b.set(0, self.sign);
        for k in 0..self.n {
            b.set(1 + k, self.x >> k & 1 == 1);
            b.set(1 + self.n + k, self.z >> k & 1 == 1);
        }
        b
    }

    pub fn from_bits(bits: &BitString, n: usize) -> Result<Self, StabError> {
        if bits.len() != 2 * n + 1 {
            return Err(StabError::DimensionMismatch { expected: 2 * n + 1, found: bits.len() });
        }
        let (mut x, mut z) = (0u64, 0u64);
        for k in 0..n {
            x |= (bits.get(1 + k) as u64) << k;
            z |= (bits.get(1 + n + k) as u64) << k;
        }
        Ok(Self { n, sign: bits.get(0), x, z })
    }

    /// Applies the operator to a dense state (qubit 0 = least significant bit).
    pub fn apply_dense(&self, s: &DenseState) -> Result<DenseState, StabError> {
        if s.num_qubits() != self.n {
            return Err(StabError::DimensionMismatch { expected: self.n, found: s.num_qubits() });
        }
        Ok(DenseState::from_amplitudes(self.apply_to_amplitudes(s.amplitudes())).expect("Pauli action is unitary"))
    }

    pub(crate) fn apply_to_amplitudes(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let ipow = [Complex64::new(1.0, 0.0), Complex64::i(), Complex64::new(-1.0, 0.0), -Complex64::i()];
        let base = ipow[((self.x & self.z).count_ones() as usize + if self.sign { 2 } else { 0 }) % 4];
        let x = self.x as usize;
        let z = self.z as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (b, a) in amps.iter().enumerate() {
            let phase = if (z & b).count_ones() % 2 == 1 { -base } else { base };
            out[b ^ x] = phase * a;
        }
        out
    }

    /// `⟨s|P|s⟩`, always real for Hermitian `P`.
    pub fn expectation_dense(&self, s: &DenseState) -> Result<f64, StabError> {
        Ok(s.inner(&self.apply_dense(s)?).expect("same dimension").re)
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign { "-" } else { "+" })?;
        for k in 0..self.n {
            let c = match (self.x >> k & 1, self.z >> k & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPauli({self})")
    }
}

impl std::str::FromStr for SignedPauli {
    type Err = StabError;

    /// Parses strings like `+XIZ` or `-YY` (qubit 0 first; sign optional).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let n = body.chars().count();
        if n > MAX_QUBITS {
            return Err(StabError::QubitCount(n));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (k, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x |= 1 << k,
                'Z' => z |= 1 << k,
                'Y' => {
                    x |= 1 << k;
                    z |= 1 << k;
                }
                other => return Err(StabError::BadPauliChar(other)),
            }
        }
        Ok(Self { n, sign, x, z })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantumsim::haar_state;

    fn p(s: &str) -> SignedPauli {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_commutation() {
        assert!(p("X").commutes(&p("X")));
        assert!(!p("X").commutes(&p("Z")));
        assert!(p("XX").commutes(&p("ZZ")));
    }

    #[test]
    fn commuting_fraction_exhaustive_n2() {
        let all: Vec<SignedPauli> = (0..16u64).map(|v| SignedPauli::new(2, false, v & 3, v >> 2)).collect();
        let mut commuting = 0;
        let mut total = 0;
        for a in &all[1..] {
            for b in &all[1..] {
                total += 1;
                if a.commutes(b) {
                    commuting += 1;
                }
            }
        }
        // For a fixed non-identity a, exactly half of all 16 Paulis commute with it (8),
        // one of which is the identity: 7 of the 15 non-identity ones.
        assert_eq!(total, 225);
        assert_eq!(commuting, 15 * 7);
    }

    #[test]
    fn random_pairs_commute_half_the_time() {
        let mut rng = Rng::new(3);
        let trials = 10_000;
        let hits = (0..trials)
            .filter(|_| SignedPauli::random(6, &mut rng).commutes(&SignedPauli::random(6, &mut rng)))
            .count();
        // Exact rate: 1/2 + 1/2·P(either is ±identity) ≈ 1/2 + 2^{-12}.
        let expected = 0.5 + 0.5 * (1.0 - (1.0 - 1.0 / 4096.0f64).powi(2));
        let se = (0.25 / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - expected).abs() < 5.0 * se);
    }

    #[test]
    fn products_match_dense_matrices() {
        let mut rng = Rng::new(4);
        for _ in 0..200 {
            let a = SignedPauli::random(3, &mut rng);
            let b = SignedPauli::random(3, &mut rng);
            let s = haar_state(3, &mut rng).unwrap();
            let (phase, c) = a.mul(&b);
            let ab = a.apply_dense(&b.apply_dense(&s).unwrap()).unwrap();
            let cs = c.apply_dense(&s).unwrap();
            let k = if phase == 1 { Complex64::i() } else { Complex64::new(1.0, 0.0) };
            for (u, v) in ab.amplitudes().iter().zip(cs.amplitudes()) {
                assert!((u - k * v).norm() < 1e-12);
            }
            assert_eq!(phase == 0, a.commutes(&b));
        }
    }

    #[test]
    fn y_is_hermitian_and_squares_to_identity() {
        let mut rng = Rng::new(5);
        let s = haar_state(2, &mut rng).unwrap();
        let y = p("YI");
        let twice = y.apply_dense(&y.apply_dense(&s).unwrap()).unwrap();
        for (u, v) in twice.amplitudes().iter().zip(s.amplitudes()) {
            assert!((u - v).norm() < 1e-12);
        }
        let e = y.expectation_dense(&s).unwrap();
        assert!(e.abs() <= 1.0 + 1e-12);
        assert_eq!(y.mul(&y), (0, SignedPauli::identity(2)));
    }

    #[test]
    fn bit_encoding_round_trip() {
        let q = p("-XZY");
        let bits = q.to_bits();
        assert_eq!(bits.len(), 7);
        assert_eq!(bits.to_string(), "1101011");
        assert_eq!(SignedPauli::from_bits(&bits, 3).unwrap(), q);
        assert_eq!(q.to_string(), "-XZY");
    }
}
