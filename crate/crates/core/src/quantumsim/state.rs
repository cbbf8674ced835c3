use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SimError;
use crate::mathcore::Rng;

pub const MAX_QUBITS: usize = 22;

pub(crate) const C0: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Pure state on `num_qubits` qubits. Qubit 0 is the least significant bit
/// of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        assert!(num_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let mut amps = vec![C0; 1 << num_qubits];
        amps[index] = C1;
        Self { num_qubits, amps }
    }

    /// `|+⟩^⊗n`.
    pub fn plus(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self { num_qubits, amps: vec![a; dim] }
    }

    /// Wraps an amplitude vector that must already be normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let s = Self::from_unnormalized(amps)?;
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    /// Wraps and rescales an arbitrary nonzero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let mut s = Self::from_unnormalized(amps)?;
        let norm = s.norm_sqr();
        if norm == 0.0 || !norm.is_finite() {
            return Err(SimError::NotNormalized(norm));
        }
        s.scale(1.0 / norm.sqrt());
        Ok(s)
    }

    fn from_unnormalized(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(SimError::QubitCount(num_qubits));
        }
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn scale(&mut self, k: f64) {
        for a in &mut self.amps {
            *a *= k;
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> Result<Complex64, SimError> {
        self.check_dims(other)?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &DenseState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub(crate) fn check_dims(&self, other: &DenseState) -> Result<(), SimError> {
        if self.num_qubits != other.num_qubits {
            return Err(SimError::DimensionMismatch { expected: self.num_qubits, found: other.num_qubits });
        }
        Ok(())
    }

    /// `self ⊗ other` with `self` on the low qubits.
    pub fn tensor(&self, other: &DenseState) -> DenseState {
        let n = self.num_qubits + other.num_qubits;
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let mut amps = Vec::with_capacity(1 << n);
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        DenseState { num_qubits: n, amps }
    }

    /// Probability of each computational basis outcome.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// JSON array of `[re, im]` pairs in basis order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("amplitudes are finite")
    }
}

impl Serialize for DenseState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        let amps = pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        DenseState::from_amplitudes(amps).map_err(serde::de::Error::custom)
    }
}

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn haar_state(n: usize, rng: &mut Rng) -> Result<DenseState, SimError> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(SimError::QubitCount(n));
    }
    let amps = (0..1usize << n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    DenseState::normalized(amps)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &DenseState, b: &DenseState) -> Result<f64, SimError> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Trace distance between pure states, `√(1 − F)`.
pub fn trace_distance(a: &DenseState, b: &DenseState) -> Result<f64, SimError> {
    Ok((1.0 - fidelity(a, b)?).max(0.0).sqrt())
}
