use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::pauli::{SignedPauli, MAX_QUBITS};
use super::StabError;
use crate::mathcore::{BitMatrix, BitString, Rng};
use crate::quantumsim::DenseState;

pub const MAX_DENSE_QUBITS: usize = 12;

/// Pure stabilizer state given by `n` independent, pairwise commuting
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilizerTableau {
    n: usize,
    gens: Vec<SignedPauli>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliMeasurement {
    /// `+1` or `−1`.
    pub outcome: i8,
    pub deterministic: bool,
    pub post: StabilizerTableau,
}

/// Incremental GF(2) basis over symplectic vectors `x | z << n`, remembering
/// which generators each reduced row combines.
struct SpanBasis {
    rows: Vec<(u128, u64)>,
}

fn symplectic(p: &SignedPauli) -> u128 {
    p.x as u128 | (p.z as u128) << 64
}

impl SpanBasis {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    /// Reduces `v`; returns the residue and the combination mask used.
    fn reduce(&self, mut v: u128, mut combo: u64) -> (u128, u64) {
        for &(r, c) in &self.rows {
            let pivot = 127 - r.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= r;
                combo ^= c;
            }
        }
        (v, combo)
    }

    /// Adds a vector; returns false if it was already in the span.
    fn insert(&mut self, v: u128, combo: u64) -> bool {
        let (v, combo) = self.reduce(v, combo);
        if v == 0 {
            return false;
        }
        // Keep rows sorted by descending pivot so one reduction pass suffices.
        let pivot = 127 - v.leading_zeros();
        let at = self.rows.iter().position(|&(r, _)| 127 - r.leading_zeros() < pivot).unwrap_or(self.rows.len());
        self.rows.insert(at, (v, combo));
        true
    }
}

impl StabilizerTableau {
    /// `|0…0⟩`, stabilized by `Z_k` for every qubit.
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&n));
        Self { n, gens: (0..n).map(|k| SignedPauli::single_z(n, k)).collect() }
    }

    /// Validates commutation and independence of `n` generators.
    pub fn from_generators(n: usize, gens: Vec<SignedPauli>) -> Result<Self, StabError> {
        if !(1..=MAX_QUBITS).contains(&n) {
            return Err(StabError::QubitCount(n));
        }
        if gens.len() != n {
            return Err(StabError::InvalidTableau(format!("expected {n} generators, got {}", gens.len())));
        }
        let mut basis = SpanBasis::new();
        for (i, g) in gens.iter().enumerate() {
            if g.n != n {
                return Err(StabError::DimensionMismatch { expected: n, found: g.n });
            }
            if let Some(j) = gens[..i].iter().position(|h| !h.commutes(g)) {
                return Err(StabError::InvalidTableau(format!("generators {j} and {i} anticommute")));
            }
            if !basis.insert(symplectic(g), 0) {
                return Err(StabError::InvalidTableau(format!("generator {i} is dependent")));
            }
        }
        Ok(Self { n, gens })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[SignedPauli] {
        &self.gens
    }

    /// Uniformly random stabilizer state: each generator is drawn uniformly
    /// from the Paulis commuting with and independent of the previous ones,
    /// with a uniform sign.
    pub fn random(n: usize, rng: &mut Rng) -> Result<Self, StabError> {
        Self::complete_random(n, Vec::new(), rng)
    }

    /// Extends `partial` (pairwise commuting, independent) to a full
    /// generating set, adding generators by the same rule as [`Self::random`].
    pub fn complete_random(n: usize, partial: Vec<SignedPauli>, rng: &mut Rng) -> Result<Self, StabError> {
        if !(1..=MAX_QUBITS).contains(&n) {
            return Err(StabError::QubitCount(n));
        }
        if partial.len() > n {
            return Err(StabError::InvalidTableau(format!("{} generators for {n} qubits", partial.len())));
        }
        let mut basis = SpanBasis::new();
        for (i, g) in partial.iter().enumerate() {
            if g.n != n {
                return Err(StabError::DimensionMismatch { expected: n, found: g.n });
            }
            if partial[..i].iter().any(|h| !h.commutes(g)) || !basis.insert(symplectic(g), 0) {
                return Err(StabError::InvalidTableau(format!("partial generator {i} anticommutes or is dependent")));
            }
        }
        let mut gens = partial;
        while gens.len() < n {
            // v = (vx | vz) commutes with g iff g.z·vx + g.x·vz = 0.
            let mut constraints = BitMatrix::zeros(gens.len(), 2 * n);
            for (r, g) in gens.iter().enumerate() {
                for k in 0..n {
                    constraints.set(r, k, g.z >> k & 1 == 1);
                    constraints.set(r, n + k, g.x >> k & 1 == 1);
                }
            }
            let null = constraints.nullspace();
            let p = loop {
                let mut v = BitString::zeros(2 * n);
                for b in &null {
                    if rng.random::<bool>() {
                        v.xor_assign(b);
                    }
                }
                let (mut x, mut z) = (0u64, 0u64);
                for k in 0..n {
                    x |= (v.get(k) as u64) << k;
                    z |= (v.get(n + k) as u64) << k;
                }
                let cand = SignedPauli::new(n, rng.random(), x, z);
                if basis.reduce(symplectic(&cand), 0).0 != 0 {
                    break cand;
                }
            };
            basis.insert(symplectic(&p), 0);
            gens.push(p);
        }
        Ok(Self { n, gens })
    }

    /// Uniform element of the stabilizer group (identity included).
    pub fn random_group_element(&self, rng: &mut Rng) -> SignedPauli {
        let mut acc = SignedPauli::identity(self.n);
        for g in &self.gens {
            if rng.random::<bool>() {
                acc = acc.mul_commuting(g);
            }
        }
        acc
    }

    /// Product of the generators selected by `subset` (bit `i` = generator `i`).
    pub fn group_element(&self, subset: u64) -> SignedPauli {
        self.gens
            .iter()
            .enumerate()
            .filter(|(i, _)| subset >> i & 1 == 1)
            .fold(SignedPauli::identity(self.n), |acc, (_, g)| acc.mul_commuting(g))
    }

    /// Subset of generators whose product has the same unsigned part as `p`,
    /// if any.
    pub fn decompose(&self, p: &SignedPauli) -> Option<u64> {
        let mut basis = SpanBasis::new();
        for (i, g) in self.gens.iter().enumerate() {
            basis.insert(symplectic(g), 1 << i);
        }
        let (residue, combo) = basis.reduce(symplectic(p), 0);
        (residue == 0).then_some(combo)
    }

    /// `+1` / `−1` if `±p` stabilizes the state, `0` if the outcome is random.
    pub fn expectation(&self, p: &SignedPauli) -> i8 {
        if self.gens.iter().any(|g| !g.commutes(p)) {
            return 0;
        }
        let combo = self.decompose(p).expect("commutes with a maximal commuting set");
        if self.group_element(combo).sign == p.sign {
            1
        } else {
            -1
        }
    }

    pub fn contains(&self, p: &SignedPauli) -> bool {
        self.expectation(p) == 1
    }

    /// Measures the observable `p`.
    pub fn measure_pauli(&self, p: &SignedPauli, rng: &mut Rng) -> Result<PauliMeasurement, StabError> {
        if p.n != self.n {
            return Err(StabError::DimensionMismatch { expected: self.n, found: p.n });
        }
        let Some(first) = self.gens.iter().position(|g| !g.commutes(p)) else {
            let outcome = self.expectation(p);
            return Ok(PauliMeasurement { outcome, deterministic: true, post: self.clone() });
        };
        let outcome: i8 = if rng.random::<bool>() { 1 } else { -1 };
        Ok(PauliMeasurement { outcome, deterministic: false, post: self.collapse(first, p, outcome) })
    }

    /// Post-measurement tableau for a chosen outcome of an anticommuting
    /// measurement; `first` is the first generator anticommuting with `p`.
    fn collapse(&self, first: usize, p: &SignedPauli, outcome: i8) -> StabilizerTableau {
        let mut gens = self.gens.clone();
        let pivot = gens[first];
        for g in gens.iter_mut().skip(first + 1) {
            if !g.commutes(p) {
                *g = g.mul_commuting(&pivot);
            }
        }
        gens[first] = if outcome == 1 { *p } else { p.negated() };
        StabilizerTableau { n: self.n, gens }
    }

    /// Post-measurement state for the given outcome, if it has nonzero probability.
    pub fn project(&self, p: &SignedPauli, outcome: i8) -> Option<StabilizerTableau> {
        match self.gens.iter().position(|g| !g.commutes(p)) {
            Some(first) => Some(self.collapse(first, p, outcome)),
            None => (self.expectation(p) == outcome).then(|| self.clone()),
        }
    }

    /// Reduced row echelon form over columns `x₀…x_{n−1}, z₀…z_{n−1}`.
    /// Two tableaux describe the same state iff their canonical forms agree.
    pub fn canonical_form(&self) -> StabilizerTableau {
        let n = self.n;
        let mut rows = self.gens.clone();
        let bit = |p: &SignedPauli, col: usize| -> bool {
            if col < n {
                p.x >> col & 1 == 1
            } else {
                p.z >> (col - n) & 1 == 1
            }
        };
        let mut r = 0;
        for col in 0..2 * n {
            let Some(piv) = (r..n).find(|&i| bit(&rows[i], col)) else {
                continue;
            };
            rows.swap(r, piv);
            for i in 0..n {
                if i != r && bit(&rows[i], col) {
                    rows[i] = rows[i].mul_commuting(&rows[r]);
                }
            }
            r += 1;
            if r == n {
                break;
            }
        }
        StabilizerTableau { n, gens: rows }
    }

    pub fn same_state(&self, other: &StabilizerTableau) -> bool {
        self.n == other.n && self.canonical_form() == other.canonical_form()
    }

    /// Conjugates every generator by a Hadamard on qubit `q`.
    pub fn apply_h(&mut self, q: usize) {
        for g in &mut self.gens {
            let (xq, zq) = (g.x >> q & 1, g.z >> q & 1);
            g.sign ^= xq & zq == 1;
            g.x = (g.x & !(1 << q)) | zq << q;
            g.z = (g.z & !(1 << q)) | xq << q;
        }
    }

    /// Conjugates by the phase gate on qubit `q`.
    pub fn apply_s(&mut self, q: usize) {
        for g in &mut self.gens {
            let (xq, zq) = (g.x >> q & 1, g.z >> q & 1);
            g.sign ^= xq & zq == 1;
            g.z ^= xq << q;
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        for g in &mut self.gens {
            let (xa, za) = (g.x >> control & 1, g.z >> control & 1);
            let (xb, zb) = (g.x >> target & 1, g.z >> target & 1);
            g.sign ^= xa & zb & (xb ^ za ^ 1) == 1;
            g.x ^= xa << target;
            g.z ^= zb << control;
        }
    }

    /// Conjugation by the Pauli `p` flips the sign of each anticommuting generator.
    pub fn apply_pauli(&mut self, p: &SignedPauli) {
        for g in &mut self.gens {
            if !g.commutes(p) {
                g.sign = !g.sign;
            }
        }
    }

    /// Dense amplitudes, with global phase chosen so the first nonzero
    /// amplitude is real and positive.
    pub fn to_statevector(&self) -> Result<DenseState, StabError> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(StabError::TooLargeForDense(self.n));
        }
        let dim = 1usize << self.n;
        let generic: Vec<Complex64> = (0..dim)
            .map(|b| {
                Complex64::from_polar(1.0, (b as f64 * 0.618_033_988_749_895).fract() * std::f64::consts::TAU + 0.1)
            })
            .collect();
        let project = |mut v: Vec<Complex64>| -> Vec<Complex64> {
            for g in &self.gens {
                let gv = g.apply_to_amplitudes(&v);
                for (a, b) in v.iter_mut().zip(gv) {
                    *a = (*a + b) * 0.5;
                }
            }
            v
        };
        let norm = |v: &[Complex64]| v.iter().map(|a| a.norm_sqr()).sum::<f64>();
        // A generic start vector overlaps the target with overwhelming
        // likelihood; fall back to basis vectors if it happens not to.
        let mut amps = project(generic);
        if norm(&amps) < 1e-6 / dim as f64 {
            amps = (0..dim)
                .map(|b| {
                    let mut e = vec![Complex64::new(0.0, 0.0); dim];
                    e[b] = Complex64::new(1.0, 0.0);
                    project(e)
                })
                .find(|v| norm(v) > 0.5 / dim as f64)
                .expect("some basis state overlaps the stabilizer state");
        }
        let scale = norm(&amps).sqrt();
        let lead = amps.iter().find(|a| a.norm() > 1e-6 * scale).copied().expect("nonzero state");
        let phase = lead.conj() / lead.norm();
        Ok(DenseState::normalized(amps.into_iter().map(|a| a * phase).collect()).expect("nonzero"))
    }

    /// Every element of the stabilizer group (`2ⁿ` of them).
    pub fn group(&self) -> Vec<SignedPauli> {
        assert!(self.n <= 20, "group enumeration is exponential");
        (0..1u64 << self.n).map(|s| self.group_element(s)).collect()
    }

    pub fn validate(&self) -> Result<(), StabError> {
        Self::from_generators(self.n, self.gens.clone()).map(|_| ())
    }
}

/// Number of `n`-qubit stabilizer states, `2ⁿ ∏_{k=1}^{n} (2^k + 1)`.
pub fn stabilizer_state_count(n: u32) -> u128 {
    (1..=n).fold(1u128 << n, |acc, k| acc * ((1u128 << k) + 1))
}
