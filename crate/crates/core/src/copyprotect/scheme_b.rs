use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::perm::{involution_encode, Perm};
use super::program::EvalOutcome;
use super::CopyError;
use crate::mathcore::{BitString, Rng};

pub const MAX_SUPPORT: usize = 8;
const CERTAIN: f64 = 1.0 - 1e-12;

/// Sparse superposition over permutations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosetRegister {
    pub support: Vec<(Perm, Complex64)>,
    /// Set once an evaluation has changed the register.
    pub damaged: bool,
}

impl CosetRegister {
    /// `(|σ⟩ + |σ τ⟩)/√2`.
    pub fn coset(sigma: Perm, tau: &Perm) -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let other = sigma.compose(tau);
        Self { support: vec![(sigma, a), (other, a)], damaged: false }
    }

    /// A single basis permutation.
    pub fn basis(sigma: Perm) -> Self {
        Self { support: vec![(sigma, Complex64::new(1.0, 0.0))], damaged: false }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.support.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &CosetRegister) -> f64 {
        let theirs: BTreeMap<&Perm, Complex64> = other.support.iter().map(|(p, a)| (p, *a)).collect();
        self.support.iter().filter_map(|(p, a)| theirs.get(p).map(|b| a.conj() * b)).sum::<Complex64>().norm_sqr()
    }

    /// Branches `(ψ ± ψτ)/2` of the controlled right-multiplication followed
    /// by a Hadamard on the control.
    fn branches(&self, tau: &Perm) -> [BTreeMap<Perm, Complex64>; 2] {
        let mut pass: BTreeMap<Perm, Complex64> = BTreeMap::new();
        let mut fail: BTreeMap<Perm, Complex64> = BTreeMap::new();
        for (p, a) in &self.support {
            *pass.entry(p.clone()).or_default() += a / 2.0;
            *fail.entry(p.clone()).or_default() += a / 2.0;
            let moved = p.compose(tau);
            *pass.entry(moved.clone()).or_default() += a / 2.0;
            *fail.entry(moved).or_default() -= a / 2.0;
        }
        [pass, fail]
    }

    /// Returns whether the control read `|0⟩`, and the post-measurement
    /// register.
    fn test(&self, tau: &Perm, rng: &mut Rng) -> (bool, CosetRegister) {
        let [pass, fail] = self.branches(tau);
        let p_pass: f64 = pass.values().map(|a| a.norm_sqr()).sum();
        if p_pass >= CERTAIN {
            return (true, self.clone());
        }
        if p_pass <= 1.0 - CERTAIN {
            return (false, self.clone());
        }
        let passed = rng.random::<f64>() < p_pass;
        let (branch, p) = if passed { (pass, p_pass) } else { (fail, 1.0 - p_pass) };
        let scale = 1.0 / p.sqrt();
        let support: Vec<(Perm, Complex64)> =
            branch.into_iter().filter(|(_, a)| a.norm() > 1e-15).map(|(q, a)| (q, a * scale)).collect();
        assert!(support.len() <= MAX_SUPPORT, "register support grew past {MAX_SUPPORT}");
        (passed, CosetRegister { support, damaged: true })
    }
}

/// `k` coset registers for `τ_s` on `N = 2n + 2` points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgramB {
    pub key_len: usize,
    pub registers: Vec<CosetRegister>,
}

impl ProgramB {
    pub fn degree(&self) -> usize {
        2 * self.key_len + 2
    }

    pub fn undamaged(&self) -> usize {
        self.registers.iter().filter(|r| !r.damaged).count()
    }
}

pub fn scheme_b_vend(key: &BitString, k: usize, rng: &mut Rng) -> Result<ProgramB, CopyError> {
    if k == 0 {
        return Err(CopyError::Config("need at least one register".into()));
    }
    let tau = involution_encode(key);
    let registers = (0..k).map(|_| CosetRegister::coset(Perm::random(tau.degree(), rng), &tau)).collect();
    Ok(ProgramB { key_len: key.len(), registers })
}

/// Evaluates on `x` using every undamaged register in order: the first
/// `|1⟩` on a control qubit answers 0, and 1 requires all controls to read
/// `|0⟩`. Registers changed by the test are flagged and skipped afterwards.
pub fn scheme_b_eval(prog: &ProgramB, x: &BitString, rng: &mut Rng) -> Result<EvalOutcome<ProgramB>, CopyError> {
    if x.len() != prog.key_len {
        return Err(CopyError::InputLength { expected: prog.key_len, found: x.len() });
    }
    if prog.undamaged() == 0 {
        return Err(CopyError::Depleted);
    }
    let tau = involution_encode(x);
    let mut post = prog.clone();
    let mut damage = 0.0;
    for reg in post.registers.iter_mut().filter(|r| !r.damaged) {
        let (passed, after) = reg.test(&tau, rng);
        damage += (1.0 - reg.fidelity(&after)).max(0.0).sqrt();
        *reg = after;
        if !passed {
            return Ok(EvalOutcome { value: false, post, damage_bound: damage });
        }
    }
    Ok(EvalOutcome { value: true, post, damage_bound: damage })
}
