use serde::{Deserialize, Serialize};

use super::circuit::{decode_circuit, gate_bit_cost, prg_expand};
use super::program::EvalOutcome;
use super::CopyError;
use crate::mathcore::{BitString, Rng};
use crate::quantumsim::{measure_projector, DenseState, Projector, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeAConfig {
    /// Circuit width in qubits.
    pub m: usize,
    /// Circuit length in gates.
    pub l: usize,
}

impl SchemeAConfig {
    /// Width `m` with the default length `20·m²`.
    pub fn new(m: usize) -> Self {
        Self { m, l: 20 * m * m }
    }

    pub fn validate(&self) -> Result<(), CopyError> {
        if !(2..=MAX_QUBITS).contains(&self.m) {
            return Err(CopyError::Config(format!("m = {} outside 2..={MAX_QUBITS}", self.m)));
        }
        Ok(())
    }

    pub fn prg_len(&self) -> usize {
        gate_bit_cost(self.m) * self.l
    }
}

/// `U_{g(x)}|0^m⟩`.
pub fn scheme_a_state(x: &BitString, cfg: &SchemeAConfig) -> Result<DenseState, CopyError> {
    cfg.validate()?;
    let gates = decode_circuit(&prg_expand(x, cfg.prg_len()), cfg.m, cfg.l)?;
    let mut s = DenseState::zero(cfg.m);
    s.apply_all(&gates)?;
    Ok(s)
}

/// Program for `f_s`: `copies.len()` registers, each ideally `|ψ_s⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgramA {
    pub cfg: SchemeAConfig,
    pub key_len: usize,
    pub copies: Vec<DenseState>,
}

pub fn scheme_a_vend(key: &BitString, cfg: &SchemeAConfig, k: usize) -> Result<ProgramA, CopyError> {
    if k == 0 {
        return Err(CopyError::Config("need at least one copy".into()));
    }
    let psi = scheme_a_state(key, cfg)?;
    Ok(ProgramA { cfg: *cfg, key_len: key.len(), copies: vec![psi; k] })
}

/// Evaluates on `x`. Each copy in turn undergoes the two-outcome
/// measurement `{|ψ_x⟩⟨ψ_x|, I − |ψ_x⟩⟨ψ_x|}`; the first rejecting copy
/// makes the answer 0, and 1 requires every copy to accept.
///
/// Conjugating `|0^m⟩⟨0^m|` by `U_{g(x)}` gives the same projector, so this
/// is `U_{g(x)}^{-1}`, a test for all-zeros, and `U_{g(x)}` again, done in
/// one circuit application.
pub fn scheme_a_eval(prog: &ProgramA, x: &BitString, rng: &mut Rng) -> Result<EvalOutcome<ProgramA>, CopyError> {
    if x.len() != prog.key_len {
        return Err(CopyError::InputLength { expected: prog.key_len, found: x.len() });
    }
    let target = Projector::Rank1(scheme_a_state(x, &prog.cfg)?);
    let mut post = prog.clone();
    let mut damage = 0.0;
    for copy in post.copies.iter_mut() {
        let meas = measure_projector(copy, &target, rng)?;
        let branch = if meas.outcome { meas.prob_yes } else { 1.0 - meas.prob_yes };
        damage += (1.0 - branch).max(0.0).sqrt();
        *copy = meas.post;
        if !meas.outcome {
            return Ok(EvalOutcome { value: false, post, damage_bound: damage });
        }
    }
    Ok(EvalOutcome { value: true, post, damage_bound: damage })
}
