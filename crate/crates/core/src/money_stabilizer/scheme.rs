use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use super::params::SchemeParams;
use super::signature::{BankKeys, VerificationKey};
use super::table::MeasurementTable;
use super::StabMoneyError;
use crate::mathcore::stats::poisson_binomial_above;
use crate::mathcore::Rng;
use crate::stabilizer::{SignedPauli, StabilizerTableau};

#[derive(Clone, Debug, PartialEq)]
pub struct StabBanknote {
    pub params: SchemeParams,
    /// Simulation stand-ins for the quantum registers.
    pub states: Vec<StabilizerTableau>,
    pub table: MeasurementTable,
    pub sig: Vec<u8>,
}

impl StabBanknote {
    /// Bytes covered by the signature: `n, ℓ, m` as little-endian `u32`
    /// followed by the packed table.
    pub fn signed_message(table: &MeasurementTable) -> Vec<u8> {
        let mut msg = Vec::new();
        for v in [table.n(), table.l(), table.m()] {
            msg.extend_from_slice(&(v as u32).to_le_bytes());
        }
        msg.extend_from_slice(&table.to_bytes());
        msg
    }

    /// Same table and signature, different registers.
    pub fn with_states(&self, states: Vec<StabilizerTableau>) -> Self {
        Self { states, ..self.clone() }
    }

    fn check_shape(&self) -> Result<(), StabMoneyError> {
        let p = &self.params;
        if self.states.len() != p.l
            || self.states.iter().any(|s| s.n() != p.n)
            || (self.table.n(), self.table.l(), self.table.m()) != (p.n, p.l, p.m)
        {
            return Err(StabMoneyError::TableShape);
        }
        Ok(())
    }
}

fn sample_row(state: &StabilizerTableau, eps: f64, rng: &mut Rng) -> SignedPauli {
    if rng.random::<f64>() < eps {
        state.random_group_element(rng)
    } else {
        SignedPauli::random(state.n(), rng)
    }
}

/// Mints a note. State `i` and its `m` rows come from an independent child
/// stream, so the result does not depend on thread scheduling.
pub fn mint(params: SchemeParams, keys: &BankKeys, rng: &mut Rng) -> Result<StabBanknote, StabMoneyError> {
    params.validate()?;
    let base = rng.fork();
    let per_state: Vec<(StabilizerTableau, Vec<SignedPauli>)> = (0..params.l)
        .into_par_iter()
        .map(|i| {
            let mut r = base.split_index("state", i as u64);
            let state = StabilizerTableau::random(params.n, &mut r)?;
            let rows = (0..params.m).map(|_| sample_row(&state, params.eps, &mut r)).collect();
            Ok((state, rows))
        })
        .collect::<Result<_, StabMoneyError>>()?;
    let mut states = Vec::with_capacity(params.l);
    let mut rows = Vec::with_capacity(params.l * params.m);
    for (s, r) in per_state {
        states.push(s);
        rows.extend(r);
    }
    let table = MeasurementTable::new(params.n, params.l, params.m, rows)?;
    let sig = keys.sign(&StabBanknote::signed_message(&table));
    Ok(StabBanknote { params, states, table, sig })
}

/// How the verifier's measurement acts on the registers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AuthMode {
    /// Each chosen row is measured and its outcome recorded; the note keeps
    /// the collapsed states.
    Literal,
    /// Only the accept bit is learned. The accept decision has the same
    /// distribution as in literal mode; on acceptance the registers are
    /// modelled as unchanged and the disturbance bound `√(1 − P[accept])`
    /// is accumulated instead.
    #[default]
    Coherent,
}

#[derive(Clone, Debug)]
pub struct AuthOutcome {
    pub accept: bool,
    /// Number of `+1` outcomes among the `ℓ` measured rows.
    pub plus_count: usize,
    /// Row index `j(i)` chosen for each state.
    pub chosen: Vec<usize>,
    pub post: StabBanknote,
    /// Trace-distance bound on the disturbance of this pass (coherent mode;
    /// zero in literal mode).
    pub damage: f64,
}

/// Literal authentication: signature check, then one random row per state.
pub fn authenticate(note: &StabBanknote, vk: &VerificationKey, rng: &mut Rng) -> Result<AuthOutcome, StabMoneyError> {
    authenticate_with(note, vk, AuthMode::Literal, rng)
}

pub fn authenticate_with(
    note: &StabBanknote,
    vk: &VerificationKey,
    mode: AuthMode,
    rng: &mut Rng,
) -> Result<AuthOutcome, StabMoneyError> {
    note.check_shape()?;
    if !vk.verify(&StabBanknote::signed_message(&note.table), &note.sig) {
        return Err(StabMoneyError::BadSignature);
    }
    let m = note.params.m;
    let base = rng.fork();
    let results: Vec<(usize, i8, f64, Option<StabilizerTableau>)> = note
        .states
        .par_iter()
        .enumerate()
        .map(|(i, state)| {
            let mut r = base.split_index("auth", i as u64);
            let j = r.random_range(0..m);
            let row = note.table.get(i, j);
            let e = state.expectation(row);
            let outcome = if e == 0 {
                if r.random::<bool>() {
                    1
                } else {
                    -1
                }
            } else {
                e
            };
            let p_plus = match e {
                1 => 1.0,
                -1 => 0.0,
                _ => 0.5,
            };
            let post = (e == 0).then(|| state.project(row, outcome).expect("random outcome has probability 1/2"));
            (j, outcome, p_plus, post)
        })
        .collect();
    let plus_count = results.iter().filter(|r| r.1 == 1).count();
    let accept = plus_count > note.params.l / 2;
    let chosen: Vec<usize> = results.iter().map(|r| r.0).collect();
    let collapsed = |results: Vec<(usize, i8, f64, Option<StabilizerTableau>)>| -> Vec<StabilizerTableau> {
        results.into_iter().zip(&note.states).map(|(r, s)| r.3.unwrap_or_else(|| s.clone())).collect()
    };
    let (states, damage) = match (mode, accept) {
        (AuthMode::Literal, _) => (collapsed(results), 0.0),
        (AuthMode::Coherent, true) => {
            let probs: Vec<f64> = results.iter().map(|r| r.2).collect();
            let p_acc = poisson_binomial_above(&probs, note.params.l / 2);
            (note.states.clone(), (1.0 - p_acc).max(0.0).sqrt())
        }
        (AuthMode::Coherent, false) => (collapsed(results), 0.0),
    };
    Ok(AuthOutcome { accept, plus_count, chosen, post: note.with_states(states), damage })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReauthTrace {
    pub accepts: Vec<bool>,
    pub plus_counts: Vec<usize>,
    /// Summed per-pass disturbance bounds.
    pub total_damage: f64,
}

/// Authenticates `count` times in sequence, each pass on the previous
/// pass's post-note.
pub fn reauthenticate_loop(
    note: &StabBanknote,
    vk: &VerificationKey,
    count: usize,
    mode: AuthMode,
    rng: &mut Rng,
) -> Result<(ReauthTrace, StabBanknote), StabMoneyError> {
    let mut current = note.clone();
    let mut trace = ReauthTrace { accepts: Vec::with_capacity(count), plus_counts: Vec::new(), total_damage: 0.0 };
    for _ in 0..count {
        let out = authenticate_with(&current, vk, mode, rng)?;
        trace.accepts.push(out.accept);
        trace.plus_counts.push(out.plus_count);
        trace.total_damage += out.damage;
        current = out.post;
    }
    Ok((trace, current))
}

fn plus_probability(state: &StabilizerTableau, row: &SignedPauli) -> f64 {
    match state.expectation(row) {
        1 => 1.0,
        -1 => 0.0,
        _ => 0.5,
    }
}

/// `q_i = (1/m) Σ_j P[E_ij → +1]` for each state, computed exactly.
pub fn per_state_plus_rates(states: &[StabilizerTableau], table: &MeasurementTable) -> Vec<f64> {
    states
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let rows = table.state_rows(i);
            rows.iter().map(|r| plus_probability(s, r)).sum::<f64>() / rows.len() as f64
        })
        .collect()
}

/// Mean of [`per_state_plus_rates`].
pub fn per_row_plus_rate(states: &[StabilizerTableau], table: &MeasurementTable) -> f64 {
    let q = per_state_plus_rates(states, table);
    q.iter().sum::<f64>() / q.len() as f64
}

/// Exact probability that one literal authentication pass accepts the given
/// registers against `table`.
pub fn acceptance_probability(states: &[StabilizerTableau], table: &MeasurementTable) -> f64 {
    poisson_binomial_above(&per_state_plus_rates(states, table), table.l() / 2)
}
