use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::mathcore::Rng;
use crate::money_stabilizer::{
    acceptance_probability, attack_gaussian, mint, per_state_plus_rates, BankKeys, SchemeParams,
};

/// One `m` of a Gaussian-attack sweep, pooled over notes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub eps: f64,
    pub notes: usize,
    /// `m·ε/n`; the attack is expected to work below 1.
    pub m_eps_over_n: f64,
    /// Mean exact per-row `+1` probability of the genuine states.
    pub genuine_row_rate: f64,
    pub forged_row_rate: f64,
    /// `rate − ½`, with the standard error of the per-state margins.
    pub genuine_margin: f64,
    pub genuine_margin_se: f64,
    pub forged_margin: f64,
    pub forged_margin_se: f64,
    /// Mean exact probability that one authentication pass accepts.
    pub genuine_accept: f64,
    pub forged_accept: f64,
    /// Fraction of forged states that satisfy at least `⌈εm⌉` rows.
    pub reached_target: f64,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    (mean, (var / k).sqrt())
}

/// Mints `notes` notes for each `m` and attacks each with Gaussian
/// elimination on its public table.
pub fn gaussian_sweep(
    n: usize,
    l: usize,
    eps: f64,
    ms: &[usize],
    notes: usize,
    rng: &mut Rng,
) -> Result<Vec<SweepRow>, ExperimentError> {
    if notes == 0 || ms.is_empty() {
        return Err(ExperimentError::Config("sweep needs at least one note and one m".into()));
    }
    let keys = BankKeys::generate(rng);
    let base = rng.fork();
    ms.iter()
        .map(|&m| {
            let params = SchemeParams::new(n, l, m, eps)?;
            let mut genuine_q = Vec::with_capacity(notes * l);
            let mut forged_q = Vec::with_capacity(notes * l);
            let (mut ga, mut fa, mut reached) = (0.0, 0.0, 0usize);
            for i in 0..notes {
                let mut r = base.split_index(&format!("sweep-m{m}"), i as u64);
                let note = mint(params, &keys, &mut r)?;
                let forgery = attack_gaussian(&note.table, eps, &mut r);
                let forged = forgery.tableaux();
                genuine_q.extend(per_state_plus_rates(&note.states, &note.table));
                forged_q.extend(per_state_plus_rates(&forged, &note.table));
                ga += acceptance_probability(&note.states, &note.table);
                fa += acceptance_probability(&forged, &note.table);
                reached += l - forgery.short_of_target;
            }
            let (g, gse) = mean_se(&genuine_q);
            let (f, fse) = mean_se(&forged_q);
            Ok(SweepRow {
                n,
                l,
                m,
                eps,
                notes,
                m_eps_over_n: m as f64 * eps / n as f64,
                genuine_row_rate: g,
                forged_row_rate: f,
                genuine_margin: g - 0.5,
                genuine_margin_se: gse,
                forged_margin: f - 0.5,
                forged_margin_se: fse,
                genuine_accept: ga / notes as f64,
                forged_accept: fa / notes as f64,
                reached_target: reached as f64 / (notes * l) as f64,
            })
        })
        .collect()
}
