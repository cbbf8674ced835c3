//! Attacks that recover stabilizer information from the public table.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::table::MeasurementTable;
use crate::mathcore::stats::binomial_upper_tail;
use crate::mathcore::Rng;
use crate::stabilizer::{SignedPauli, StabilizerTableau};

pub const DEFAULT_THRESHOLD_C: f64 = 3.0;

/// For each row of `rows`, how many of the other rows commute with it.
/// Degrees are computed once per distinct unsigned part, so the cost is
/// quadratic in the number of distinct rows rather than in `m`.
pub fn commuting_degrees(rows: &[SignedPauli]) -> Vec<usize> {
    let mut index: HashMap<(u64, u64), usize> = HashMap::new();
    let mut distinct: Vec<((u64, u64), usize)> = Vec::new();
    let slot: Vec<usize> = rows
        .iter()
        .map(|p| {
            let k = *index.entry(p.vector()).or_insert_with(|| {
                distinct.push((p.vector(), 0));
                distinct.len() - 1
            });
            distinct[k].1 += 1;
            k
        })
        .collect();
    let commute =
        |(ax, az): (u64, u64), (bx, bz): (u64, u64)| ((ax & bz).count_ones() + (az & bx).count_ones()) % 2 == 0;
    let per_distinct: Vec<usize> = distinct
        .iter()
        .map(|&(u, _)| distinct.iter().filter(|&&(v, _)| commute(u, v)).map(|&(_, c)| c).sum::<usize>() - 1)
        .collect();
    slot.into_iter().map(|k| per_distinct[k]).collect()
}

/// Row indices sorted by degree descending, ties by index.
fn degree_order(indices: &[usize], degrees: &[usize]) -> Vec<usize> {
    let mut order = indices.to_vec();
    order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    order
}

/// Greedily keeps rows that commute with everything kept so far and are
/// independent of it. Identity rows are skipped.
fn greedy_commuting(rows: &[SignedPauli], order: &[usize], n: usize) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut basis: Vec<u128> = Vec::new();
    for &j in order {
        if kept.len() == n {
            break;
        }
        let p = &rows[j];
        if p.is_identity() || kept.iter().any(|&k| !rows[k].commutes(p)) {
            continue;
        }
        let mut v = p.x as u128 | (p.z as u128) << 64;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
            kept.push(j);
        }
    }
    kept
}

#[derive(Clone, Debug, Serialize)]
pub struct ForgedState {
    /// Table rows (within this state's block) the forged state stabilizes by
    /// construction.
    pub selected: Vec<usize>,
    /// Whether at least `⌈εm⌉` rows were selected.
    pub reached_target: bool,
    #[serde(skip)]
    pub state: StabilizerTableau,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussianForgery {
    pub states: Vec<ForgedState>,
    /// States whose selection fell short of the `εm` target.
    pub short_of_target: usize,
}

impl GaussianForgery {
    pub fn tableaux(&self) -> Vec<StabilizerTableau> {
        self.states.iter().map(|f| f.state.clone()).collect()
    }
}

/// Linear-algebra forgery: per state, pick a large commuting independent set
/// of rows and emit a stabilizer state containing it, with the remaining
/// generators drawn at random from the commutant.
pub fn attack_gaussian(table: &MeasurementTable, eps: f64, rng: &mut Rng) -> GaussianForgery {
    let (n, m) = (table.n(), table.m());
    let target = (eps * m as f64).ceil() as usize;
    let base = rng.fork();
    let states: Vec<ForgedState> = (0..table.l())
        .into_par_iter()
        .map(|i| {
            let rows = table.state_rows(i);
            let degrees = commuting_degrees(rows);
            let all: Vec<usize> = (0..m).collect();
            let selected = greedy_commuting(rows, &degree_order(&all, &degrees), n);
            let gens = selected.iter().map(|&j| rows[j]).collect();
            let mut r = base.split_index("forge", i as u64);
            let state = StabilizerTableau::complete_random(n, gens, &mut r)
                .expect("greedy selection is commuting and independent");
            // Dependent rows consistent with the selection are also satisfied.
            let satisfied = rows.iter().filter(|p| state.contains(p)).count();
            ForgedState { selected, reached_target: satisfied >= target.min(m), state }
        })
        .collect();
    let short_of_target = states.iter().filter(|s| !s.reached_target).count();
    GaussianForgery { states, short_of_target }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutingState {
    /// Rows classified as conditioned on the state.
    pub classified: Vec<usize>,
    /// Reconstructed state, if the classified rows determine one.
    #[serde(skip)]
    pub recovered: Option<StabilizerTableau>,
    /// Whether `recovered` equals the true state (only with ground truth).
    pub exact: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutingReport {
    pub threshold: f64,
    /// Fraction of all rows classified as conditioned.
    pub classified_fraction: f64,
    /// Probability that an unconditioned row clears the threshold.
    pub null_false_positive_rate: f64,
    /// Fraction of states whose stabilizer group was recovered exactly.
    pub recovery_rate: Option<f64>,
    /// Among truly conditioned rows, the fraction classified as such.
    pub true_positive_rate: Option<f64>,
    /// Among unconditioned rows, the fraction classified as conditioned.
    pub false_positive_rate: Option<f64>,
    pub states: Vec<CommutingState>,
}

/// Threshold `(m−1)/2 + c·√m` on commuting degree.
pub fn commuting_threshold(m: usize, c: f64) -> f64 {
    (m as f64 - 1.0) / 2.0 + c * (m as f64).sqrt()
}

/// Probability that a uniformly random row's degree exceeds the threshold
/// when no row is conditioned. A non-identity Pauli commutes with exactly
/// half of all Paulis, so its degree is `Bin(m−1, 1/2)`; the identity
/// commutes with everything.
pub fn null_false_positive_rate(n: usize, m: usize, c: f64) -> f64 {
    let thr = commuting_threshold(m, c);
    let k = (thr.floor() as u64).saturating_add(1);
    let p_id = 0.25f64.powi(n as i32);
    let id_term = if (m as f64 - 1.0) > thr { p_id } else { 0.0 };
    (1.0 - p_id) * binomial_upper_tail(m as u64 - 1, 0.5, k) + id_term
}

const ROTATIONS: usize = 8;

fn reconstruct(rows: &[SignedPauli], classified: &[usize], degrees: &[usize], n: usize) -> Option<StabilizerTableau> {
    let order = degree_order(classified, degrees);
    let mut best: Option<(usize, StabilizerTableau)> = None;
    for rot in 0..order.len().min(ROTATIONS + 1) {
        let rotated: Vec<usize> = order[rot..].iter().chain(&order[..rot]).copied().collect();
        let kept = greedy_commuting(rows, &rotated, n);
        if kept.len() < n {
            continue;
        }
        let gens = kept.iter().map(|&j| rows[j]).collect();
        let Ok(cand) = StabilizerTableau::from_generators(n, gens) else { continue };
        let score = classified.iter().filter(|&&j| cand.contains(&rows[j])).count();
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, cand));
        }
        if score == classified.len() {
            break;
        }
    }
    best.map(|(_, s)| s)
}

/// Commutation-statistics attack. Rows conditioned on a state commute with
/// each other, so they have unusually many commuting partners.
///
/// `truth` supplies the real states and, optionally, which rows were
/// conditioned (a row is counted as conditioned if the true state contains
/// it).
pub fn attack_commuting(table: &MeasurementTable, c: f64, truth: Option<&[StabilizerTableau]>) -> CommutingReport {
    let (n, m, l) = (table.n(), table.m(), table.l());
    let threshold = commuting_threshold(m, c);
    let states: Vec<CommutingState> = (0..l)
        .into_par_iter()
        .map(|i| {
            let rows = table.state_rows(i);
            let degrees = commuting_degrees(rows);
            let classified: Vec<usize> = (0..m).filter(|&j| degrees[j] as f64 > threshold).collect();
            let recovered = reconstruct(rows, &classified, &degrees, n);
            let exact = truth.map(|t| recovered.as_ref().is_some_and(|r| r.same_state(&t[i])));
            CommutingState { classified, recovered, exact }
        })
        .collect();
    let total_classified: usize = states.iter().map(|s| s.classified.len()).sum();
    let mut report = CommutingReport {
        threshold,
        classified_fraction: total_classified as f64 / (l * m) as f64,
        null_false_positive_rate: null_false_positive_rate(n, m, c),
        recovery_rate: None,
        true_positive_rate: None,
        false_positive_rate: None,
        states,
    };
    if let Some(t) = truth {
        let exact = report.states.iter().filter(|s| s.exact == Some(true)).count();
        report.recovery_rate = Some(exact as f64 / l as f64);
        let (mut tp, mut pos, mut fp, mut neg) = (0usize, 0usize, 0usize, 0usize);
        for (i, s) in report.states.iter().enumerate() {
            for (j, row) in table.state_rows(i).iter().enumerate() {
                let is_cond = t[i].contains(row);
                let hit = s.classified.binary_search(&j).is_ok();
                if is_cond {
                    pos += 1;
                    tp += hit as usize;
                } else {
                    neg += 1;
                    fp += hit as usize;
                }
            }
        }
        report.true_positive_rate = (pos > 0).then(|| tp as f64 / pos as f64);
        report.false_positive_rate = (neg > 0).then(|| fp as f64 / neg as f64);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::money_stabilizer::{mint, per_row_plus_rate, BankKeys, SchemeParams};

    fn note(n: usize, l: usize, m: usize, eps: f64, seed: u64) -> crate::money_stabilizer::StabBanknote {
        let mut rng = Rng::new(seed);
        let keys = BankKeys::generate(&mut rng);
        mint(SchemeParams::new(n, l, m, eps).unwrap(), &keys, &mut rng).unwrap()
    }

    #[test]
    fn degrees_by_brute_force() {
        let rows: Vec<SignedPauli> = ["XI", "ZI", "XX", "II"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(commuting_degrees(&rows), vec![2, 1, 2, 3]);
    }

    #[test]
    fn gaussian_full_conditioning_satisfies_all_rows() {
        let nt = note(6, 5, 6, 1.0, 1);
        let forged = attack_gaussian(&nt.table, 1.0, &mut Rng::new(2));
        for (i, f) in forged.states.iter().enumerate() {
            assert!(nt.table.state_rows(i).iter().all(|r| f.state.contains(r)));
        }
        assert_eq!(forged.short_of_target, 0);
    }

    #[test]
    fn gaussian_matches_genuine_in_weak_regime() {
        let nt = note(16, 101, 8, 0.5, 3);
        let forged = attack_gaussian(&nt.table, 0.5, &mut Rng::new(4));
        let genuine = per_row_plus_rate(&nt.states, &nt.table);
        let fake = per_row_plus_rate(&forged.tableaux(), &nt.table);
        assert!(fake >= genuine - 0.05, "{fake} vs {genuine}");
    }

    #[test]
    fn commuting_attack_recovers_groups() {
        let nt = note(8, 41, 400, 0.5, 5);
        let rep = attack_commuting(&nt.table, DEFAULT_THRESHOLD_C, Some(&nt.states));
        assert!(rep.recovery_rate.unwrap() >= 0.95, "{:?}", rep.recovery_rate);
    }

    #[test]
    fn commuting_null_rate() {
        let nt = note(8, 201, 100, 0.0, 6);
        let rep = attack_commuting(&nt.table, 1.0, None);
        let p = rep.null_false_positive_rate;
        // Degrees within a block are correlated; allow a loose band.
        let se = (p * (1.0 - p) / 20_100.0).sqrt();
        assert!((rep.classified_fraction - p).abs() < 8.0 * se, "{} vs {p}", rep.classified_fraction);
    }

    #[test]
    fn commuting_full_conditioning_classifies_everything() {
        let nt = note(6, 5, 100, 1.0, 7);
        let rep = attack_commuting(&nt.table, DEFAULT_THRESHOLD_C, Some(&nt.states));
        assert_eq!(rep.classified_fraction, 1.0);
        assert_eq!(rep.recovery_rate, Some(1.0));
    }
}
