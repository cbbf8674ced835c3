use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::mathcore::stats::wilson_interval;
use crate::mathcore::{BitString, Rng};
use crate::money_conjugate::{
    forge, measure_resend_counterfeit, query_attack, BankOracle, BbbwBank, ConjugateNote, QubitSpec, WiesnerBank,
};
use crate::money_stabilizer::{
    acceptance_probability, attack_commuting, attack_gaussian, mint, BankKeys, SchemeParams, StabBanknote,
    VerificationKey, DEFAULT_THRESHOLD_C,
};
use crate::quantumsim::fidelity;
use crate::stabilizer::StabilizerTableau;

registry! {
    MoneyScheme, "money scheme", {
        Wiesner => "wiesner",
        Bbbw => "bbbw",
        Stabilizer => "stabilizer",
    }
}

registry! {
    /// Counterfeiters take `k` genuine notes and return `k + r` registers.
    Counterfeiter, "counterfeiter", {
        /// Passes its notes through and pads with naive forgeries.
        Identity => "identity",
        /// Measures up to `r` notes in random bases and resends two copies of each.
        MeasureResend => "measure-resend",
        /// Learns every note through the query-secure authenticator, then prints copies.
        QueryAttack => "query-attack",
        /// Forges from a note's public table by Gaussian elimination.
        Gaussian => "gaussian",
        /// Forges from stabilizer groups recovered by commutation counting.
        Commuting => "commuting",
    }
}

impl Counterfeiter {
    pub fn supports(self, scheme: MoneyScheme) -> bool {
        match self {
            Counterfeiter::Identity => true,
            Counterfeiter::MeasureResend | Counterfeiter::QueryAttack => scheme != MoneyScheme::Stabilizer,
            Counterfeiter::Gaussian | Counterfeiter::Commuting => scheme == MoneyScheme::Stabilizer,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WealthConfig {
    pub scheme: MoneyScheme,
    pub counterfeiter: Counterfeiter,
    pub k: usize,
    pub r: usize,
    pub trials: usize,
    /// Qubits per conjugate-coding note.
    pub qubits: usize,
    pub stabilizer: SchemeParams,
}

impl Default for WealthConfig {
    fn default() -> Self {
        Self {
            scheme: MoneyScheme::Stabilizer,
            counterfeiter: Counterfeiter::Identity,
            k: 2,
            r: 2,
            trials: 20,
            qubits: 8,
            stabilizer: SchemeParams { n: 8, l: 1001, m: 50, eps: 0.2 },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WealthReport {
    pub scheme: MoneyScheme,
    pub counterfeiter: Counterfeiter,
    pub k: usize,
    pub r: usize,
    pub trials: usize,
    /// Mean exact acceptance probability of each output register.
    pub per_register: Vec<f64>,
    /// `Σ pᵢ`.
    pub wealth: f64,
    /// Standard error of the per-trial wealth.
    pub wealth_stderr: f64,
    /// 95% Wilson interval on the pooled fraction of sampled accepts, scaled by `k + r`.
    pub wealth_ci: [f64; 2],
}

enum Bank {
    Wiesner(WiesnerBank),
    Bbbw(BbbwBank),
    Stabilizer { keys: BankKeys, vk: VerificationKey },
}

enum Register {
    Conjugate(ConjugateNote),
    Stabilizer(StabBanknote),
}

fn random_conjugate(serial: BitString, qubits: usize, rng: &mut Rng) -> ConjugateNote {
    let specs: Vec<QubitSpec> = (0..qubits).map(|_| QubitSpec::ALL[rng.random_range(0..4)]).collect();
    ConjugateNote::from_specs(serial, &specs)
}

fn random_states(params: &SchemeParams, rng: &mut Rng) -> Result<Vec<StabilizerTableau>, ExperimentError> {
    (0..params.l)
        .map(|_| StabilizerTableau::random(params.n, rng).map_err(|e| ExperimentError::Stab(e.into())))
        .collect()
}

impl Bank {
    fn new(cfg: &WealthConfig, rng: &mut Rng) -> Result<Self, ExperimentError> {
        Ok(match cfg.scheme {
            MoneyScheme::Wiesner => Bank::Wiesner(WiesnerBank::default()),
            MoneyScheme::Bbbw => Bank::Bbbw(BbbwBank::new(2 * cfg.qubits, rng)?),
            MoneyScheme::Stabilizer => {
                let keys = BankKeys::generate(rng);
                let vk = keys.verification_key();
                Bank::Stabilizer { keys, vk }
            }
        })
    }

    fn issue(&self, cfg: &WealthConfig, rng: &mut Rng) -> Result<Register, ExperimentError> {
        Ok(match self {
            Bank::Wiesner(b) => Register::Conjugate(b.mint(cfg.qubits, rng)),
            Bank::Bbbw(b) => Register::Conjugate(b.mint_random(rng)),
            Bank::Stabilizer { keys, .. } => Register::Stabilizer(mint(cfg.stabilizer, keys, rng)?),
        })
    }

    /// Exact probability that the authenticator accepts `reg`.
    fn accept_probability(&self, reg: &Register) -> f64 {
        match (self, reg) {
            (Bank::Wiesner(_) | Bank::Bbbw(_), Register::Conjugate(note)) => {
                let expected = match self {
                    Bank::Wiesner(b) => {
                        b.record(&note.serial).map(|specs| ConjugateNote::from_specs(note.serial.clone(), &specs))
                    }
                    Bank::Bbbw(b) => b.mint(note.serial.clone()).ok(),
                    Bank::Stabilizer { .. } => unreachable!(),
                };
                match expected {
                    Some(e) if e.len() == note.len() => {
                        e.qubits.iter().zip(&note.qubits).map(|(a, b)| fidelity(a, b).unwrap_or(0.0)).product()
                    }
                    _ => 0.0,
                }
            }
            (Bank::Stabilizer { vk, .. }, Register::Stabilizer(note)) => {
                let signed = vk.verify(&StabBanknote::signed_message(&note.table), &note.sig);
                if signed && note.states.len() == note.table.l() {
                    acceptance_probability(&note.states, &note.table)
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }

    /// A forgery that copies the classical part of `template` (if any) and
    /// fills the quantum part at random.
    fn naive_forgery(
        &self,
        cfg: &WealthConfig,
        template: Option<&Register>,
        rng: &mut Rng,
    ) -> Result<Register, ExperimentError> {
        Ok(match (self, template) {
            (_, Some(Register::Conjugate(n))) => Register::Conjugate(random_conjugate(n.serial.clone(), n.len(), rng)),
            (_, Some(Register::Stabilizer(n))) => Register::Stabilizer(n.with_states(random_states(&n.params, rng)?)),
            (Bank::Wiesner(_), None) => {
                Register::Conjugate(random_conjugate(BitString::from_u64(rng.random(), 32), cfg.qubits, rng))
            }
            (Bank::Bbbw(b), None) => {
                let bits: Vec<bool> = (0..b.n()).map(|_| rng.random()).collect();
                Register::Conjugate(random_conjugate(BitString::from_bools(&bits), cfg.qubits, rng))
            }
            // Without a signed table the only option is signing one with a
            // key of one's own.
            (Bank::Stabilizer { .. }, None) => {
                let own = BankKeys::generate(rng);
                Register::Stabilizer(mint(cfg.stabilizer, &own, rng)?)
            }
        })
    }
}

fn counterfeit(
    cfg: &WealthConfig,
    bank: &Bank,
    notes: Vec<Register>,
    rng: &mut Rng,
) -> Result<Vec<Register>, ExperimentError> {
    let k = notes.len();
    let mut out: Vec<Register> = Vec::with_capacity(k + cfg.r);
    match cfg.counterfeiter {
        Counterfeiter::Identity => out.extend(notes),
        Counterfeiter::MeasureResend => {
            let splits = k.min(cfg.r);
            for (i, note) in notes.into_iter().enumerate() {
                match note {
                    Register::Conjugate(n) if i < splits => {
                        let (a, b) = measure_resend_counterfeit(&n, rng);
                        out.push(Register::Conjugate(a));
                        out.push(Register::Conjugate(b));
                    }
                    other => out.push(other),
                }
            }
        }
        Counterfeiter::QueryAttack => {
            let mut learned = Vec::with_capacity(k);
            for (i, note) in notes.into_iter().enumerate() {
                let Register::Conjugate(n) = note else { unreachable!("scheme checked") };
                let oracle_rng = rng.split_index("oracle", i as u64);
                let result = match bank {
                    Bank::Wiesner(b) => query_attack(&mut BankOracle::new(b, oracle_rng), &n, rng)?,
                    Bank::Bbbw(b) => query_attack(&mut BankOracle::new(b, oracle_rng), &n, rng)?,
                    Bank::Stabilizer { .. } => unreachable!("scheme checked"),
                };
                learned.push((n.serial.clone(), result.recovered));
                out.push(Register::Conjugate(result.note));
            }
            if !learned.is_empty() {
                for i in 0..cfg.r {
                    let (serial, specs) = &learned[i % learned.len()];
                    out.push(Register::Conjugate(forge(serial, specs)));
                }
            }
        }
        Counterfeiter::Gaussian | Counterfeiter::Commuting => {
            let extra: Vec<Register> = (0..if k == 0 { 0 } else { cfg.r })
                .map(|i| {
                    let Register::Stabilizer(n) = &notes[i % k] else { unreachable!("scheme checked") };
                    let states = if cfg.counterfeiter == Counterfeiter::Gaussian {
                        attack_gaussian(&n.table, n.params.eps, rng).tableaux()
                    } else {
                        attack_commuting(&n.table, DEFAULT_THRESHOLD_C, None)
                            .states
                            .into_iter()
                            .map(|s| match s.recovered {
                                Some(t) => Ok(t),
                                None => StabilizerTableau::random(n.params.n, rng)
                                    .map_err(|e| ExperimentError::Stab(e.into())),
                            })
                            .collect::<Result<_, _>>()?
                    };
                    Ok(Register::Stabilizer(n.with_states(states)))
                })
                .collect::<Result<_, ExperimentError>>()?;
            out.extend(notes);
            out.extend(extra);
        }
    }
    let template_count = out.len();
    while out.len() < k + cfg.r {
        let template = if template_count == 0 { None } else { Some(&out[out.len() % template_count]) };
        let forged = bank.naive_forgery(cfg, template, rng)?;
        out.push(forged);
    }
    Ok(out)
}

/// Runs the counterfeiter on `k` fresh notes per trial (fresh bank key per
/// trial) and scores every output register under that key.
pub fn run_wealth_game(cfg: &WealthConfig, rng: &mut Rng) -> Result<WealthReport, ExperimentError> {
    if !cfg.counterfeiter.supports(cfg.scheme) {
        return Err(ExperimentError::Unsupported {
            scheme: cfg.scheme.to_string(),
            counterfeiter: cfg.counterfeiter.to_string(),
        });
    }
    if cfg.trials == 0 || cfg.k + cfg.r == 0 {
        return Err(ExperimentError::Config("need at least one trial and one output register".into()));
    }
    if !(1..=32).contains(&cfg.qubits) {
        return Err(ExperimentError::Config(format!("conjugate notes need 1..=32 qubits, got {}", cfg.qubits)));
    }
    cfg.stabilizer.validate()?;
    let width = cfg.k + cfg.r;
    let base = rng.fork();
    let per_trial: Vec<(Vec<f64>, usize)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut r = base.split_index("trial", t as u64);
            let bank = Bank::new(cfg, &mut r)?;
            let notes = (0..cfg.k).map(|_| bank.issue(cfg, &mut r)).collect::<Result<Vec<_>, _>>()?;
            let regs = counterfeit(cfg, &bank, notes, &mut r)?;
            let probs: Vec<f64> = regs.iter().map(|g| bank.accept_probability(g)).collect();
            let accepted = probs.iter().filter(|&&p| r.random::<f64>() < p).count();
            Ok((probs, accepted))
        })
        .collect::<Result<_, ExperimentError>>()?;
    let trials = cfg.trials as f64;
    let mut per_register = vec![0.0; width];
    for (probs, _) in &per_trial {
        for (acc, p) in per_register.iter_mut().zip(probs) {
            *acc += p / trials;
        }
    }
    let wealths: Vec<f64> = per_trial.iter().map(|(p, _)| p.iter().sum()).collect();
    let wealth = wealths.iter().sum::<f64>() / trials;
    let var = wealths.iter().map(|w| (w - wealth).powi(2)).sum::<f64>() / (trials - 1.0).max(1.0);
    let accepted: usize = per_trial.iter().map(|t| t.1).sum();
    let (lo, hi) = wilson_interval(accepted as u64, (cfg.trials * width) as u64, 1.96);
    Ok(WealthReport {
        scheme: cfg.scheme,
        counterfeiter: cfg.counterfeiter,
        k: cfg.k,
        r: cfg.r,
        trials: cfg.trials,
        per_register,
        wealth,
        wealth_stderr: (var / trials).sqrt(),
        wealth_ci: [lo * width as f64, hi * width as f64],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(scheme: MoneyScheme, counterfeiter: Counterfeiter, k: usize, r: usize) -> WealthConfig {
        WealthConfig {
            scheme,
            counterfeiter,
            k,
            r,
            trials: 200,
            qubits: 4,
            stabilizer: SchemeParams { n: 4, l: 21, m: 8, eps: 0.5 },
        }
    }

    #[test]
    fn identity_on_conjugate_money() {
        for scheme in [MoneyScheme::Wiesner, MoneyScheme::Bbbw] {
            let rep = run_wealth_game(&cfg(scheme, Counterfeiter::Identity, 3, 2), &mut Rng::new(1)).unwrap();
            assert!(rep.per_register[..3].iter().all(|&p| (p - 1.0).abs() < 1e-9));
            // A random BB84 qubit matches a fixed one with probability 1/2.
            let naive = rep.per_register[3];
            assert!((naive - 1.0 / 16.0).abs() < 0.05, "{scheme}: {naive}");
            assert!(rep.wealth <= 5.0 && rep.wealth_ci[0] <= rep.wealth && rep.wealth <= rep.wealth_ci[1] + 1e-9);
        }
    }

    #[test]
    fn no_capital_means_blind_forgeries_only() {
        let rep = run_wealth_game(&cfg(MoneyScheme::Wiesner, Counterfeiter::Identity, 0, 3), &mut Rng::new(2)).unwrap();
        assert_eq!(rep.wealth, 0.0);
        let rep =
            run_wealth_game(&cfg(MoneyScheme::Stabilizer, Counterfeiter::Identity, 0, 2), &mut Rng::new(2)).unwrap();
        assert_eq!(rep.wealth, 0.0);
    }

    #[test]
    fn query_attack_breaks_conjugate_money() {
        for scheme in [MoneyScheme::Wiesner, MoneyScheme::Bbbw] {
            let rep = run_wealth_game(&cfg(scheme, Counterfeiter::QueryAttack, 2, 5), &mut Rng::new(3)).unwrap();
            assert!((rep.wealth - 7.0).abs() < 1e-9, "{scheme}: {}", rep.wealth);
        }
    }

    #[test]
    fn measure_resend_pairs_match_five_eighths() {
        let mut c = cfg(MoneyScheme::Bbbw, Counterfeiter::MeasureResend, 1, 1);
        c.qubits = 1;
        c.trials = 4000;
        let rep = run_wealth_game(&c, &mut Rng::new(4)).unwrap();
        // Each copy passes with probability 3/4 on its own.
        assert!((rep.wealth - 1.5).abs() < 5.0 * rep.wealth_stderr, "{}", rep.wealth);
    }

    #[test]
    fn gaussian_forgery_in_the_weak_regime() {
        let c = cfg(MoneyScheme::Stabilizer, Counterfeiter::Gaussian, 1, 2);
        let rep = run_wealth_game(&c, &mut Rng::new(5)).unwrap();
        let genuine = rep.per_register[0];
        assert!(rep.per_register[1..].iter().all(|&p| p >= genuine - 0.1), "{:?}", rep.per_register);
    }

    #[test]
    fn registry_rejects_mismatches() {
        let c = cfg(MoneyScheme::Stabilizer, Counterfeiter::QueryAttack, 1, 1);
        assert!(matches!(run_wealth_game(&c, &mut Rng::new(6)), Err(ExperimentError::Unsupported { .. })));
        assert!("nope".parse::<Counterfeiter>().is_err());
        assert_eq!("query-attack".parse::<Counterfeiter>().unwrap(), Counterfeiter::QueryAttack);
    }

    #[test]
    fn reports_are_reproducible() {
        let c = cfg(MoneyScheme::Stabilizer, Counterfeiter::Commuting, 1, 1);
        let a = run_wealth_game(&c, &mut Rng::new(7)).unwrap();
        let b = run_wealth_game(&c, &mut Rng::new(7)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
