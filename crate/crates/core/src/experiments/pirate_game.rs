use nalgebra::DMatrix;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::copyprotect::{
    baseline_pirate, learnability_pirate, pgm_confusion_from_gram, pgm_pirate_a, pgm_pirate_b, scheme_a_state,
    scheme_a_vend, scheme_b_vend, split_program, trivial_mix_pirate, Program, SchemeAConfig,
};
use crate::mathcore::stats::wilson_interval;
use crate::mathcore::{BitString, Rng};
use crate::quantumsim::fidelity;

registry! {
    CopyScheme, "copy-protection scheme", {
        A => "a",
        B => "b",
    }
}

registry! {
    /// Pirates take `k` programs and return `k + r`.
    PirateKind, "pirate", {
        /// Passes the programs through and pads with coin-flipping ones.
        Baseline => "baseline",
        /// Splits amplified programs into halves.
        Split => "split",
        /// Turns pairs of programs into triples with a maximally mixed stand-in.
        Mix => "mix",
        /// Queries one program over the whole key space, then vends fresh copies.
        Learn => "learn",
        /// Identifies the key with the pretty-good measurement on all programs.
        Pgm => "pgm",
    }
}

registry! {
    /// What each recipient runs on its register.
    Freeloader, "freeloader", {
        /// The honest evaluation procedure.
        Eval => "eval",
        /// A fair coin.
        Guess => "guess",
    }
}

impl PirateKind {
    pub fn supports(self, scheme: CopyScheme, key_bits: usize) -> bool {
        match self {
            PirateKind::Learn => scheme == CopyScheme::A && key_bits <= 6,
            PirateKind::Pgm => key_bits <= 4,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PirateConfig {
    pub scheme: CopyScheme,
    pub pirate: PirateKind,
    pub freeloader: Freeloader,
    /// Key length.
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// Copies (scheme A) or coset registers (scheme B) per vended program.
    pub amplification: usize,
    /// Qubits per scheme-A copy.
    pub m: usize,
    /// Security parameter in the budget `k + (1 − δ) r`.
    pub delta: f64,
    pub trials: usize,
}

impl Default for PirateConfig {
    fn default() -> Self {
        Self {
            scheme: CopyScheme::B,
            pirate: PirateKind::Baseline,
            freeloader: Freeloader::Eval,
            n: 3,
            k: 4,
            r: 4,
            amplification: 4,
            m: 6,
            delta: 0.5,
            trials: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PirateReport {
    pub scheme: CopyScheme,
    pub pirate: PirateKind,
    pub freeloader: Freeloader,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub amplification: usize,
    pub delta: f64,
    pub trials: usize,
    /// Mean number of registers that output `f_s(x)`.
    pub expected_correct: f64,
    pub stderr: f64,
    /// 95% Wilson interval on the pooled correct fraction, scaled by `k + r`.
    pub ci: [f64; 2],
    /// `k + (1 − δ) r`.
    pub budget: f64,
    /// Probability that a genuine program errs on `x ~ D`.
    pub genuine_error: f64,
    /// `(1 − ε) k + r / 2`, what passing through and guessing achieves.
    pub baseline: f64,
    /// `expected_correct − 5·stderr > budget`.
    pub exceeds_budget: bool,
}

fn key(v: u64, n: usize) -> BitString {
    BitString::from_u64(v, n)
}

/// `x ~ D` given the key: `s` with probability 1/2, else uniform over the
/// other keys.
fn sample_input(s: u64, n: usize, rng: &mut Rng) -> u64 {
    if rng.random::<bool>() {
        return s;
    }
    sample_input_wrong(s, n, rng)
}

struct Game {
    cfg: PirateConfig,
    a_cfg: SchemeAConfig,
    /// PGM confusion matrix over the whole key space, when the pirate needs it.
    confusion: Option<DMatrix<f64>>,
}

impl Game {
    fn vend(&self, s: &BitString, rng: &mut Rng) -> Result<Program, ExperimentError> {
        Ok(match self.cfg.scheme {
            CopyScheme::A => Program::A(scheme_a_vend(s, &self.a_cfg, self.cfg.amplification)?),
            CopyScheme::B => Program::B(scheme_b_vend(s, self.cfg.amplification, rng)?),
        })
    }

    fn pirate(&self, s: u64, programs: Vec<Program>, rng: &mut Rng) -> Result<Vec<Program>, ExperimentError> {
        let (k, r, n) = (self.cfg.k, self.cfg.r, self.cfg.n);
        let guess = Program::Guess { key_len: n };
        let mut out = match self.cfg.pirate {
            PirateKind::Baseline => baseline_pirate(programs, r),
            PirateKind::Split => {
                let mut out = Vec::with_capacity(k + r);
                for (i, p) in programs.into_iter().enumerate() {
                    if i < r {
                        let (a, b) = split_program(&p)?;
                        out.extend([a, b]);
                    } else {
                        out.push(p);
                    }
                }
                out
            }
            PirateKind::Mix => {
                let mut out = Vec::with_capacity(k + r);
                let mut iter = programs.into_iter();
                let mut extras = 0;
                while let Some(a) = iter.next() {
                    match iter.next() {
                        Some(b) if extras < r => {
                            out.extend(trivial_mix_pirate(a, b, rng));
                            extras += 1;
                        }
                        Some(b) => out.extend([a, b]),
                        None => out.push(a),
                    }
                }
                out
            }
            PirateKind::Learn => {
                let family: Vec<BitString> = (0..1u64 << n).map(|v| key(v, n)).collect();
                let mut iter = programs.into_iter();
                let mut out = Vec::with_capacity(k + r);
                if let Some(source) = iter.next() {
                    let learned = learnability_pirate(&family, &source, rng)?;
                    out.push(learned.source_after);
                    out.extend(iter);
                    out.extend(std::iter::repeat_n(learned.fresh, r));
                }
                out
            }
            PirateKind::Pgm => {
                if k == 0 {
                    Vec::new()
                } else {
                    // The measurement consumes every program; sample its outcome from the
                    // confusion matrix and vend k + r fresh programs for the guess.
                    let row = self.confusion.as_ref().expect("prepared for pgm").row(s as usize).clone_owned();
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    let mut guessed = row.len() as u64 - 1;
                    for (j, p) in row.iter().enumerate() {
                        acc += p;
                        if u < acc {
                            guessed = j as u64;
                            break;
                        }
                    }
                    (0..k + r).map(|_| self.vend(&key(guessed, n), rng)).collect::<Result<_, _>>()?
                }
            }
        };
        out.resize(k + r, guess);
        Ok(out)
    }

    fn trial(&self, rng: &mut Rng) -> Result<usize, ExperimentError> {
        let n = self.cfg.n;
        let s = rng.random_range(0..1u64 << n);
        let sk = key(s, n);
        let programs = (0..self.cfg.k).map(|_| self.vend(&sk, rng)).collect::<Result<Vec<_>, _>>()?;
        let outputs = self.pirate(s, programs, rng)?;
        let mut correct = 0;
        for p in &outputs {
            let x = sample_input(s, n, rng);
            let answer = match self.cfg.freeloader {
                Freeloader::Eval => match p.eval(&key(x, n), rng) {
                    Ok(o) => o.value,
                    // A depleted program can only guess.
                    Err(crate::copyprotect::CopyError::Depleted) => rng.random(),
                    Err(e) => return Err(e.into()),
                },
                Freeloader::Guess => rng.random(),
            };
            correct += usize::from(answer == (x == s));
        }
        Ok(correct)
    }

    /// `ε = ½ · E_{x ≠ s}[P(genuine program accepts x)]`.
    fn genuine_error(&self) -> Result<f64, ExperimentError> {
        let n = self.cfg.n;
        let amp = self.cfg.amplification as i32;
        Ok(match self.cfg.scheme {
            CopyScheme::B => 0.5 * 0.5f64.powi(amp),
            CopyScheme::A => {
                let size = 1u64 << n;
                let pairs: Vec<(u64, u64)> = if size <= 64 {
                    (0..size).flat_map(|a| (0..size).filter(move |&b| b != a).map(move |b| (a, b))).collect()
                } else {
                    let mut r = Rng::new(0).split("genuine-error");
                    (0..256)
                        .map(|_| {
                            let a = r.random_range(0..size);
                            (a, sample_input_wrong(a, n, &mut r))
                        })
                        .collect()
                };
                let total: f64 = pairs
                    .par_iter()
                    .map(|&(a, b)| {
                        let sa = scheme_a_state(&key(a, n), &self.a_cfg)?;
                        let sb = scheme_a_state(&key(b, n), &self.a_cfg)?;
                        Ok(fidelity(&sa, &sb)?.powi(amp))
                    })
                    .collect::<Result<Vec<f64>, ExperimentError>>()?
                    .iter()
                    .sum();
                0.5 * total / pairs.len() as f64
            }
        })
    }
}

/// Uniform over the keys other than `s`.
fn sample_input_wrong(s: u64, n: usize, rng: &mut Rng) -> u64 {
    let other = rng.random_range(0..(1u64 << n) - 1);
    if other >= s {
        other + 1
    } else {
        other
    }
}

/// Vends `k` programs for a fresh uniform key per trial, runs the pirate to
/// `k + r` registers, and has the freeloader answer one `x ~ D` per register.
pub fn run_pirate_game(cfg: &PirateConfig, rng: &mut Rng) -> Result<PirateReport, ExperimentError> {
    if !cfg.pirate.supports(cfg.scheme, cfg.n) {
        return Err(ExperimentError::Unsupported {
            scheme: cfg.scheme.to_string(),
            counterfeiter: cfg.pirate.to_string(),
        });
    }
    if !(1..=20).contains(&cfg.n) || cfg.trials == 0 || cfg.k + cfg.r == 0 || cfg.amplification == 0 {
        return Err(ExperimentError::Config("need 1..=20 key bits, positive trials, amplification and k + r".into()));
    }
    if !(0.0..=1.0).contains(&cfg.delta) {
        return Err(ExperimentError::Config(format!("delta {} outside [0, 1]", cfg.delta)));
    }
    if cfg.pirate == PirateKind::Split && cfg.r > cfg.k {
        return Err(ExperimentError::Config("splitting yields at most one extra register per program".into()));
    }
    let a_cfg = SchemeAConfig::new(cfg.m);
    if cfg.scheme == CopyScheme::A {
        a_cfg.validate()?;
    }
    let confusion = if cfg.pirate == PirateKind::Pgm {
        let keys: Vec<BitString> = (0..1u64 << cfg.n).map(|v| key(v, cfg.n)).collect();
        let copies = cfg.k * cfg.amplification;
        Some(match cfg.scheme {
            CopyScheme::A => {
                pgm_confusion_from_gram(pgm_pirate_a(&keys, &a_cfg, copies)?.gram.as_ref().expect("pure-state gram"))
            }
            CopyScheme::B => {
                // Only the overall success is available in closed form; spread the
                // misses evenly over the other keys.
                let p = pgm_pirate_b(&keys, copies)?.success;
                let size = keys.len();
                let miss = if size > 1 { (1.0 - p) / (size - 1) as f64 } else { 0.0 };
                DMatrix::from_fn(size, size, |i, j| if i == j { p } else { miss })
            }
        })
    } else {
        None
    };
    let game = Game { cfg: cfg.clone(), a_cfg, confusion };
    let base = rng.fork();
    let counts: Vec<usize> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| game.trial(&mut base.split_index("trial", t as u64)))
        .collect::<Result<_, _>>()?;
    let trials = cfg.trials as f64;
    let width = (cfg.k + cfg.r) as f64;
    let mean = counts.iter().sum::<usize>() as f64 / trials;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (trials - 1.0).max(1.0);
    let stderr = (var / trials).sqrt();
    let (lo, hi) = wilson_interval(counts.iter().sum::<usize>() as u64, (cfg.trials * (cfg.k + cfg.r)) as u64, 1.96);
    let eps = game.genuine_error()?;
    let budget = cfg.k as f64 + (1.0 - cfg.delta) * cfg.r as f64;
    Ok(PirateReport {
        scheme: cfg.scheme,
        pirate: cfg.pirate,
        freeloader: cfg.freeloader,
        n: cfg.n,
        k: cfg.k,
        r: cfg.r,
        amplification: cfg.amplification,
        delta: cfg.delta,
        trials: cfg.trials,
        expected_correct: mean,
        stderr,
        ci: [lo * width, hi * width],
        budget,
        genuine_error: eps,
        baseline: (1.0 - eps) * cfg.k as f64 + cfg.r as f64 / 2.0,
        exceeds_budget: mean - 5.0 * stderr > budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(scheme: CopyScheme, pirate: PirateKind) -> PirateConfig {
        PirateConfig { scheme, pirate, trials: 2000, ..PirateConfig::default() }
    }

    #[test]
    fn input_distribution_is_half_on_key() {
        let mut rng = Rng::new(1);
        let hits = (0..20_000).filter(|_| sample_input(5, 3, &mut rng) == 5).count();
        assert!((hits as f64 / 20_000.0 - 0.5).abs() < 5.0 * (0.25f64 / 20_000.0).sqrt());
        assert!((0..1000).all(|_| sample_input(0, 3, &mut rng) < 8));
    }

    #[test]
    fn baseline_matches_pass_through_plus_guessing() {
        for scheme in [CopyScheme::A, CopyScheme::B] {
            let rep = run_pirate_game(&cfg(scheme, PirateKind::Baseline), &mut Rng::new(2)).unwrap();
            assert!((rep.expected_correct - rep.baseline).abs() < 5.0 * rep.stderr, "{scheme}: {rep:?}");
            assert!(!rep.exceeds_budget);
        }
    }

    #[test]
    fn guessing_freeloader_scores_half() {
        let mut c = cfg(CopyScheme::B, PirateKind::Baseline);
        c.freeloader = Freeloader::Guess;
        let rep = run_pirate_game(&c, &mut Rng::new(3)).unwrap();
        assert!((rep.expected_correct - 4.0).abs() < 5.0 * rep.stderr);
    }

    #[test]
    fn pgm_pirate_on_well_separated_states_wins_everything() {
        let mut c = cfg(CopyScheme::A, PirateKind::Pgm);
        c.trials = 300;
        let rep = run_pirate_game(&c, &mut Rng::new(4)).unwrap();
        assert!(rep.expected_correct > rep.k as f64 + 0.9 * rep.r as f64, "{rep:?}");
        assert!(rep.exceeds_budget);
    }

    #[test]
    fn learning_pirate_needs_scheme_a_and_a_small_family() {
        let mut c = cfg(CopyScheme::A, PirateKind::Learn);
        c.trials = 100;
        let rep = run_pirate_game(&c, &mut Rng::new(5)).unwrap();
        assert!(rep.expected_correct > 7.5, "{rep:?}");
        assert!(run_pirate_game(&cfg(CopyScheme::B, PirateKind::Learn), &mut Rng::new(5)).is_err());
    }

    #[test]
    fn split_and_mix_pirates_run() {
        for pirate in [PirateKind::Split, PirateKind::Mix] {
            let mut c = cfg(CopyScheme::B, pirate);
            c.trials = 500;
            let rep = run_pirate_game(&c, &mut Rng::new(6)).unwrap();
            assert!(rep.expected_correct <= (rep.k + rep.r) as f64);
            assert!(rep.ci[0] <= rep.expected_correct && rep.expected_correct <= rep.ci[1] + 1e-9);
        }
        let mut odd = cfg(CopyScheme::B, PirateKind::Split);
        odd.amplification = 3;
        assert!(run_pirate_game(&odd, &mut Rng::new(7)).is_err());
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(serde_json::from_str::<PirateConfig>(r#"{"k": 2, "bogus": 1}"#).is_err());
        let c: PirateConfig = serde_json::from_str(r#"{"k": 2, "pirate": "pgm"}"#).unwrap();
        assert_eq!((c.k, c.pirate, c.r), (2, PirateKind::Pgm, 4));
    }
}
