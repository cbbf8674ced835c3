use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::states::{design_state, DesignSpec};
use super::DesignError;
use crate::mathcore::{BitString, Rng};
use crate::quantumsim::{haar_state, reflection_oracle, DenseState};

/// Fixed catalogue of test algorithms. Each receives `t` copies of `|φ⟩`
/// and may query `U_φ = I − 2|φ⟩⟨φ|` up to `T` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    AlwaysAccept,
    /// Swap tests on disjoint pairs of copies; accept iff all pass.
    SwapTestBattery,
    /// Swap-test every copy against `|+⟩^{⊗n}`; accept iff all pass.
    ReferenceSwap,
    /// Project every copy onto `|+⟩^{⊗n}`; accept iff all land there.
    PlusProjection,
    /// Grover-style probe: start from `|+⟩^{⊗n}`, apply `T` rounds of
    /// `(2|+⟩⟨+| − I)·U_φ`, then swap-test against a held copy (or project
    /// onto `|+⟩^{⊗n}` when there is no copy).
    OracleProbe,
    /// `OracleProbe` on the first copy and `PlusProjection` on the rest.
    Combined,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::AlwaysAccept,
        Strategy::SwapTestBattery,
        Strategy::ReferenceSwap,
        Strategy::PlusProjection,
        Strategy::OracleProbe,
        Strategy::Combined,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::AlwaysAccept => "always-accept",
            Strategy::SwapTestBattery => "swap-test-battery",
            Strategy::ReferenceSwap => "reference-swap",
            Strategy::PlusProjection => "plus-projection",
            Strategy::OracleProbe => "oracle-probe",
            Strategy::Combined => "combined",
        }
    }

    /// Exact acceptance probability on input `|φ⟩^{⊗t}` with `T` queries.
    /// Every test acts on its own registers, so probabilities multiply.
    pub fn accept_probability(&self, phi: &DenseState, t: usize, queries: usize) -> Result<f64, DesignError> {
        let plus = DenseState::plus(phi.num_qubits());
        let f_plus = phi.inner(&plus)?.norm_sqr();
        Ok(match self {
            Strategy::AlwaysAccept => 1.0,
            // Identical pure copies pass a swap test with certainty.
            Strategy::SwapTestBattery => 1.0,
            Strategy::ReferenceSwap => ((1.0 + f_plus) / 2.0).powi(t as i32),
            Strategy::PlusProjection => f_plus.powi(t as i32),
            Strategy::OracleProbe => oracle_probe(phi, &plus, t, queries)?,
            Strategy::Combined => {
                oracle_probe(phi, &plus, t.min(1), queries)? * f_plus.powi(t.saturating_sub(1) as i32)
            }
        })
    }
}

fn oracle_probe(phi: &DenseState, plus: &DenseState, t: usize, queries: usize) -> Result<f64, DesignError> {
    let mut r = plus.clone();
    for _ in 0..queries {
        r = reflection_oracle(&r, phi)?;
        let c = plus.inner(&r)?;
        let amps: Vec<Complex64> = r.amplitudes().iter().zip(plus.amplitudes()).map(|(a, p)| 2.0 * c * p - a).collect();
        r = DenseState::normalized(amps)?;
    }
    Ok(if t >= 1 { (1.0 + phi.inner(&r)?.norm_sqr()) / 2.0 } else { plus.inner(&r)?.norm_sqr() })
}

/// `4(t + 2T)² / 2ⁿ`.
pub fn advantage_bound(n: usize, t: usize, queries: usize) -> f64 {
    let load = (t + 2 * queries) as f64;
    4.0 * load * load / (1u64 << n) as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct AdvantageReport {
    pub n: usize,
    pub d: usize,
    pub t: usize,
    #[serde(rename = "T")]
    pub queries: usize,
    pub strategy: Strategy,
    pub trials: usize,
    pub design_mean: f64,
    pub haar_mean: f64,
    pub advantage: f64,
    pub stderr: f64,
    pub bound: f64,
}

fn mean_and_var(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
    (mean, var)
}

/// Estimates `|E_x[E(φ_x)] − E_Haar[E(ψ)]|` with `trials` samples from each
/// ensemble, using the exact acceptance probability per sampled state.
/// Refuses when `t + 2T > min(d/2, √(2ⁿ/2))`, where the bound says nothing.
pub fn distinguisher_advantage(
    spec: &DesignSpec,
    t: usize,
    queries: usize,
    strategy: Strategy,
    trials: usize,
    rng: &mut Rng,
) -> Result<AdvantageReport, DesignError> {
    let load = t + 2 * queries;
    if 2 * load > spec.d || (load * load) as u128 * 2 > 1u128 << spec.n {
        return Err(DesignError::BoundInapplicable { load });
    }
    if trials == 0 {
        return Err(DesignError::NoSamples);
    }
    let bits = spec.index_bits();
    let mut design = Vec::with_capacity(trials);
    let mut haar = Vec::with_capacity(trials);
    for _ in 0..trials {
        let words: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.next_u64()).collect();
        let phi = design_state(spec, &BitString::from_words(words, bits))?;
        design.push(strategy.accept_probability(&phi, t, queries)?);
        let psi = haar_state(spec.n, rng)?;
        haar.push(strategy.accept_probability(&psi, t, queries)?);
    }
    let (dm, dv) = mean_and_var(&design);
    let (hm, hv) = mean_and_var(&haar);
    Ok(AdvantageReport {
        n: spec.n,
        d: spec.d,
        t,
        queries,
        strategy,
        trials,
        design_mean: dm,
        haar_mean: hm,
        advantage: (dm - hm).abs(),
        stderr: ((dv + hv) / trials as f64).sqrt(),
        bound: advantage_bound(spec.n, t, queries),
    })
}
