use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::mathcore::Rng;
use crate::quantumsim::{haar_state, measure_projector, Amplifier, DenseState, Projector};

registry! {
    /// How a counterfeiter holding a reflection oracle about `|ψ⟩` (and maybe
    /// some intact copies) tries to produce one more register.
    ScalingStrategy, "scaling strategy", {
        /// Amplitude amplification from `|0…0⟩`. Held copies are left alone.
        Amplify => "amplify",
        /// Measures one held copy in the computational basis, then amplifies
        /// from the observed basis state twice: once to restore the consumed
        /// copy and once for the new register.
        MeasureSeeded => "measure-seeded",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub trials: usize,
    pub mean_queries: f64,
    pub queries_stderr: f64,
    pub mean_log2_queries: f64,
    /// Trials that hit the query cap `64·2^{n/2}`; their count is the cap.
    pub capped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub strategy: ScalingStrategy,
    pub copies: usize,
    pub fidelity_target: f64,
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of mean `log₂(queries)` against `n`.
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
}

pub const MAX_SCALING_QUBITS: usize = 10;

pub fn query_cap(n: usize) -> usize {
    (64.0 * 2f64.powf(n as f64 / 2.0)).ceil() as usize
}

/// Queries until amplification from `start` reaches `target` at fidelity
/// `goal`, or `None` past `cap`.
fn queries_to_reach(start: &DenseState, target: &DenseState, goal: f64, cap: usize) -> Option<usize> {
    let mut amp = Amplifier::new(start, target).ok()?;
    while amp.fidelity() < goal {
        if amp.queries() >= cap {
            return None;
        }
        amp.step();
    }
    Some(amp.queries())
}

fn one_trial(
    n: usize,
    strategy: ScalingStrategy,
    copies: usize,
    goal: f64,
    rng: &mut Rng,
) -> Result<(usize, bool), ExperimentError> {
    let target = haar_state(n, rng)?;
    let cap = query_cap(n);
    match strategy {
        ScalingStrategy::Amplify => {
            let q = queries_to_reach(&DenseState::zero(n), &target, goal, cap);
            Ok(q.map_or((cap, true), |q| (q, false)))
        }
        ScalingStrategy::MeasureSeeded => {
            if copies == 0 {
                return Err(ExperimentError::Config("measure-seeded needs at least one held copy".into()));
            }
            let dim = 1usize << n;
            // Sample b with probability |ψ_b|² by measuring basis projectors in turn.
            let mut state = target.clone();
            let mut b = dim - 1;
            for i in 0..dim - 1 {
                let m = measure_projector(&state, &Projector::Rank1(DenseState::basis(n, i)), rng)?;
                if m.outcome {
                    b = i;
                    break;
                }
                state = m.post;
            }
            let q = queries_to_reach(&DenseState::basis(n, b), &target, goal, cap);
            Ok(q.map_or((cap, true), |q| (2 * q, false)))
        }
    }
}

/// Least-squares line through `(x, y)`: `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// For each `n`, Haar-samples targets and counts reflection-oracle queries
/// until a fresh register reaches `fidelity_target`; fits `log₂(queries)`
/// against `n`.
pub fn run_nocloning_scaling(
    ns: &[usize],
    fidelity_target: f64,
    strategy: ScalingStrategy,
    copies: usize,
    trials: usize,
    rng: &mut Rng,
) -> Result<ScalingReport, ExperimentError> {
    if ns.len() < 2 || ns.iter().any(|&n| !(1..=MAX_SCALING_QUBITS).contains(&n)) {
        return Err(ExperimentError::Config(format!("need at least two qubit counts in 1..={MAX_SCALING_QUBITS}")));
    }
    if !(0.0..1.0).contains(&fidelity_target) || trials == 0 {
        return Err(ExperimentError::Config("fidelity target must lie in [0, 1) and trials must be positive".into()));
    }
    let base = rng.fork();
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let per_n = base.split_index("scaling-n", n as u64);
        let results: Vec<(usize, bool)> = (0..trials)
            .into_par_iter()
            .map(|t| one_trial(n, strategy, copies, fidelity_target, &mut per_n.split_index("trial", t as u64)))
            .collect::<Result<_, _>>()?;
        // A zero-query trial counts as one query so the logarithm stays finite.
        let mean_log2 = results.iter().map(|&(q, _)| (q.max(1) as f64).log2()).sum::<f64>() / trials as f64;
        let mean = results.iter().map(|&(q, _)| q as f64).sum::<f64>() / trials as f64;
        let var = results.iter().map(|&(q, _)| (q as f64 - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0).max(1.0);
        points.push(ScalingPoint {
            n,
            trials,
            mean_queries: mean,
            queries_stderr: (var / trials as f64).sqrt(),
            mean_log2_queries: mean_log2,
            capped: results.iter().filter(|r| r.1).count(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_log2_queries).collect();
    let (slope, intercept) = linear_fit(&xs, &ys);
    let residuals = xs.iter().zip(&ys).map(|(x, y)| y - (slope * x + intercept)).collect();
    Ok(ScalingReport { strategy, copies, fidelity_target, points, slope, intercept, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_a_line() {
        let (s, c) = linear_fit(&[1.0, 2.0, 3.0], &[2.5, 3.0, 3.5]);
        assert!((s - 0.5).abs() < 1e-12 && (c - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tiny_dimension_is_cheap() {
        let r = run_nocloning_scaling(&[2, 3], 0.9, ScalingStrategy::Amplify, 0, 200, &mut Rng::new(1)).unwrap();
        // Tiny overlaps occasionally exhaust the cap; the typical run takes a handful of queries.
        assert!(r.points.iter().all(|p| p.capped * 50 <= p.trials && p.mean_log2_queries < 2.0), "{:?}", r.points);
    }

    #[test]
    fn amplification_slope_is_one_half() {
        let r = run_nocloning_scaling(&[3, 4, 5, 6, 7, 8], 0.9, ScalingStrategy::Amplify, 0, 2000, &mut Rng::new(2))
            .unwrap();
        assert!((r.slope - 0.5).abs() < 0.1, "{}", r.slope);
        assert!(r.points.windows(2).all(|w| w[1].mean_log2_queries > w[0].mean_log2_queries));
        let seeded = run_nocloning_scaling(&[3, 4], 0.9, ScalingStrategy::MeasureSeeded, 0, 10, &mut Rng::new(2));
        assert!(matches!(seeded, Err(ExperimentError::Config(_))));
    }

    #[test]
    fn same_seed_same_report() {
        let a = run_nocloning_scaling(&[3, 5], 0.9, ScalingStrategy::MeasureSeeded, 4, 50, &mut Rng::new(3)).unwrap();
        let b = run_nocloning_scaling(&[3, 5], 0.9, ScalingStrategy::MeasureSeeded, 4, 50, &mut Rng::new(3)).unwrap();
        assert_eq!(a, b);
    }
}
