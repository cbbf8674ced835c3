use rand::Rng as _;

use super::state::{DenseState, C0};
use super::SimError;
use crate::mathcore::Rng;

/// Branches this close to certain leave the state untouched, so measuring an
/// exact eigenstate is bit-for-bit non-destructive.
const CERTAIN: f64 = 1.0 - 1e-12;

/// Accepting subspace of a two-outcome measurement.
#[derive(Clone, Debug, PartialEq)]
pub enum Projector {
    /// Accept when the listed qubits read `pattern` in the computational basis.
    BasisPattern { qubits: Vec<usize>, pattern: Vec<bool> },
    /// Accept on the span of a single state.
    Rank1(DenseState),
}

impl Projector {
    pub fn all_zero(qubits: Vec<usize>) -> Self {
        let pattern = vec![false; qubits.len()];
        Projector::BasisPattern { qubits, pattern }
    }

    fn check(&self, s: &DenseState) -> Result<(), SimError> {
        match self {
            Projector::BasisPattern { qubits, pattern } => {
                if qubits.len() != pattern.len() {
                    return Err(SimError::DimensionMismatch { expected: qubits.len(), found: pattern.len() });
                }
                for (i, &q) in qubits.iter().enumerate() {
                    if q >= s.num_qubits() || qubits[..i].contains(&q) {
                        return Err(SimError::BadTargets { targets: qubits.clone(), num_qubits: s.num_qubits() });
                    }
                }
                Ok(())
            }
            Projector::Rank1(t) => s.check_dims(t),
        }
    }

    /// `‖P s‖²`.
    pub fn probability(&self, s: &DenseState) -> Result<f64, SimError> {
        self.check(s)?;
        Ok(match self {
            Projector::BasisPattern { .. } => {
                let (mask, want) = self.masks();
                s.amplitudes().iter().enumerate().filter(|(i, _)| i & mask == want).map(|(_, a)| a.norm_sqr()).sum()
            }
            Projector::Rank1(t) => t.inner_unchecked(s).norm_sqr(),
        }
        .clamp(0.0, 1.0))
    }

    fn masks(&self) -> (usize, usize) {
        match self {
            Projector::BasisPattern { qubits, pattern } => {
                qubits.iter().zip(pattern).fold((0, 0), |(m, w), (&q, &b)| (m | 1 << q, if b { w | 1 << q } else { w }))
            }
            Projector::Rank1(_) => unreachable!("basis masks only"),
        }
    }

    /// Unnormalized `P s` (or `(I − P) s` when `accept` is false).
    fn project(&self, s: &DenseState, accept: bool) -> DenseState {
        let mut out = s.clone();
        match self {
            Projector::BasisPattern { .. } => {
                let (mask, want) = self.masks();
                for (i, a) in out.amplitudes_mut().iter_mut().enumerate() {
                    if (i & mask == want) != accept {
                        *a = C0;
                    }
                }
            }
            Projector::Rank1(t) => {
                let c = t.inner_unchecked(s);
                let sign = if accept { 1.0 } else { -1.0 };
                for (a, ta) in out.amplitudes_mut().iter_mut().zip(t.amplitudes()) {
                    *a = if accept { c * ta } else { *a + sign * c * ta };
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub outcome: bool,
    pub prob_yes: f64,
    pub post: DenseState,
}

/// Two-outcome measurement `{P, I − P}` with Born-rule sampling and a
/// renormalized post-measurement state.
pub fn measure_projector(s: &DenseState, p: &Projector, rng: &mut Rng) -> Result<Measurement, SimError> {
    let prob_yes = p.probability(s)?;
    let outcome = rng.random::<f64>() < prob_yes;
    let branch = if outcome { prob_yes } else { 1.0 - prob_yes };
    let post = if branch >= CERTAIN {
        s.clone()
    } else {
        let mut post = p.project(s, outcome);
        let norm = post.norm_sqr();
        if norm <= 0.0 {
            return Err(SimError::ZeroProbabilityBranch);
        }
        post.scale(1.0 / norm.sqrt());
        post
    };
    Ok(Measurement { outcome, prob_yes, post })
}

/// Post-measurement state for a chosen outcome, without sampling.
pub fn project_onto(s: &DenseState, p: &Projector, outcome: bool) -> Result<(f64, DenseState), SimError> {
    let prob_yes = p.probability(s)?;
    let branch = if outcome { prob_yes } else { 1.0 - prob_yes };
    if branch >= CERTAIN {
        return Ok((branch, s.clone()));
    }
    let mut post = p.project(s, outcome);
    let norm = post.norm_sqr();
    if norm <= 0.0 {
        return Err(SimError::ZeroProbabilityBranch);
    }
    post.scale(1.0 / norm.sqrt());
    Ok((branch, post))
}
