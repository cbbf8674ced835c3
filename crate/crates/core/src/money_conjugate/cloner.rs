//! Search over one-qubit cloning strategies for the four conjugate-coding
//! states, scored by the exact probability that both output copies pass.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::note::QubitSpec;
use crate::mathcore::Rng;

/// Bloch-sphere pure state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bloch {
    pub theta: f64,
    pub phi: f64,
}

impl Bloch {
    fn amps(&self) -> [Complex64; 2] {
        [Complex64::new((self.theta / 2.0).cos(), 0.0), Complex64::from_polar((self.theta / 2.0).sin(), self.phi)]
    }

    fn orthogonal(&self) -> [Complex64; 2] {
        [Complex64::new((self.theta / 2.0).sin(), 0.0), -Complex64::from_polar((self.theta / 2.0).cos(), self.phi)]
    }

    fn random(rng: &mut Rng) -> Self {
        let cos_theta: f64 = rng.random_range(-1.0..1.0);
        Bloch { theta: cos_theta.acos(), phi: rng.random_range(0.0..std::f64::consts::TAU) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClonerStrategy {
    /// Measure in the basis `{|b⟩, |b⊥⟩}` and, on outcome `o`, prepare
    /// `|first[o]⟩ ⊗ |second[o]⟩`.
    MeasurePrepare { basis: Bloch, first: [Bloch; 2], second: [Bloch; 2] },
    /// Unitary on (input, blank `|0⟩`, ancilla `|0⟩`); qubit 0 is the input.
    Unitary {
        #[serde(serialize_with = "serialize_matrix")]
        matrix: DMatrix<Complex64>,
    },
}

fn serialize_matrix<S: serde::Serializer>(m: &DMatrix<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect();
    rows.serialize(s)
}

fn overlap_sqr(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr()
}

impl ClonerStrategy {
    /// Guess a fixed basis, measure, and resend two copies of the result.
    /// Averaged over the four states this is the measure-and-resend attack.
    pub fn measure_resend() -> Self {
        let zero = Bloch { theta: 0.0, phi: 0.0 };
        let one = Bloch { theta: std::f64::consts::PI, phi: 0.0 };
        ClonerStrategy::MeasurePrepare { basis: zero, first: [zero, one], second: [zero, one] }
    }

    /// Probability that both copies pass, averaged over the four states.
    pub fn both_pass_prob(&self) -> f64 {
        QubitSpec::ALL.iter().map(|s| self.both_pass_for(s)).sum::<f64>() / 4.0
    }

    fn both_pass_for(&self, spec: &QubitSpec) -> f64 {
        let amps = spec.state();
        let s = [amps.amplitudes()[0], amps.amplitudes()[1]];
        match self {
            ClonerStrategy::MeasurePrepare { basis, first, second } => {
                let outcomes = [basis.amps(), basis.orthogonal()];
                (0..2)
                    .map(|o| {
                        overlap_sqr(&outcomes[o], &s)
                            * overlap_sqr(&s, &first[o].amps())
                            * overlap_sqr(&s, &second[o].amps())
                    })
                    .sum()
            }
            ClonerStrategy::Unitary { matrix } => {
                // Output = s0·U[:,0] + s1·U[:,1]; project qubits 0,1 onto |s⟩|s⟩.
                let out: Vec<Complex64> = (0..8).map(|r| s[0] * matrix[(r, 0)] + s[1] * matrix[(r, 1)]).collect();
                (0..2)
                    .map(|anc| {
                        let mut amp = Complex64::new(0.0, 0.0);
                        for b0 in 0..2 {
                            for b1 in 0..2 {
                                amp += s[b0].conj() * s[b1].conj() * out[b0 + 2 * b1 + 4 * anc];
                            }
                        }
                        amp.norm_sqr()
                    })
                    .sum()
            }
        }
    }
}

fn gaussian_matrix(dim: usize, rng: &mut Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Unitary factor of the QR decomposition with `R` given a positive
/// diagonal, so nearby inputs map to nearby unitaries.
fn orthonormalize(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let qr = m.qr();
    let (mut q, r) = qr.unpack();
    for c in 0..q.ncols() {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..q.nrows() {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Haar-random unitary.
pub fn random_unitary(dim: usize, rng: &mut Rng) -> DMatrix<Complex64> {
    orthonormalize(gaussian_matrix(dim, rng))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClonerSearch {
    pub best: ClonerStrategy,
    pub both_pass_prob: f64,
    pub evaluated: usize,
    /// Largest score seen across every evaluated strategy.
    pub max_seen: f64,
}

/// Random sampling over both strategy families followed by local hill
/// climbing on the unitary family. `budget` counts strategy evaluations.
pub fn optimize_cloner_1qubit(budget: usize, rng: &mut Rng) -> ClonerSearch {
    let mut best = ClonerStrategy::measure_resend();
    let mut best_p = best.both_pass_prob();
    let mut evaluated = 1;
    let mut max_seen = best_p;
    let mut consider = |s: ClonerStrategy, best: &mut ClonerStrategy, best_p: &mut f64, evaluated: &mut usize| -> f64 {
        let p = s.both_pass_prob();
        *evaluated += 1;
        max_seen = max_seen.max(p);
        if p > *best_p {
            *best_p = p;
            *best = s;
        }
        p
    };

    let random_phase = budget / 10;
    for _ in 0..random_phase {
        let s = ClonerStrategy::MeasurePrepare {
            basis: Bloch::random(rng),
            first: [Bloch::random(rng), Bloch::random(rng)],
            second: [Bloch::random(rng), Bloch::random(rng)],
        };
        consider(s, &mut best, &mut best_p, &mut evaluated);
    }
    let mut best_unitary = random_unitary(8, rng);
    let mut best_unitary_p =
        consider(ClonerStrategy::Unitary { matrix: best_unitary.clone() }, &mut best, &mut best_p, &mut evaluated);
    for _ in 0..random_phase {
        let u = random_unitary(8, rng);
        let p = consider(ClonerStrategy::Unitary { matrix: u.clone() }, &mut best, &mut best_p, &mut evaluated);
        if p > best_unitary_p {
            best_unitary_p = p;
            best_unitary = u;
        }
    }

    let mut step = 0.3;
    let mut failures = 0;
    while evaluated < budget {
        let candidate = orthonormalize(&best_unitary + gaussian_matrix(8, rng) * Complex64::new(step / 8.0, 0.0));
        let p = consider(ClonerStrategy::Unitary { matrix: candidate.clone() }, &mut best, &mut best_p, &mut evaluated);
        if p > best_unitary_p {
            best_unitary_p = p;
            best_unitary = candidate;
            failures = 0;
        } else {
            failures += 1;
            if failures >= 50 {
                step *= 0.7;
                failures = 0;
                if step < 1e-6 {
                    step = 0.3;
                }
            }
        }
    }
    ClonerSearch { best, both_pass_prob: best_p, evaluated, max_seen }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_resend_scores_five_eighths() {
        assert!((ClonerStrategy::measure_resend().both_pass_prob() - 0.625).abs() < 1e-15);
    }

    #[test]
    fn identity_unitary_passes_only_original() {
        // Identity leaves the blank in |0⟩: both pass only for |0⟩ (1) and
        // with probability 1/2 for |+⟩, |−⟩.
        let u = DMatrix::<Complex64>::identity(8, 8);
        let p = ClonerStrategy::Unitary { matrix: u }.both_pass_prob();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn random_strategies_never_beat_three_quarters() {
        let mut rng = Rng::new(1);
        for _ in 0..2000 {
            let u = ClonerStrategy::Unitary { matrix: random_unitary(8, &mut rng) };
            assert!(u.both_pass_prob() <= 0.75 + 1e-9);
            let m = ClonerStrategy::MeasurePrepare {
                basis: Bloch::random(&mut rng),
                first: [Bloch::random(&mut rng), Bloch::random(&mut rng)],
                second: [Bloch::random(&mut rng), Bloch::random(&mut rng)],
            };
            assert!(m.both_pass_prob() <= 0.75 + 1e-9);
        }
    }

    #[test]
    fn search_approaches_optimum_from_below() {
        let r = optimize_cloner_1qubit(20_000, &mut Rng::new(2));
        assert!(r.both_pass_prob >= 0.70, "{}", r.both_pass_prob);
        assert!(r.max_seen <= 0.75 + 1e-9);
        assert_eq!(r.evaluated, 20_000);
    }

    #[test]
    fn orthonormalize_yields_unitaries() {
        let u = random_unitary(8, &mut Rng::new(3));
        let defect = (u.adjoint() * &u - DMatrix::<Complex64>::identity(8, 8)).norm();
        assert!(defect < 1e-12);
    }
}
