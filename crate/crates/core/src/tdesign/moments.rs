use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::RngCore;
use rayon::prelude::*;

use super::states::DesignSpec;
use super::DesignError;
use crate::mathcore::{BitString, FieldElement, Rng};

/// Exact enumeration is allowed up to `2^20` indices.
pub const MAX_EXACT_INDEX_BITS: usize = 20;
/// Moment operators act on at most `12` qubits (`n·t ≤ 12`).
pub const MAX_MOMENT_QUBITS: usize = 12;

const SHARD: usize = 2048;

/// `E[(|ψ⟩⟨ψ|)^{⊗t}]` for some ensemble. Register `0` of the tensor power
/// occupies the low `n` bits of the row index.
#[derive(Clone, Debug)]
pub struct MomentOperator {
    pub n: usize,
    pub t: usize,
    pub matrix: DMatrix<Complex64>,
    /// Entrywise standard error, for Monte Carlo estimates.
    pub stderr: Option<DMatrix<f64>>,
}

impl MomentOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMode {
    Exact,
    MonteCarlo { samples: usize },
}

fn check_moment_size(n: usize, t: usize) -> Result<(), DesignError> {
    if t == 0 || n * t > MAX_MOMENT_QUBITS {
        return Err(DesignError::TooLarge(format!("n·t = {} must lie in 1..={MAX_MOMENT_QUBITS}", n * t)));
    }
    Ok(())
}

fn tensor_power(v: &[Complex64], t: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..t {
        let mut next = Vec::with_capacity(out.len() * v.len());
        for b in v {
            for a in &out {
                next.push(a * b);
            }
        }
        out = next;
    }
    out
}

/// `Σ_k v_k v_k†` and `Σ_k |v_k|²|v_k|²ᵀ` over one shard of indices.
fn shard_sums(
    spec: &DesignSpec,
    t: usize,
    coeff_sets: &[Vec<FieldElement>],
    want_second: bool,
) -> (DMatrix<Complex64>, Option<DMatrix<f64>>) {
    let dim = 1usize << (spec.n * t);
    let mut cols = DMatrix::<Complex64>::zeros(dim, coeff_sets.len());
    for (k, c) in coeff_sets.iter().enumerate() {
        let v = tensor_power(&spec.amplitudes(c), t);
        cols.column_mut(k).copy_from_slice(&v);
    }
    let first = &cols * cols.adjoint();
    let second = want_second.then(|| {
        let w = cols.map(|z| z.norm_sqr());
        &w * w.transpose()
    });
    (first, second)
}

fn coefficients_from_word(spec: &DesignSpec, word: u64) -> Vec<FieldElement> {
    let mask = (1u64 << spec.n) - 1;
    (0..=spec.d).map(|i| FieldElement((word >> (i * spec.n) & mask) as u32)).collect()
}

/// Moment operator of the design ensemble, by enumerating every index or by
/// sampling indices uniformly.
pub fn design_moment(
    spec: &DesignSpec,
    t: usize,
    mode: MomentMode,
    rng: &mut Rng,
) -> Result<MomentOperator, DesignError> {
    check_moment_size(spec.n, t)?;
    let bits = spec.index_bits();
    let coeff_sets: Vec<Vec<FieldElement>> = match mode {
        MomentMode::Exact => {
            if bits > MAX_EXACT_INDEX_BITS {
                return Err(DesignError::TooLarge(format!("2^{bits} indices exceeds 2^{MAX_EXACT_INDEX_BITS}")));
            }
            (0..1u64 << bits).map(|w| coefficients_from_word(spec, w)).collect()
        }
        MomentMode::MonteCarlo { samples } => {
            if samples == 0 {
                return Err(DesignError::NoSamples);
            }
            (0..samples)
                .map(|_| {
                    let words: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.next_u64()).collect();
                    spec.coefficients(&BitString::from_words(words, bits)).expect("length matches")
                })
                .collect()
        }
    };
    let count = coeff_sets.len();
    let want_second = matches!(mode, MomentMode::MonteCarlo { .. });
    let shards: Vec<(DMatrix<Complex64>, Option<DMatrix<f64>>)> =
        coeff_sets.par_chunks(SHARD).map(|chunk| shard_sums(spec, t, chunk, want_second)).collect();
    let dim = 1usize << (spec.n * t);
    let mut first = DMatrix::<Complex64>::zeros(dim, dim);
    let mut second = DMatrix::<f64>::zeros(dim, dim);
    for (f, s) in shards {
        first += f;
        if let Some(s) = s {
            second += s;
        }
    }
    let k = count as f64;
    let matrix = first / Complex64::new(k, 0.0);
    let stderr = want_second.then(|| {
        let denom = (k - 1.0).max(1.0) * k;
        DMatrix::from_fn(dim, dim, |r, c| ((second[(r, c)] - k * matrix[(r, c)].norm_sqr()).max(0.0) / denom).sqrt())
    });
    Ok(MomentOperator { n: spec.n, t, matrix, stderr })
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Haar moment: projector onto the symmetric subspace of `(ℂ^{2ⁿ})^{⊗t}`
/// divided by its dimension `C(2ⁿ+t−1, t)`.
///
/// `Π_sym[b, a] = (1/t!)·#{π : π(a) = b}`, which is `Π_k mult_k! / t!` when
/// `b` rearranges the registers of `a` and zero otherwise.
pub fn haar_moment(n: usize, t: usize) -> Result<MomentOperator, DesignError> {
    check_moment_size(n, t)?;
    let dim = 1usize << (n * t);
    let mask = (1usize << n) - 1;
    let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for a in 0..dim {
        let mut regs: Vec<usize> = (0..t).map(|r| a >> (r * n) & mask).collect();
        regs.sort_unstable();
        groups.entry(regs).or_default().push(a);
    }
    let t_fact: f64 = (1..=t).map(|i| i as f64).product();
    let sym_dim = binomial((1u64 << n) + t as u64 - 1, t as u64);
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for (regs, members) in &groups {
        let mut weight = 1.0;
        let mut run = 1;
        for w in 1..=regs.len() {
            if w < regs.len() && regs[w] == regs[w - 1] {
                run += 1;
                weight *= run as f64;
            } else {
                run = 1;
            }
        }
        let value = Complex64::new(weight / t_fact / sym_dim, 0.0);
        for &a in members {
            for &b in members {
                matrix[(b, a)] = value;
            }
        }
    }
    Ok(MomentOperator { n, t, matrix, stderr: None })
}

/// Trace norm `‖a − b‖₁`.
pub fn moment_distance(a: &MomentOperator, b: &MomentOperator) -> Result<f64, DesignError> {
    if a.dim() != b.dim() {
        return Err(DesignError::DimensionMismatch(a.dim(), b.dim()));
    }
    let diff = &a.matrix - &b.matrix;
    Ok(diff.singular_values().iter().sum())
}
