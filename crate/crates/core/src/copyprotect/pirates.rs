use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use super::perm::Perm;
use super::program::Program;
use super::scheme_a::{scheme_a_state, scheme_a_vend, ProgramA, SchemeAConfig};
use super::scheme_b::{scheme_b_vend, CosetRegister, ProgramB};
use super::CopyError;
use crate::mathcore::{BitString, Rng};
use crate::quantumsim::DenseState;

pub const MAX_KEYSPACE: usize = 16;

/// Gives away one half of an amplified program: `(first k/2 parts, last k/2)`.
pub fn split_program(prog: &Program) -> Result<(Program, Program), CopyError> {
    let k = prog.parts();
    if k == 0 {
        return Err(CopyError::Config("nothing to split".into()));
    }
    if k % 2 == 1 {
        return Err(CopyError::OddSplit(k));
    }
    Ok(match prog {
        Program::A(p) => {
            let (a, b) = p.copies.split_at(k / 2);
            (
                Program::A(ProgramA { copies: a.to_vec(), ..p.clone() }),
                Program::A(ProgramA { copies: b.to_vec(), ..p.clone() }),
            )
        }
        Program::B(p) => {
            let (a, b) = p.registers.split_at(k / 2);
            (
                Program::B(ProgramB { key_len: p.key_len, registers: a.to_vec() }),
                Program::B(ProgramB { key_len: p.key_len, registers: b.to_vec() }),
            )
        }
        Program::Guess { .. } => unreachable!("guess programs have no parts"),
    })
}

/// Same shape as `like`, with every part replaced by a uniformly random
/// basis state (one draw from the maximally mixed state).
fn mixed_stand_in(like: &Program, rng: &mut Rng) -> Program {
    match like {
        Program::A(p) => {
            let dim = 1usize << p.cfg.m;
            let copies = (0..p.copies.len()).map(|_| DenseState::basis(p.cfg.m, rng.random_range(0..dim))).collect();
            Program::A(ProgramA { copies, ..p.clone() })
        }
        Program::B(p) => {
            let registers =
                (0..p.registers.len()).map(|_| CosetRegister::basis(Perm::random(p.degree(), rng))).collect();
            Program::B(ProgramB { key_len: p.key_len, registers })
        }
        Program::Guess { .. } => like.clone(),
    }
}

/// Two genuine programs in random slots among three, plus one maximally
/// mixed stand-in.
pub fn trivial_mix_pirate(a: Program, b: Program, rng: &mut Rng) -> Vec<Program> {
    let filler = mixed_stand_in(&a, rng);
    let mut out = vec![a, b, filler];
    out.shuffle(rng);
    out
}

/// The `k` genuine programs followed by `r` coin-flipping ones.
pub fn baseline_pirate(programs: Vec<Program>, r: usize) -> Vec<Program> {
    let key_len = programs.first().map_or(0, Program::key_len);
    programs.into_iter().chain((0..r).map(|_| Program::Guess { key_len })).collect()
}

#[derive(Clone, Debug)]
pub struct LearnResult {
    pub key_index: usize,
    pub queries: usize,
    pub fresh: Program,
    pub source_after: Program,
    /// Sum of per-query disturbance bounds.
    pub damage_bound: f64,
    /// Fidelity of the source after querying with the source before.
    pub source_fidelity: f64,
}

/// Learns which member of a small point-function family `source` computes
/// by querying it on all but one key, then vends a fresh program for that
/// key.
pub fn learnability_pirate(family: &[BitString], source: &Program, rng: &mut Rng) -> Result<LearnResult, CopyError> {
    if family.is_empty() || family.len() > 64 {
        return Err(CopyError::TooLarge(format!("family size {} outside 1..=64", family.len())));
    }
    if (1..family.len()).any(|i| family[..i].contains(&family[i])) {
        return Err(CopyError::AmbiguousFamily);
    }
    let mut current = source.clone();
    let mut damage = 0.0;
    let mut queries = 0;
    let mut found = family.len() - 1;
    for (i, x) in family[..family.len() - 1].iter().enumerate() {
        let out = current.eval(x, rng)?;
        queries += 1;
        damage += out.damage_bound;
        current = out.post;
        if out.value {
            found = i;
            break;
        }
    }
    let key = &family[found];
    let fresh = match source {
        Program::A(p) => Program::A(scheme_a_vend(key, &p.cfg, p.copies.len())?),
        Program::B(p) => Program::B(scheme_b_vend(key, p.registers.len(), rng)?),
        Program::Guess { .. } => return Err(CopyError::Config("cannot learn from a guessing program".into())),
    };
    let source_fidelity = current.fidelity(source).unwrap_or(0.0);
    Ok(LearnResult { key_index: found, queries, fresh, source_after: current, damage_bound: damage, source_fidelity })
}

#[derive(Clone, Debug, Serialize)]
pub struct PgmReport {
    pub keys: usize,
    pub k: usize,
    /// Probability that the pretty-good measurement names the right key,
    /// with keys equally likely.
    pub success: f64,
    /// Largest fidelity between the k-fold programs of two distinct keys.
    pub max_pairwise_fidelity: f64,
    #[serde(skip)]
    pub gram: Option<DMatrix<Complex64>>,
}

/// `P[guess j | state i]` for the PGM on equiprobable pure states with Gram
/// matrix `g`, which is `|(√G)_ji|²`. Rows are indexed by the true state.
pub fn pgm_confusion_from_gram(g: &DMatrix<Complex64>) -> DMatrix<f64> {
    let eig = g.clone().symmetric_eigen();
    let roots = eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let sqrt = &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint();
    DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| sqrt[(j, i)].norm_sqr())
}

/// PGM success for equiprobable pure states with Gram matrix `g`:
/// `(1/K) Σ_i |(√G)_ii|²`.
pub fn pgm_success_from_gram(g: &DMatrix<Complex64>) -> f64 {
    let c = pgm_confusion_from_gram(g);
    (c.diagonal().sum() / g.nrows() as f64).min(1.0)
}

fn check_keyspace(keys: &[BitString]) -> Result<(), CopyError> {
    if keys.is_empty() || keys.len() > MAX_KEYSPACE {
        return Err(CopyError::TooLarge(format!("keyspace size {} outside 1..={MAX_KEYSPACE}", keys.len())));
    }
    if (1..keys.len()).any(|i| keys[..i].contains(&keys[i])) {
        return Err(CopyError::AmbiguousFamily);
    }
    Ok(())
}

/// Unbounded pirate against scheme A holding `k` copies: the Gram matrix of
/// `|ψ_s⟩^{⊗k}` is `⟨ψ_i|ψ_j⟩^k`.
pub fn pgm_pirate_a(keys: &[BitString], cfg: &SchemeAConfig, k: usize) -> Result<PgmReport, CopyError> {
    check_keyspace(keys)?;
    let states: Vec<DenseState> = keys.iter().map(|s| scheme_a_state(s, cfg)).collect::<Result<_, _>>()?;
    let n = keys.len();
    let gram = DMatrix::from_fn(n, n, |i, j| states[i].inner(&states[j]).expect("same width").powu(k as u32));
    let mut max_f: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            max_f = max_f.max(gram[(i, j)].norm_sqr());
        }
    }
    Ok(PgmReport { keys: n, k, success: pgm_success_from_gram(&gram), max_pairwise_fidelity: max_f, gram: Some(gram) })
}

fn gf2_rank(vectors: impl Iterator<Item = u64>) -> u32 {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

/// Unbounded pirate against scheme B holding `k` coset registers.
///
/// Averaged over `σ`, one register is `ρ_s = (I + R(τ_s))/N!` with `R` the
/// right-regular action. All `τ_s` lie in the abelian group generated by the
/// `n + 1` disjoint transpositions, so every `ρ_s^{⊗k}` is diagonal in one
/// basis of characters `(u_1, …, u_k)` of `Z_2^{n+1}`, uniform on those with
/// `u_i · (s, 1) = 0` for all `i`. The PGM then succeeds with probability
/// `|∪_s C_s| / (K·2^{nk})`, evaluated by inclusion–exclusion:
/// `(1/K) Σ_{∅≠T} (−1)^{|T|+1} 2^{(1 − rank T)k}`.
pub fn pgm_pirate_b(keys: &[BitString], k: usize) -> Result<PgmReport, CopyError> {
    check_keyspace(keys)?;
    let n = keys[0].len();
    if n > 63 || keys.iter().any(|s| s.len() != n) {
        return Err(CopyError::Config("keys must share a length below 64 bits".into()));
    }
    let vecs: Vec<u64> = keys.iter().map(|s| s.to_u64() | 1 << n).collect();
    let count = keys.len();
    let mut total = 0.0;
    for subset in 1u32..1 << count {
        let rank = gf2_rank((0..count).filter(|i| subset >> i & 1 == 1).map(|i| vecs[i]));
        let sign = if subset.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * 2f64.powi((1 - rank as i32) * k as i32);
    }
    let max_f = if count > 1 { 0.25f64.powi(k as i32) } else { 0.0 };
    Ok(PgmReport { keys: count, k, success: total / count as f64, max_pairwise_fidelity: max_f, gram: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copyprotect::{involution_encode, scheme_b_eval};

    fn keys(n: usize, count: u64) -> Vec<BitString> {
        (0..count).map(|v| BitString::from_u64(v, n)).collect()
    }

    #[test]
    fn orthonormal_gram_is_perfect() {
        let g = DMatrix::<Complex64>::identity(4, 4);
        assert!((pgm_success_from_gram(&g) - 1.0).abs() < 1e-12);
        let same = DMatrix::from_element(3, 3, Complex64::new(1.0, 0.0));
        assert!((pgm_success_from_gram(&same) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_state_pgm_matches_closed_form() {
        // For two equiprobable pure states with overlap c, the PGM succeeds
        // with (1 + √(1 − c²))/2.
        let c = 0.6;
        let g = DMatrix::from_row_slice(2, 2, &[1.0, c, c, 1.0].map(|v| Complex64::new(v, 0.0)));
        let want = (1.0 + (1.0f64 - c * c).sqrt()) / 2.0;
        assert!((pgm_success_from_gram(&g) - want).abs() < 1e-12);
        let c = pgm_confusion_from_gram(&g);
        for i in 0..2 {
            assert!((c.row(i).sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scheme_a_pgm_and_tensor_fidelity() {
        let cfg = SchemeAConfig::new(3);
        let ks = keys(3, 8);
        let one = pgm_pirate_a(&ks, &cfg, 1).unwrap();
        let three = pgm_pirate_a(&ks, &cfg, 3).unwrap();
        // Tensor-power fidelity equals the single-copy fidelity cubed.
        let a = scheme_a_state(&ks[0], &cfg).unwrap();
        let b = scheme_a_state(&ks[1], &cfg).unwrap();
        let a3 = a.tensor(&a).tensor(&a);
        let b3 = b.tensor(&b).tensor(&b);
        let f1 = a.inner(&b).unwrap().norm_sqr();
        assert!((a3.inner(&b3).unwrap().norm_sqr() - f1.powi(3)).abs() < 1e-12);
        assert!((three.gram.as_ref().unwrap()[(0, 1)].norm_sqr() - f1.powi(3)).abs() < 1e-12);
        assert!(three.success >= one.success - 1e-12);
        assert_eq!(pgm_pirate_a(&ks[..1], &cfg, 2).unwrap().success, 1.0);
    }

    /// Builds `(I + R(τ_s))/N!` on `S_4` and the two-register product, then
    /// runs the PGM numerically.
    #[test]
    fn scheme_b_closed_form_matches_dense_pgm() {
        let n = 1;
        let perms: Vec<Perm> = {
            let mut all = Vec::new();
            let mut p: Vec<u8> = (0..4).collect();
            permutohedron(&mut p, 0, &mut all);
            all
        };
        let index = |p: &Perm| perms.iter().position(|q| q == p).unwrap();
        let rho = |s: &BitString| {
            let tau = involution_encode(s);
            let mut m = DMatrix::<Complex64>::identity(24, 24);
            for p in &perms {
                m[(index(&p.compose(&tau)), index(p))] += Complex64::new(1.0, 0.0);
            }
            m / Complex64::new(24.0, 0.0)
        };
        let ks = keys(n, 2);
        for k in 1..=2 {
            let states: Vec<DMatrix<Complex64>> = ks
                .iter()
                .map(|s| {
                    let r = rho(s);
                    if k == 1 {
                        r
                    } else {
                        r.kronecker(&r)
                    }
                })
                .collect();
            let avg = (&states[0] + &states[1]) / Complex64::new(2.0, 0.0);
            let eig = avg.clone().symmetric_eigen();
            let inv_sqrt = eig.eigenvalues.map(|v| Complex64::new(if v > 1e-12 { 1.0 / v.sqrt() } else { 0.0 }, 0.0));
            let s_inv = &eig.eigenvectors * DMatrix::from_diagonal(&inv_sqrt) * eig.eigenvectors.adjoint();
            let success: f64 = states
                .iter()
                .map(|r| {
                    let m = &s_inv * (r / Complex64::new(2.0, 0.0)) * &s_inv;
                    (m * r).trace().re / 2.0
                })
                .sum();
            let closed = pgm_pirate_b(&ks, k).unwrap().success;
            assert!((success - closed).abs() < 1e-9, "k={k}: {success} vs {closed}");
        }
    }

    fn permutohedron(p: &mut Vec<u8>, at: usize, out: &mut Vec<Perm>) {
        if at == p.len() {
            out.push(Perm(p.clone()));
            return;
        }
        for i in at..p.len() {
            p.swap(at, i);
            permutohedron(p, at + 1, out);
            p.swap(at, i);
        }
    }

    #[test]
    fn scheme_b_pgm_grows_with_k() {
        let ks = keys(3, 8);
        let mut last = 0.0;
        for k in 0..12 {
            let r = pgm_pirate_b(&ks, k).unwrap();
            assert!(r.success >= last - 1e-12);
            last = r.success;
        }
        assert!((pgm_pirate_b(&ks, 0).unwrap().success - 1.0 / 8.0).abs() < 1e-12);
        assert_eq!(pgm_pirate_b(&ks[..1], 3).unwrap().success, 1.0);
        assert!(last > 0.99);
    }

    #[test]
    fn split_halves_keep_working() {
        let mut rng = Rng::new(7);
        let key = BitString::from_u64(2, 3);
        let prog = Program::B(scheme_b_vend(&key, 8, &mut rng).unwrap());
        let (a, b) = split_program(&prog).unwrap();
        assert_eq!((a.parts(), b.parts()), (4, 4));
        assert!(a.eval(&key, &mut rng).unwrap().value && b.eval(&key, &mut rng).unwrap().value);
        let odd = Program::B(scheme_b_vend(&key, 3, &mut rng).unwrap());
        assert_eq!(split_program(&odd), Err(CopyError::OddSplit(3)));
        let trials = 20_000;
        let wrong = BitString::from_u64(5, 3);
        let ones = (0..trials)
            .filter(|_| {
                let Program::B(p) = &a else { unreachable!() };
                let fresh = ProgramB { registers: p.registers.clone(), ..p.clone() };
                scheme_b_eval(&fresh, &wrong, &mut rng).unwrap().value
            })
            .count();
        let p = 1.0 / 16.0;
        assert!((ones as f64 / trials as f64 - p).abs() < 5.0 * (p * (1.0 - p) / trials as f64).sqrt());
    }

    #[test]
    fn learning_pirate_recovers_every_key() {
        let cfg = SchemeAConfig::new(6);
        let family = keys(3, 8);
        let mut rng = Rng::new(8);
        for (i, s) in family.iter().enumerate() {
            let source = Program::A(scheme_a_vend(s, &cfg, 4).unwrap());
            let r = learnability_pirate(&family, &source, &mut rng).unwrap();
            assert_eq!(r.key_index, i);
            assert!(r.queries <= 7);
            assert_eq!(r.fresh, source);
            assert!(1.0 - r.source_fidelity <= r.damage_bound.powi(2) + 1e-9 || r.source_fidelity >= 0.9);
        }
        let single =
            learnability_pirate(&family[..1], &Program::A(scheme_a_vend(&family[0], &cfg, 1).unwrap()), &mut rng);
        assert_eq!(single.unwrap().queries, 0);
        let dup = vec![family[0].clone(), family[0].clone()];
        assert!(matches!(
            learnability_pirate(&dup, &Program::Guess { key_len: 3 }, &mut rng),
            Err(CopyError::AmbiguousFamily)
        ));
    }

    #[test]
    fn mix_pirate_places_two_genuine_copies() {
        let cfg = SchemeAConfig::new(5);
        let key = BitString::from_u64(1, 3);
        let prog = Program::A(scheme_a_vend(&key, &cfg, 1).unwrap());
        let mut rng = Rng::new(9);
        let out = trivial_mix_pirate(prog.clone(), prog.clone(), &mut rng);
        assert_eq!(out.len(), 3);
        assert_eq!(out.iter().filter(|p| **p == prog).count(), 2);
    }
}
