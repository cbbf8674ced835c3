use std::fmt;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::mathcore::{BitString, Rng};

/// Permutation of `{0, …, N−1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 256);
        Perm((0..n).map(|i| i as u8).collect())
    }

    pub fn random(n: usize, rng: &mut Rng) -> Self {
        let mut p = Self::identity(n);
        p.0.shuffle(rng);
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.degree()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Lexicographic rank in `0..N!`.
    pub fn rank(&self) -> u64 {
        let n = self.degree();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&v| v < self.0[i]).count() as u64;
            rank = rank * (n - i) as u64 + smaller;
        }
        rank
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

/// `τ_s` on `N = 2n + 2` points: the transposition of the last two points
/// composed with `(2i, 2i+1)` for every set bit `s_i` (0-based). The anchor
/// transposition keeps `τ_s` away from the identity.
pub fn involution_encode(s: &BitString) -> Perm {
    let n = s.len();
    let mut p = Perm::identity(2 * n + 2);
    p.0.swap(2 * n, 2 * n + 1);
    for i in 0..n {
        if s.get(i) {
            p.0.swap(2 * i, 2 * i + 1);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn zero_key_is_the_anchor() {
        assert_eq!(involution_encode(&BitString::zeros(3)).0, vec![0, 1, 2, 3, 4, 5, 7, 6]);
    }

    #[test]
    fn all_keys_are_distinct_involutions() {
        let mut seen = HashSet::new();
        for v in 0..64u64 {
            let t = involution_encode(&BitString::from_u64(v, 6));
            assert!(t.compose(&t).is_identity());
            assert!(!t.is_identity());
            assert!(seen.insert(t));
        }
    }

    #[test]
    fn composition_and_inverse() {
        let mut rng = Rng::new(1);
        let a = Perm::random(7, &mut rng);
        let b = Perm::random(7, &mut rng);
        assert!(a.compose(&a.inverse()).is_identity());
        let x = 3usize;
        assert_eq!(a.compose(&b).0[x], a.0[b.0[x] as usize]);
    }

    #[test]
    fn uniform_over_s4() {
        // Chi-square with 23 degrees of freedom; 99.9th percentile is 49.73.
        let mut rng = Rng::new(2);
        let samples = 100_000;
        let mut counts = [0usize; 24];
        for _ in 0..samples {
            counts[Perm::random(4, &mut rng).rank() as usize] += 1;
        }
        let e = samples as f64 / 24.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        assert!(chi2 < 49.73, "{chi2}");
    }
}
