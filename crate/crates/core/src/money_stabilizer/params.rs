use serde::{Deserialize, Serialize};

use super::StabMoneyError;

pub const MAX_N: usize = 32;
pub const MAX_CELLS: usize = 10_000_000;

/// Parameters `(n, ℓ, m, ε)` of the random-stabilizer scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeParams {
    /// Qubits per state.
    pub n: usize,
    /// Number of states per note (odd, so majorities are strict).
    pub l: usize,
    /// Measurements per state.
    pub m: usize,
    /// Probability that a row is conditioned on stabilizing its state.
    pub eps: f64,
}

/// Which of the ordering constraints `n/ε ≪ m ≪ 1/ε² ≪ ℓ` hold, with `a ≪ b`
/// read as `b ≥ slack · a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Regime {
    pub slack: f64,
    pub m_above_n_over_eps: bool,
    pub m_below_inv_eps_sq: bool,
    pub l_above_inv_eps_sq: bool,
}

impl Regime {
    pub fn valid(&self) -> bool {
        self.m_above_n_over_eps && self.m_below_inv_eps_sq && self.l_above_inv_eps_sq
    }
}

pub const DEFAULT_SLACK: f64 = 8.0;

impl SchemeParams {
    pub fn new(n: usize, l: usize, m: usize, eps: f64) -> Result<Self, StabMoneyError> {
        let p = Self { n, l, m, eps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), StabMoneyError> {
        if !(1..=MAX_N).contains(&self.n) {
            return Err(StabMoneyError::Params(format!("n = {} outside 1..={MAX_N}", self.n)));
        }
        if self.l == 0 || self.l.is_multiple_of(2) {
            return Err(StabMoneyError::Params(format!("l = {} must be odd", self.l)));
        }
        if self.m == 0 {
            return Err(StabMoneyError::Params("m must be positive".into()));
        }
        if self.l.saturating_mul(self.m) > MAX_CELLS {
            return Err(StabMoneyError::Params(format!("l·m = {} exceeds {MAX_CELLS}", self.l * self.m)));
        }
        if !(0.0..=1.0).contains(&self.eps) {
            return Err(StabMoneyError::Params(format!("eps = {} outside [0, 1]", self.eps)));
        }
        Ok(())
    }

    pub fn regime(&self, slack: f64) -> Regime {
        let (n, m, l, e) = (self.n as f64, self.m as f64, self.l as f64, self.eps);
        let inv_eps_sq = if e > 0.0 { 1.0 / (e * e) } else { f64::INFINITY };
        let n_over_eps = if e > 0.0 { n / e } else { f64::INFINITY };
        Regime {
            slack,
            m_above_n_over_eps: m >= slack * n_over_eps,
            m_below_inv_eps_sq: inv_eps_sq >= slack * m,
            l_above_inv_eps_sq: l >= slack * inv_eps_sq,
        }
    }

    /// Bits in the measurement table, `(2n+1)ℓm`.
    pub fn table_bits(&self) -> usize {
        (2 * self.n + 1) * self.l * self.m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SchemeParams::new(8, 1001, 50, 0.2).is_ok());
        assert!(SchemeParams::new(8, 1000, 50, 0.2).is_err());
        assert!(SchemeParams::new(33, 1, 1, 0.2).is_err());
        assert!(SchemeParams::new(8, 1, 1, 1.5).is_err());
        assert!(SchemeParams::new(8, 100_001, 101, 0.2).is_err());
    }

    #[test]
    fn regime_flags() {
        // n/ε = 400, 1/ε² = 10⁴.
        let p = SchemeParams::new(4, 80_001, 1, 0.01).unwrap();
        let r = SchemeParams { m: 1500, ..p }.regime(2.0);
        assert!(r.m_above_n_over_eps && r.m_below_inv_eps_sq && r.l_above_inv_eps_sq && r.valid());
        let r = SchemeParams { m: 1500, ..p }.regime(DEFAULT_SLACK);
        assert!(!r.m_above_n_over_eps && !r.m_below_inv_eps_sq && r.l_above_inv_eps_sq);
    }
}
