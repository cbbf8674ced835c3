use super::bits::{words_for, BitString};
use super::MathError;

/// Dense matrix over GF(2), rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Solution set `particular + span(nullspace)` of a consistent GF(2) system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: BitString,
    pub nullspace: Vec<BitString>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix whose rows are the given bit strings.
    pub fn from_rows(rows: &[BitString], cols: usize) -> Result<Self, MathError> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MathError::DimensionMismatch { expected: cols, found: row.len() });
            }
            m.row_words_mut(r).copy_from_slice(row.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + (c >> 6)] >> (c & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + (c >> 6)];
        let mask = 1u64 << (c & 63);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitString {
        BitString::from_words(self.row_words(r).to_vec(), self.cols)
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.row_words_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = (dst * s, src * s);
        for k in 0..s {
            let v = self.data[b + k];
            self.data[a + k] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitString) -> Result<BitString, MathError> {
        if v.len() != self.cols {
            return Err(MathError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let mut out = BitString::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self.row_words(r).iter().zip(v.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
            out.set(r, parity & 1 == 1);
        }
        Ok(out)
    }

    /// In-place reduction to reduced row echelon form. Returns the pivot
    /// column of each of the leading `rank` rows.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, p);
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.xor_row(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Solves `self · x = b` over GF(2).
    ///
    /// `Ok(None)` means the system is inconsistent.
    pub fn solve(&self, b: &BitString) -> Result<Option<Solution>, MathError> {
        if b.len() != self.rows {
            return Err(MathError::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        // Augment with b as the last column.
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, self.cols, b.get(r));
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut particular = BitString::zeros(self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            particular.set(pc, aug.get(r, self.cols));
        }
        let mut is_pivot = vec![false; self.cols];
        for &pc in &pivots {
            is_pivot[pc] = true;
        }
        let nullspace = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitString::zeros(self.cols);
                v.set(free, true);
                for (r, &pc) in pivots.iter().enumerate() {
                    if aug.get(r, free) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect();
        Ok(Some(Solution { particular, nullspace }))
    }

    /// Basis of `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<BitString> {
        self.solve(&BitString::zeros(self.rows))
            .expect("dimensions agree by construction")
            .expect("homogeneous systems are consistent")
            .nullspace
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        Ok(())
    }
}

/// Rank over GF(2).
pub fn gf2_rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Solves `a · x = b`; `Ok(None)` when inconsistent.
pub fn gf2_solve(a: &BitMatrix, b: &BitString) -> Result<Option<Solution>, MathError> {
    a.solve(b)
}
