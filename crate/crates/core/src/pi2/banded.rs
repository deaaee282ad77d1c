//! Banded Gaussian elimination with partial pivoting.
//!
//! Storage follows the LAPACK band layout: entry `(i, j)` lives at row
//! `kl + ku + i - j` of column `j`, with `kl` extra rows on top for the
//! fill-in produced by row interchanges.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    // column-major: data[col * ldab + row_in_band]
    data: Vec<f64>,
    ldab: usize,
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; ldab * n],
            ldab,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ldab + (self.kl + self.ku + i - j)
    }

    /// Set `A[i][j]`; panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(j as i64 - (i as i64) <= self.ku as i64);
        debug_assert!(i as i64 - (j as i64) <= self.kl as i64);
        let at = self.idx(i, j);
        self.data[at] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i + self.ku || i > j + self.kl {
            return 0.0;
        }
        self.data[self.idx(i, j)]
    }

    /// Solve `A x = b` by in-place banded LU with partial pivoting.
    /// Consumes the matrix (the factorization overwrites the band).
    pub fn lu_solve(mut self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::Config("rhs length mismatch".into()));
        }
        let n = self.n;
        let kl = self.kl;
        // effective upper bandwidth after pivoting (fill-in from row swaps)
        let kv = kl + self.ku;
        let mut x = b.to_vec();

        for j in 0..n {
            // pivot among rows j ..= min(n-1, j+kl) of column j
            let last = (j + kl).min(n - 1);
            let mut piv_row = j;
            let mut piv_val = self.data[self.idx(j, j)].abs();
            for i in j + 1..=last {
                let v = self.data[self.idx(i, j)].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = i;
                }
            }
            if piv_val == 0.0 {
                return Err(Error::Convergence(format!(
                    "singular banded matrix at column {j}"
                )));
            }
            if piv_row != j {
                // swap rows j and piv_row over columns j ..= min(n-1, j+kv)
                for c in j..=(j + kv).min(n - 1) {
                    let a = self.idx(j, c);
                    let b2 = self.idx(piv_row, c);
                    self.data.swap(a, b2);
                }
                x.swap(j, piv_row);
            }
            let diag = self.data[self.idx(j, j)];
            for i in j + 1..=last {
                let m = self.data[self.idx(i, j)] / diag;
                if m != 0.0 {
                    for c in j + 1..=(j + kv).min(n - 1) {
                        let v = self.data[self.idx(j, c)];
                        if v != 0.0 {
                            let at = self.idx(i, c);
                            self.data[at] -= m * v;
                        }
                    }
                    x[i] -= m * x[j];
                }
            }
        }
        // back substitution over the widened band
        for j in (0..n).rev() {
            let mut acc = x[j];
            for c in j + 1..=(j + kv).min(n - 1) {
                acc -= self.data[self.idx(j, c)] * x[c];
            }
            x[j] = acc / self.data[self.idx(j, j)];
        }
        Ok(x)
    }
}
