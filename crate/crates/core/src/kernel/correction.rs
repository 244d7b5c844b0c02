//! Finite dense correction blocks anchored at matrix position (0,0).

use num_complex::Complex;

use crate::scalar::{czero, Cpx, Real};
use crate::tol;

/// Dense complex block sitting in the top-left corner of the semi-infinite
/// matrix. Canonical form: the last row and the last column each carry at
/// least one entry with modulus above the trim threshold
/// (`tol::CANONICAL_TRIM` times the block max-modulus), or the block is
/// empty.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionBlock<F: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cpx<F>>,
}

impl<F: Real> CorrectionBlock<F> {
    pub fn empty() -> Self {
        Self { rows: 0, cols: 0, data: Vec::new() }
    }

    /// Build from an entry function and trim to canonical form.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cpx<F>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        let mut block = Self { rows, cols, data };
        block.canonicalize();
        block
    }

    /// Build from a row-major entry list (test convenience).
    pub fn from_rows(rows: Vec<Vec<Cpx<F>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// Entry at (i,j); zero outside the stored block.
    pub fn get(&self, i: usize, j: usize) -> Cpx<F> {
        if i < self.rows && j < self.cols {
            self.data[i * self.cols + j]
        } else {
            czero()
        }
    }

    pub fn max_abs(&self) -> F {
        self.data.iter().fold(F::zero(), |m, c| m.max(c.norm()))
    }

    /// Exact sum of the diagonal entries.
    pub fn diag_sum(&self) -> Cpx<F> {
        let d = self.rows.min(self.cols);
        (0..d).map(|i| self.get(i, i)).fold(czero(), |a, b| a + b)
    }

    pub fn add(&self, other: &Self) -> Self {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        Self::from_fn(rows, cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn scale(&self, c: Cpx<F>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Shave trailing rows/columns whose entries all sit at or below the trim
    /// threshold relative to the block max-modulus.
    fn canonicalize(&mut self) {
        let max = self.max_abs();
        if max == F::zero() {
            *self = Self::empty();
            return;
        }
        let thr = max * F::real(tol::CANONICAL_TRIM);
        let row_dead = |block: &Self, i: usize| (0..block.cols).all(|j| block.get(i, j).norm() <= thr);
        let col_dead = |block: &Self, j: usize| (0..block.rows).all(|i| block.get(i, j).norm() <= thr);

        let mut rows = self.rows;
        let mut cols = self.cols;
        loop {
            let trimmed_row = rows > 0 && {
                let dead = (0..cols).all(|j| self.get(rows - 1, j).norm() <= thr);
                if dead {
                    rows -= 1;
                }
                dead
            };
            let trimmed_col = cols > 0 && {
                let dead = (0..rows).all(|i| self.get(i, cols - 1).norm() <= thr);
                if dead {
                    cols -= 1;
                }
                dead
            };
            if !trimmed_row && !trimmed_col {
                break;
            }
        }
        if rows == 0 || cols == 0 {
            *self = Self::empty();
            return;
        }
        if rows != self.rows || cols != self.cols {
            let mut data = Vec::with_capacity(rows * cols);
            for i in 0..rows {
                for j in 0..cols {
                    data.push(self.get(i, j));
                }
            }
            *self = Self { rows, cols, data };
        }
        debug_assert!(!row_dead(self, self.rows - 1));
        debug_assert!(!col_dead(self, self.cols - 1));
    }

    /// Max modulus of `B - B*` over the square hull of the block.
    pub fn hermitian_deviation(&self) -> F {
        let d = self.rows.max(self.cols);
        let mut dev = F::zero();
        for i in 0..d {
            for j in 0..d {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// The block padded to a square `d x d` dense matrix, `d = max(rows, cols)`.
    pub fn square_dense(&self) -> crate::linalg::DenseMat<F> {
        let d = self.rows.max(self.cols);
        crate::linalg::DenseMat::from_fn(d, d, |i, j| self.get(i, j))
    }
}

/// Rank-one convenience: `c * e_i (x) e_j^*` as a correction block.
pub fn rank_one<F: Real>(i: usize, j: usize, c: Cpx<F>) -> CorrectionBlock<F> {
    CorrectionBlock::from_fn(i + 1, j + 1, |r, s| {
        if r == i && s == j {
            c
        } else {
            Complex::new(F::zero(), F::zero())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;

    #[test]
    fn trims_zero_edges() {
        let b = CorrectionBlock::<f64>::from_fn(3, 3, |i, j| {
            if i == 0 && j == 0 {
                cpx(2.0, 0.0)
            } else {
                cpx(0.0, 0.0)
            }
        });
        assert_eq!((b.rows(), b.cols()), (1, 1));
        assert_eq!(b.get(0, 0), cpx(2.0, 0.0));
        assert_eq!(b.get(5, 7), cpx(0.0, 0.0));
    }

    #[test]
    fn all_zero_becomes_empty() {
        let b = CorrectionBlock::<f64>::from_fn(4, 2, |_, _| cpx(0.0, 0.0));
        assert!(b.is_empty());
    }

    #[test]
    fn trims_relative_to_max_modulus() {
        // Edge entries at 1e-16 of the max are jitter and go away.
        let b = CorrectionBlock::<f64>::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 {
                cpx(1.0, 0.0)
            } else {
                cpx(1e-16, 0.0)
            }
        });
        assert_eq!((b.rows(), b.cols()), (1, 1));
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let b = CorrectionBlock::<f64>::from_rows(vec![vec![cpx(1.0, 2.0), cpx(0.5, 0.0)]]);
        let a = b.adjoint();
        assert_eq!((a.rows(), a.cols()), (2, 1));
        assert_eq!(a.get(0, 0), cpx(1.0, -2.0));
        assert_eq!(a.get(1, 0), cpx(0.5, 0.0));
    }
}
