//! Quasi-Toeplitz leaves: Laurent symbol plus finite correction block.
//!
//! The algebra is closed under addition, multiplication and adjoint. A
//! product is assembled exactly inside a provable safe window; outside the
//! window the product entry equals the product-symbol value, which is what
//! makes every trace in the engines a finite exact sum.

use num_complex::Complex;

use crate::error::{OpError, Result};
use crate::kernel::column::Column;
use crate::kernel::correction::CorrectionBlock;
use crate::kernel::symbol::LaurentSymbol;
use crate::linalg::DenseMat;
use crate::scalar::{czero, Cpx, Real};
use crate::tol;

/// Semi-infinite matrix `entry(i,j) = symbol(i - j) + correction[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiToeplitzOperator<F: Real> {
    symbol: LaurentSymbol<F>,
    correction: CorrectionBlock<F>,
}

/// Inclusive integer interval; empty when `lo > hi`.
#[derive(Debug, Clone, Copy)]
struct Span {
    lo: i64,
    hi: i64,
}

impl Span {
    fn valid(self) -> bool {
        self.lo <= self.hi
    }

    fn intersect(self, other: Span) -> Span {
        Span { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }
}

/// Merge up to two spans into a disjoint union (so every `l` is visited once).
fn disjoint_union(a: Option<Span>, b: Option<Span>) -> [Option<Span>; 2] {
    match (a.filter(|s| s.valid()), b.filter(|s| s.valid())) {
        (None, None) => [None, None],
        (Some(s), None) | (None, Some(s)) => [Some(s), None],
        (Some(s), Some(t)) => {
            let (first, second) = if s.lo <= t.lo { (s, t) } else { (t, s) };
            if second.lo <= first.hi + 1 {
                [Some(Span { lo: first.lo, hi: first.hi.max(second.hi) }), None]
            } else {
                [Some(first), Some(second)]
            }
        }
    }
}

impl<F: Real> QuasiToeplitzOperator<F> {
    pub fn new(symbol: LaurentSymbol<F>, correction: CorrectionBlock<F>) -> Self {
        Self { symbol, correction }
    }

    pub fn zero() -> Self {
        Self::new(LaurentSymbol::zero(), CorrectionBlock::empty())
    }

    pub fn identity() -> Self {
        Self::new(LaurentSymbol::one(), CorrectionBlock::empty())
    }

    /// Toeplitz operator of a monomial symbol `c z^k` (the shift family).
    pub fn monomial(k: i64, c: Cpx<F>) -> Self {
        Self::new(LaurentSymbol::monomial(k, c), CorrectionBlock::empty())
    }

    pub fn symbol(&self) -> &LaurentSymbol<F> {
        &self.symbol
    }

    pub fn correction(&self) -> &CorrectionBlock<F> {
        &self.correction
    }

    /// Matrix entry at row `i`, column `j`.
    pub fn entry(&self, i: usize, j: usize) -> Cpx<F> {
        self.symbol.coeff(i as i64 - j as i64) + self.correction.get(i, j)
    }

    /// Safe window of this operator alone: `max(block dims) + |kmin| + |kmax|`.
    pub fn window_bound(&self) -> usize {
        self.correction.rows().max(self.correction.cols()) + self.symbol.band_extent()
    }

    /// Safe window for the product `self * other`.
    pub fn product_window(&self, other: &Self) -> usize {
        let dims = self
            .correction
            .rows()
            .max(self.correction.cols())
            .max(other.correction.rows())
            .max(other.correction.cols());
        dims + self.symbol.band_extent() + other.symbol.band_extent()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.symbol.add(&other.symbol), self.correction.add(&other.correction))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex::new(-F::one(), F::zero())))
    }

    pub fn scale(&self, c: Cpx<F>) -> Self {
        Self::new(self.symbol.scale(c), self.correction.scale(c))
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.symbol.adjoint(), self.correction.adjoint())
    }

    /// Product in the quasi-Toeplitz algebra. The correction is assembled
    /// entrywise inside the safe window; entries that match the product
    /// symbol to `tol::PRODUCT_TRIM` (at the working scale) are dropped.
    pub fn mul(&self, other: &Self) -> Self {
        let sym = self.symbol.mul(&other.symbol);
        let w = self.product_window(other);
        if w == 0 {
            return Self::new(sym, CorrectionBlock::empty());
        }

        let a_band = (self.symbol.kmin(), self.symbol.kmax());
        let b_band = (other.symbol.kmin(), other.symbol.kmax());
        let (a_rows, a_cols) = (self.correction.rows(), self.correction.cols());
        let (b_rows, b_cols) = (other.correction.rows(), other.correction.cols());

        let mut raw = vec![czero::<F>(); w * w];
        let mut max_abs = F::zero();
        for i in 0..w {
            // Columns where row i of A is nonzero: a band around the
            // diagonal plus the correction block.
            let band_a = match a_band {
                (Some(kmin), Some(kmax)) => {
                    Some(Span { lo: i as i64 - kmax, hi: i as i64 - kmin })
                }
                _ => None,
            };
            let block_a = if i < a_rows && a_cols > 0 {
                Some(Span { lo: 0, hi: a_cols as i64 - 1 })
            } else {
                None
            };
            let rows_a = disjoint_union(band_a, block_a);

            for j in 0..w {
                let band_b = match b_band {
                    (Some(kmin), Some(kmax)) => {
                        Some(Span { lo: j as i64 + kmin, hi: j as i64 + kmax })
                    }
                    _ => None,
                };
                let block_b = if j < b_cols && b_rows > 0 {
                    Some(Span { lo: 0, hi: b_rows as i64 - 1 })
                } else {
                    None
                };
                let cols_b = disjoint_union(band_b, block_b);

                let mut acc = czero::<F>();
                for sa in rows_a.iter().flatten() {
                    for sb in cols_b.iter().flatten() {
                        let span = sa.intersect(*sb).intersect(Span { lo: 0, hi: i64::MAX });
                        if !span.valid() {
                            continue;
                        }
                        for l in span.lo..=span.hi {
                            let l = l as usize;
                            acc += self.entry(i, l) * other.entry(l, j);
                        }
                    }
                }
                let f = acc - sym.coeff(i as i64 - j as i64);
                max_abs = max_abs.max(f.norm());
                raw[i * w + j] = f;
            }
        }

        let thr = F::real(tol::PRODUCT_TRIM) * F::one().max(max_abs);
        let correction = CorrectionBlock::from_fn(w, w, |i, j| {
            let f = raw[i * w + j];
            if f.norm() <= thr {
                czero()
            } else {
                f
            }
        });
        Self::new(sym, correction)
    }

    /// Exact trace of a finitely supported leaf: the diagonal sum of the
    /// correction block. Errors when the symbol is nonzero (the diagonal sum
    /// diverges in that case).
    pub fn trace(&self) -> Result<Cpx<F>> {
        if !self.symbol.is_zero() {
            return Err(OpError::TraceUndefined {
                detail: format!(
                    "leaf symbol has support [{:?}, {:?}]; only zero-symbol operators are trace-class here",
                    self.symbol.kmin().unwrap(),
                    self.symbol.kmax().unwrap()
                ),
            });
        }
        Ok(self.correction.diag_sum())
    }

    /// Apply the operator to a finitely supported column.
    pub fn apply_column(&self, x: &Column<F>) -> Column<F> {
        if x.is_empty() {
            return Column::zero();
        }
        let (xlo, xhi) = (x.lo() as i64, x.hi() as i64);
        let rows = self.correction.rows();
        let cols = self.correction.cols();

        let mut out_lo = i64::MAX;
        let mut out_hi = i64::MIN;
        if let (Some(kmin), Some(kmax)) = (self.symbol.kmin(), self.symbol.kmax()) {
            out_lo = out_lo.min((xlo + kmin).max(0));
            out_hi = out_hi.max(xhi + kmax);
        }
        if rows > 0 && xlo < cols as i64 {
            out_lo = out_lo.min(0);
            out_hi = out_hi.max(rows as i64 - 1);
        }
        if out_lo > out_hi {
            return Column::zero();
        }
        let out_lo = out_lo.max(0) as usize;
        let out_hi = out_hi as usize;
        let mut data = vec![czero::<F>(); out_hi - out_lo + 1];

        for (k, c) in self.symbol.support() {
            for idx in x.lo()..=x.hi() {
                let i = idx as i64 + k;
                if i >= 0 {
                    data[i as usize - out_lo] += c * x.entry(idx);
                }
            }
        }
        if rows > 0 && x.lo() < cols {
            let l_hi = cols.min(x.hi() + 1);
            for i in 0..rows {
                let mut acc = czero::<F>();
                for l in x.lo()..l_hi {
                    acc += self.correction.get(i, l) * x.entry(l);
                }
                data[i - out_lo] += acc;
            }
        }
        Column::from_offset(out_lo, data)
    }

    /// Dense `n x n` truncation.
    pub fn truncate_dense(&self, n: usize) -> DenseMat<F> {
        DenseMat::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// Max modulus of `entry(i,j) - conj(entry(j,i))` over the whole
    /// operator (symbol and correction parts checked separately).
    pub fn hermitian_deviation(&self) -> F {
        let mut dev = self.correction.hermitian_deviation();
        for (k, c) in self.symbol.support() {
            dev = dev.max((c - self.symbol.coeff(-k).conj()).norm());
        }
        dev
    }

    /// Largest entry difference against another leaf over an `n x n` window.
    pub fn max_entry_diff(&self, other: &Self, n: usize) -> F {
        let mut dev = F::zero();
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((self.entry(i, j) - other.entry(i, j)).norm());
            }
        }
        dev
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;

    fn shift() -> QuasiToeplitzOperator<f64> {
        QuasiToeplitzOperator::monomial(1, cpx(1.0, 0.0))
    }

    #[test]
    fn shift_entries() {
        let s = shift();
        assert_eq!(s.entry(1, 0), cpx(1.0, 0.0));
        assert_eq!(s.entry(0, 0), cpx(0.0, 0.0));
        assert_eq!(s.entry(7, 6), cpx(1.0, 0.0));
        assert_eq!(s.entry(6, 7), cpx(0.0, 0.0));
    }

    #[test]
    fn identity_entries() {
        let id = QuasiToeplitzOperator::<f64>::identity();
        for i in 0..5 {
            assert_eq!(id.entry(i, i), cpx(1.0, 0.0));
        }
    }

    #[test]
    fn adjoint_shift_times_shift_is_identity() {
        let s = shift();
        let prod = s.adjoint().mul(&s);
        assert_eq!(prod, QuasiToeplitzOperator::identity());
    }

    #[test]
    fn shift_times_adjoint_is_identity_minus_rank_one() {
        let s = shift();
        let prod = s.mul(&s.adjoint());
        assert_eq!(prod.symbol(), &LaurentSymbol::one());
        assert_eq!((prod.correction().rows(), prod.correction().cols()), (1, 1));
        assert_eq!(prod.correction().get(0, 0), cpx(-1.0, 0.0));
    }

    #[test]
    fn trace_of_rank_one_projection() {
        let s = shift();
        let id = QuasiToeplitzOperator::identity();
        let proj = id.sub(&s.mul(&s.adjoint()));
        assert_eq!(proj.trace().unwrap(), cpx(1.0, 0.0));
    }

    #[test]
    fn trace_of_shift_is_undefined() {
        assert!(matches!(shift().trace(), Err(OpError::TraceUndefined { .. })));
    }

    #[test]
    fn product_entries_match_window_free_region() {
        // Outside the safe window the product must equal its symbol.
        let s = shift();
        let prod = s.mul(&s.adjoint());
        let w = s.product_window(&s.adjoint());
        for i in w..w + 8 {
            assert_eq!(prod.entry(i, i), cpx(1.0, 0.0));
        }
    }

    #[test]
    fn apply_column_shifts_down() {
        let s = shift();
        let col = Column::basis(2);
        let out = s.apply_column(&col);
        assert_eq!(out.entry(3), cpx(1.0, 0.0));
        assert_eq!(out.entry(2), cpx(0.0, 0.0));
    }

    #[test]
    fn apply_column_adjoint_annihilates_e0() {
        let s = shift();
        let out = s.adjoint().apply_column(&Column::basis(0));
        assert!(out.norm() < 1e-15);
    }
}
