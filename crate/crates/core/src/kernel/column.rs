//! Lazily extended column vectors: finitely supported elements of l2(N)
//! stored as an offset plus a dense run of entries.

use crate::scalar::{czero, Cpx, Real};

/// Finitely supported column; entries outside `[lo, hi]` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Column<F: Real> {
    offset: usize,
    data: Vec<Cpx<F>>,
}

impl<F: Real> Column<F> {
    pub fn zero() -> Self {
        Self { offset: 0, data: Vec::new() }
    }

    /// Standard basis vector `e_j`.
    pub fn basis(j: usize) -> Self {
        Self { offset: j, data: vec![Cpx::new(F::one(), F::zero())] }
    }

    pub fn from_dense(data: Vec<Cpx<F>>) -> Self {
        Self::from_offset(0, data)
    }

    pub fn from_offset(offset: usize, data: Vec<Cpx<F>>) -> Self {
        let mut c = Self { offset, data };
        c.trim_exact_zeros();
        c
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// First supported index.
    pub fn lo(&self) -> usize {
        self.offset
    }

    /// Last supported index (call only when non-empty).
    pub fn hi(&self) -> usize {
        self.offset + self.data.len() - 1
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn entry(&self, i: usize) -> Cpx<F> {
        if i >= self.offset && i < self.offset + self.data.len() {
            self.data[i - self.offset]
        } else {
            czero()
        }
    }

    pub fn norm_sqr(&self) -> F {
        self.data.iter().fold(F::zero(), |a, c| a + c.norm_sqr())
    }

    pub fn norm(&self) -> F {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&mut self, c: Cpx<F>) {
        for v in &mut self.data {
            *v *= c;
        }
    }

    /// `self += other`, extending the stored run as needed.
    pub fn add_assign(&mut self, other: &Column<F>) {
        if other.is_empty() {
            return;
        }
        if self.is_empty() {
            *self = other.clone();
            return;
        }
        let lo = self.offset.min(other.offset);
        let hi = self.hi().max(other.hi());
        if lo < self.offset {
            let mut data = vec![czero(); hi - lo + 1];
            data[self.offset - lo..self.offset - lo + self.data.len()].copy_from_slice(&self.data);
            self.data = data;
            self.offset = lo;
        } else if hi > self.hi() {
            self.data.resize(hi - lo + 1, czero());
        }
        for i in other.lo()..=other.hi() {
            self.data[i - self.offset] += other.entry(i);
        }
    }

    /// Drop entries with modulus at or below `threshold` from both ends.
    pub fn trim_below(&mut self, threshold: F) {
        while let Some(last) = self.data.last() {
            if last.norm() <= threshold {
                self.data.pop();
            } else {
                break;
            }
        }
        let lead = self.data.iter().take_while(|c| c.norm() <= threshold).count();
        if lead > 0 {
            self.data.drain(..lead);
            self.offset += lead;
        }
        if self.data.is_empty() {
            self.offset = 0;
        }
    }

    fn trim_exact_zeros(&mut self) {
        self.trim_below(F::zero());
    }

    /// Densify the first `n` entries.
    pub fn to_dense(&self, n: usize) -> Vec<Cpx<F>> {
        (0..n).map(|i| self.entry(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;

    #[test]
    fn basis_vector_support() {
        let c = Column::<f64>::basis(3);
        assert_eq!(c.lo(), 3);
        assert_eq!(c.entry(3), cpx(1.0, 0.0));
        assert_eq!(c.entry(2), cpx(0.0, 0.0));
        assert!((c.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn add_assign_extends_both_ways() {
        let mut a = Column::<f64>::basis(2);
        a.add_assign(&Column::basis(5));
        a.add_assign(&Column::basis(0));
        assert_eq!(a.lo(), 0);
        assert_eq!(a.hi(), 5);
        assert_eq!(a.entry(2), cpx(1.0, 0.0));
        assert_eq!(a.entry(4), cpx(0.0, 0.0));
    }

    #[test]
    fn trim_drops_small_edges() {
        let mut c = Column::from_dense(vec![cpx(1e-20, 0.0), cpx(1.0, 0.0), cpx(1e-20, 0.0)]);
        c.trim_below(1e-15);
        assert_eq!(c.lo(), 1);
        assert_eq!(c.len(), 1);
    }
}
