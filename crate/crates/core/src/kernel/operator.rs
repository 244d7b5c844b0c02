//! Operators on l2(N): a quasi-Toeplitz leaf or a direct sum of operators.
//!
//! Components of a direct sum live on disjoint copies of l2(N) and are
//! addressed as (component, local row, local column); a flattened global
//! index is deliberately not provided, since interleaving would destroy the
//! quasi-Toeplitz structure of the components.

use num_complex::Complex;

use crate::error::{OpError, Result};
use crate::kernel::leaf::QuasiToeplitzOperator;
use crate::scalar::{czero, Cpx, Real};

/// A direct sum tree with quasi-Toeplitz leaves.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator<F: Real> {
    Leaf(QuasiToeplitzOperator<F>),
    DirectSum(Vec<Operator<F>>),
}

impl<F: Real> Operator<F> {
    pub fn leaf(qt: QuasiToeplitzOperator<F>) -> Self {
        Operator::Leaf(qt)
    }

    pub fn direct_sum(parts: Vec<Operator<F>>) -> Self {
        Operator::DirectSum(parts)
    }

    /// The leaves of the direct-sum tree, in order.
    pub fn leaves(&self) -> Vec<&QuasiToeplitzOperator<F>> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a QuasiToeplitzOperator<F>>) {
        match self {
            Operator::Leaf(qt) => out.push(qt),
            Operator::DirectSum(parts) => {
                for p in parts {
                    p.collect_leaves(out);
                }
            }
        }
    }

    pub fn num_components(&self) -> usize {
        self.leaves().len()
    }

    /// Entry of component `component` at local position (i, j).
    pub fn entry(&self, component: usize, i: usize, j: usize) -> Cpx<F> {
        self.leaves()
            .get(component)
            .map(|qt| qt.entry(i, j))
            .unwrap_or_else(czero)
    }

    /// True when both operators have the same direct-sum tree shape.
    pub fn same_shape(&self, other: &Self) -> bool {
        match (self, other) {
            (Operator::Leaf(_), Operator::Leaf(_)) => true,
            (Operator::DirectSum(a), Operator::DirectSum(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_shape(y))
            }
            _ => false,
        }
    }

    fn zip(
        &self,
        other: &Self,
        f: &mut impl FnMut(&QuasiToeplitzOperator<F>, &QuasiToeplitzOperator<F>) -> QuasiToeplitzOperator<F>,
    ) -> Result<Self> {
        match (self, other) {
            (Operator::Leaf(a), Operator::Leaf(b)) => Ok(Operator::Leaf(f(a, b))),
            (Operator::DirectSum(a), Operator::DirectSum(b)) if a.len() == b.len() => {
                let parts = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| x.zip(y, f))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Operator::DirectSum(parts))
            }
            _ => Err(OpError::ShapeMismatch {
                left: self.num_components(),
                right: other.num_components(),
            }),
        }
    }

    pub fn map_leaves(&self, f: &mut impl FnMut(&QuasiToeplitzOperator<F>) -> QuasiToeplitzOperator<F>) -> Self {
        match self {
            Operator::Leaf(qt) => Operator::Leaf(f(qt)),
            Operator::DirectSum(parts) => {
                Operator::DirectSum(parts.iter().map(|p| p.map_leaves(f)).collect())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, &mut |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, &mut |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, &mut |a, b| a.mul(b))
    }

    pub fn scale(&self, c: Cpx<F>) -> Self {
        self.map_leaves(&mut |qt| qt.scale(c))
    }

    pub fn adjoint(&self) -> Self {
        self.map_leaves(&mut |qt| qt.adjoint())
    }

    /// Identity with the same direct-sum shape.
    pub fn identity_like(&self) -> Self {
        self.map_leaves(&mut |_| QuasiToeplitzOperator::identity())
    }

    /// `self^n` (`n = 0` gives the identity of the same shape).
    pub fn power(&self, n: usize) -> Self {
        let mut acc = self.identity_like();
        for _ in 0..n {
            acc = acc.mul(self).expect("power preserves shape");
        }
        acc
    }

    /// Exact trace, summed over components. Every leaf must have zero
    /// symbol; otherwise the trace is undefined in this representation.
    pub fn trace(&self) -> Result<Cpx<F>> {
        match self {
            Operator::Leaf(qt) => qt.trace(),
            Operator::DirectSum(parts) => {
                let mut acc = czero();
                for p in parts {
                    acc += p.trace()?;
                }
                Ok(acc)
            }
        }
    }

    /// Real part of the trace; errors when the imaginary part exceeds
    /// `imag_tol` (traces of Hermitian assemblies are real by construction).
    pub fn trace_real(&self, imag_tol: F) -> Result<F> {
        let t = self.trace()?;
        if t.im.abs() > imag_tol {
            return Err(OpError::CrossCheckFailed {
                what: "imaginary part of a real trace".to_string(),
                n: 0,
                lhs: t.im.to_f64_lossy(),
                rhs: 0.0,
            });
        }
        Ok(t.re)
    }

    /// Largest entry difference against another operator of the same shape,
    /// over an `n x n` window per component.
    pub fn max_entry_diff(&self, other: &Self, n: usize) -> F {
        let a = self.leaves();
        let b = other.leaves();
        assert_eq!(a.len(), b.len(), "shape mismatch in comparison");
        a.iter()
            .zip(b)
            .fold(F::zero(), |m, (x, y)| m.max(x.max_entry_diff(y, n)))
    }

    /// Deterministic structural fingerprint of the exact representation.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for (idx, qt) in self.leaves().into_iter().enumerate() {
            idx.hash(&mut h);
            for (k, c) in qt.symbol().support() {
                k.hash(&mut h);
                c.re.to_f64_lossy().to_bits().hash(&mut h);
                c.im.to_f64_lossy().to_bits().hash(&mut h);
            }
            let corr = qt.correction();
            (corr.rows(), corr.cols()).hash(&mut h);
            for i in 0..corr.rows() {
                for j in 0..corr.cols() {
                    let c = corr.get(i, j);
                    c.re.to_f64_lossy().to_bits().hash(&mut h);
                    c.im.to_f64_lossy().to_bits().hash(&mut h);
                }
            }
        }
        h.finish()
    }
}

/// `I - A B` assembled in one step; the building block of defects.
pub fn one_minus_prod<F: Real>(a: &Operator<F>, b: &Operator<F>) -> Result<Operator<F>> {
    a.identity_like().sub(&a.mul(b)?)
}

/// Commutator `[A, B] = AB - BA` assembled before any trace is taken.
/// Term-by-term tracing is invalid here: the individual products have
/// nonzero symbol and no trace.
pub fn commutator<F: Real>(a: &Operator<F>, b: &Operator<F>) -> Result<Operator<F>> {
    a.mul(b)?.sub(&b.mul(a)?)
}

impl<F: Real> std::ops::Neg for &Operator<F> {
    type Output = Operator<F>;
    fn neg(self) -> Operator<F> {
        self.scale(Complex::new(-F::one(), F::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;

    fn shift_op() -> Operator<f64> {
        Operator::leaf(QuasiToeplitzOperator::monomial(1, cpx(1.0, 0.0)))
    }

    #[test]
    fn direct_sum_trace_adds_components() {
        let s = shift_op();
        let proj = one_minus_prod(&s, &s.adjoint()).unwrap();
        let both = Operator::direct_sum(vec![proj.clone(), proj]);
        assert_eq!(both.trace().unwrap(), cpx(2.0, 0.0));
    }

    #[test]
    fn shape_mismatch_is_a_structural_error() {
        let s = shift_op();
        let pair = Operator::direct_sum(vec![s.clone(), s.clone()]);
        assert!(matches!(s.add(&pair), Err(OpError::ShapeMismatch { .. })));
    }

    #[test]
    fn power_three_times_adjoint_is_identity_minus_rank_three() {
        let s = shift_op();
        let p3 = s.power(3);
        let prod = p3.mul(&p3.adjoint()).unwrap();
        let proj = prod.identity_like().sub(&prod).unwrap();
        assert_eq!(proj.trace().unwrap(), cpx(3.0, 0.0));
    }

    #[test]
    fn adjoint_is_involution() {
        let s = shift_op();
        assert_eq!(s.adjoint().adjoint(), s);
    }

    #[test]
    fn fingerprint_distinguishes_operators() {
        let s = shift_op();
        assert_ne!(s.fingerprint(), s.adjoint().fingerprint());
        assert_eq!(s.fingerprint(), shift_op().fingerprint());
    }
}
