//! Laurent-polynomial symbols: the Toeplitz part of a quasi-Toeplitz
//! operator. The coefficient at exponent `k` sits on matrix diagonal
//! `i - j = k`, so the unilateral shift is the monomial `z` and its adjoint
//! is `z^{-1}`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::scalar::{czero, Cpx, Real};

/// Finitely supported Laurent polynomial with complex coefficients.
///
/// Canonical form stores no exact-zero coefficients, so the zero symbol has
/// empty support and support endpoints are always nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSymbol<F: Real> {
    coeffs: BTreeMap<i64, Cpx<F>>,
}

impl<F: Real> LaurentSymbol<F> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, Complex::new(F::one(), F::zero()))
    }

    pub fn monomial(k: i64, c: Cpx<F>) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != czero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, Cpx<F>)>) -> Self {
        let mut s = Self::zero();
        for (k, c) in pairs {
            s.accumulate(k, c);
        }
        s
    }

    fn accumulate(&mut self, k: i64, c: Cpx<F>) {
        let entry = self.coeffs.entry(k).or_insert_with(czero);
        *entry += c;
        if *entry == czero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent in the support, if any.
    pub fn kmin(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent in the support, if any.
    pub fn kmax(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Sum of |kmin| and |kmax| (zero for the zero symbol); the bandwidth
    /// contribution to safe product windows.
    pub fn band_extent(&self) -> usize {
        match (self.kmin(), self.kmax()) {
            (Some(lo), Some(hi)) => lo.unsigned_abs() as usize + hi.unsigned_abs() as usize,
            _ => 0,
        }
    }

    pub fn coeff(&self, k: i64) -> Cpx<F> {
        self.coeffs.get(&k).copied().unwrap_or_else(czero)
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, Cpx<F>)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.support() {
            out.accumulate(k, c);
        }
        out
    }

    pub fn scale(&self, c: Cpx<F>) -> Self {
        Self::from_pairs(self.support().map(|(k, v)| (k, v * c)))
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex::new(-F::one(), F::zero()))
    }

    /// Symbol of the adjoint operator: `k -> conj(c_{-k})`.
    pub fn adjoint(&self) -> Self {
        Self::from_pairs(self.support().map(|(k, c)| (-k, c.conj())))
    }

    /// Laurent-polynomial product (convolution of coefficients).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in self.support() {
            for (kb, cb) in other.support() {
                out.accumulate(ka + kb, ca * cb);
            }
        }
        out
    }

    /// Evaluate `a(z) = sum c_k z^k` at a point of the unit circle.
    pub fn eval(&self, z: Cpx<F>) -> Cpx<F> {
        self.support().map(|(k, c)| c * z.powi(k as i32)).fold(czero(), |a, b| a + b)
    }

    /// The single `(k, c)` pair when the symbol is a monomial.
    pub fn as_monomial(&self) -> Option<(i64, Cpx<F>)> {
        if self.coeffs.len() == 1 {
            self.support().next()
        } else {
            None
        }
    }

    /// Max coefficient modulus.
    pub fn max_abs(&self) -> F {
        self.support().fold(F::zero(), |m, (_, c)| m.max(c.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;

    #[test]
    fn canonical_form_drops_cancelled_coefficients() {
        let a = LaurentSymbol::<f64>::monomial(1, cpx(1.0, 0.0));
        let b = LaurentSymbol::monomial(1, cpx(-1.0, 0.0));
        assert!(a.add(&b).is_zero());
        assert_eq!(a.add(&b).kmin(), None);
    }

    #[test]
    fn product_convolves_exponents() {
        // z * z^{-1} = 1
        let s = LaurentSymbol::<f64>::monomial(1, cpx(1.0, 0.0));
        let sa = s.adjoint();
        assert_eq!(s.mul(&sa), LaurentSymbol::one());
        assert_eq!(s.mul(&s).as_monomial().unwrap().0, 2);
    }

    #[test]
    fn adjoint_conjugates_and_flips() {
        let s = LaurentSymbol::<f64>::monomial(2, cpx(0.0, 1.0));
        let a = s.adjoint();
        assert_eq!(a.coeff(-2), cpx(0.0, -1.0));
        assert_eq!(a.adjoint(), s);
    }

    #[test]
    fn eval_on_circle() {
        let s = LaurentSymbol::<f64>::from_pairs([(1, cpx(1.0, 0.0)), (-1, cpx(1.0, 0.0))]);
        // z + 1/z at z = i is 0.
        let v = s.eval(cpx(0.0, 1.0));
        assert!(v.norm() < 1e-15);
    }
}
