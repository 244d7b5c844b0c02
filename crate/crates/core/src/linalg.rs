//! Small dense complex linear algebra: just enough for defect square roots,
//! contraction certificates, and random block generation. Blocks here are
//! tiny (defect ranks and truncation windows), so a cyclic Jacobi sweep is
//! the whole eigensolver.

use crate::error::{OpError, Result};
use crate::scalar::{czero, Cpx, Real};
use num_complex::Complex;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMat<F: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cpx<F>>,
}

impl<F: Real> DenseMat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(F::one(), F::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cpx<F>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
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

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == czero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn max_abs(&self) -> F {
        self.data.iter().fold(F::zero(), |m, c| m.max(c.norm()))
    }

    /// Max modulus of `A - A*` over all entries.
    pub fn hermitian_deviation(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut dev = F::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Force exact Hermitian symmetry by averaging with the adjoint.
    pub fn hermitian_part(&self) -> Self {
        let half = Complex::new(F::real(0.5), F::zero());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }
}

impl<F: Real> std::ops::Index<(usize, usize)> for DenseMat<F> {
    type Output = Cpx<F>;
    fn index(&self, (i, j): (usize, usize)) -> &Cpx<F> {
        &self.data[i * self.cols + j]
    }
}

impl<F: Real> std::ops::IndexMut<(usize, usize)> for DenseMat<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cpx<F> {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in ascending order and the matching
/// unitary of eigenvectors (columns), so `H = V diag(w) V*`.
pub fn hermitian_eigen<F: Real>(h: &DenseMat<F>) -> (Vec<F>, DenseMat<F>) {
    assert_eq!(h.rows(), h.cols(), "eigendecomposition needs a square matrix");
    let n = h.rows();
    let mut a = h.clone();
    let mut v = DenseMat::identity(n);
    if n == 0 {
        return (Vec::new(), v);
    }

    let scale = a.max_abs().max(F::one());
    let stop = scale * F::epsilon() * F::real(n as f64);
    let max_sweeps = 30 + 2 * n;

    for _ in 0..max_sweeps {
        let mut off = F::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= stop * F::real(1e-3) {
                    continue;
                }
                // Split off the phase so a real 2x2 rotation remains.
                let phase = apq / Complex::new(mag, F::zero());
                let x = a[(p, p)].re;
                let y = a[(q, q)].re;
                let tau = (y - x) / (mag + mag);
                // Small root of t^2 - 2 tau t - 1 = 0 in cancellation-free form.
                let denom = tau.abs() + (tau * tau + F::one()).sqrt();
                let t = if tau >= F::zero() { -F::one() / denom } else { F::one() / denom };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;

                // U[p][p] = c, U[p][q] = -s*phase, U[q][p] = s*conj(phase), U[q][q] = c.
                let upq = -phase * Complex::new(s, F::zero());
                let uqp = phase.conj() * Complex::new(s, F::zero());
                let cc = Complex::new(c, F::zero());

                // A <- A U (columns p, q).
                for r in 0..n {
                    let hp = a[(r, p)];
                    let hq = a[(r, q)];
                    a[(r, p)] = hp * cc + hq * uqp;
                    a[(r, q)] = hp * upq + hq * cc;
                }
                // A <- U* A (rows p, q).
                for r in 0..n {
                    let hp = a[(p, r)];
                    let hq = a[(q, r)];
                    a[(p, r)] = cc.conj() * hp + uqp.conj() * hq;
                    a[(q, r)] = upq.conj() * hp + cc.conj() * hq;
                }
                // V <- V U.
                for r in 0..n {
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = vp * cc + vq * uqp;
                    v[(r, q)] = vp * upq + vq * cc;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<F> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).expect("finite eigenvalues"));
    let sorted_vals: Vec<F> = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = DenseMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    (sorted_vals, sorted_vecs)
}

/// Largest singular value via the Hermitian eigenproblem for `A* A`.
pub fn largest_singular_value<F: Real>(a: &DenseMat<F>) -> F {
    if a.is_empty() {
        return F::zero();
    }
    let gram = a.adjoint().mul(a);
    let (vals, _) = hermitian_eigen(&gram);
    vals.last().copied().unwrap_or(F::zero()).max(F::zero()).sqrt()
}

/// Principal PSD square root of a Hermitian matrix. Eigenvalues in
/// `[floor, 0)` are clipped to zero; anything below `floor` is an error.
pub fn psd_sqrt<F: Real>(h: &DenseMat<F>, floor: F) -> Result<DenseMat<F>> {
    let (vals, vecs) = hermitian_eigen(h);
    if let Some(&lo) = vals.first() {
        if lo < floor {
            return Err(OpError::NotPositive { eigenvalue: lo.to_f64_lossy() });
        }
    }
    let n = h.rows();
    let mut scaled = vecs.clone();
    for j in 0..n {
        let s = vals[j].max(F::zero()).sqrt();
        for i in 0..n {
            scaled[(i, j)] = scaled[(i, j)] * Complex::new(s, F::zero());
        }
    }
    // V sqrt(w) V*, then symmetrize to remove rounding skew.
    Ok(scaled.mul(&vecs.adjoint()).hermitian_part())
}

/// Orthonormalize the columns of a square matrix (modified Gram-Schmidt,
/// run twice). Returns `None` when a column collapses below tolerance.
pub fn gram_schmidt_unitary<F: Real>(g: &DenseMat<F>) -> Option<DenseMat<F>> {
    assert_eq!(g.rows(), g.cols());
    let n = g.rows();
    let mut q = g.clone();
    for _pass in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let mut dot: Cpx<F> = czero();
                for i in 0..n {
                    dot += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..n {
                    let qk = q[(i, k)];
                    q[(i, j)] -= dot * qk;
                }
            }
            let mut norm2 = F::zero();
            for i in 0..n {
                norm2 += q[(i, j)].norm_sqr();
            }
            let norm = norm2.sqrt();
            if norm < F::real(1e-8) {
                return None;
            }
            let inv = Complex::new(F::one() / norm, F::zero());
            for i in 0..n {
                q[(i, j)] = q[(i, j)] * inv;
            }
        }
    }
    Some(q)
}

/// Project a square matrix to a contraction by clipping its singular values
/// to `[0, 1]` (clipping, not rescaling, so defect ranks vary).
pub fn clip_singular_values<F: Real>(a: &DenseMat<F>) -> DenseMat<F> {
    if a.is_empty() {
        return a.clone();
    }
    let gram = a.adjoint().mul(a);
    let (vals, vecs) = hermitian_eigen(&gram);
    let n = a.rows();
    // A V f(S) V* with f = min(s,1)/s maps A to U min(S,1) V*.
    let mut factors = DenseMat::zeros(n, n);
    for j in 0..n {
        let s = vals[j].max(F::zero()).sqrt();
        let f = if s > F::one() { F::one() / s } else { F::one() };
        factors[(j, j)] = Complex::new(f, F::zero());
    }
    a.mul(&vecs).mul(&factors).mul(&vecs.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;

    fn c(re: f64, im: f64) -> Cpx<f64> {
        cpx(re, im)
    }

    #[test]
    fn eigen_diagonal_matrix() {
        let mut h = DenseMat::<f64>::zeros(2, 2);
        h[(0, 0)] = c(1.0, 0.0);
        h[(1, 1)] = c(0.75, 0.0);
        let (vals, _) = hermitian_eigen(&h);
        assert!((vals[0] - 0.75).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_reconstructs_hermitian_input() {
        let h = DenseMat::from_fn(3, 3, |i, j| {
            let base = c(1.0 / (1.0 + i as f64 + j as f64), 0.3 * (i as f64 - j as f64));
            if i == j {
                c(2.0 + i as f64, 0.0)
            } else {
                base
            }
        });
        let h = h.hermitian_part();
        let (vals, vecs) = hermitian_eigen(&h);
        let mut lam = DenseMat::<f64>::zeros(3, 3);
        for i in 0..3 {
            lam[(i, i)] = c(vals[i], 0.0);
        }
        let rebuilt = vecs.mul(&lam).mul(&vecs.adjoint());
        assert!(rebuilt.sub(&h).max_abs() < 1e-12);
        let gram = vecs.adjoint().mul(&vecs);
        assert!(gram.sub(&DenseMat::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn psd_sqrt_of_defect_block() {
        let mut d = DenseMat::<f64>::zeros(2, 2);
        d[(0, 0)] = c(1.0, 0.0);
        d[(1, 1)] = c(0.75, 0.0);
        let s = psd_sqrt(&d, -1e-10).unwrap();
        assert!((s[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((s[(1, 1)].re - 0.75f64.sqrt()).abs() < 1e-14);
        assert!(s.mul(&s).sub(&d).max_abs() < 1e-13);
    }

    #[test]
    fn psd_sqrt_rejects_negative_eigenvalue() {
        let mut d = DenseMat::<f64>::zeros(1, 1);
        d[(0, 0)] = c(-0.5, 0.0);
        assert!(matches!(psd_sqrt(&d, -1e-10), Err(OpError::NotPositive { .. })));
    }

    #[test]
    fn singular_value_clip_produces_contraction() {
        let a = DenseMat::from_fn(3, 3, |i, j| c(1.3 * (i as f64 + 1.0), -0.7 * (j as f64)));
        let clipped = clip_singular_values(&a);
        assert!(largest_singular_value(&clipped) <= 1.0 + 1e-10);
    }

    #[test]
    fn gram_schmidt_gives_unitary() {
        let g = DenseMat::from_fn(4, 4, |i, j| {
            let t = (1 + 3 * i + j) as f64;
            c(t.sin(), (2.0 * t).cos())
        });
        let q = gram_schmidt_unitary(&g).unwrap();
        let dev = q.adjoint().mul(&q).sub(&DenseMat::identity(4)).max_abs();
        assert!(dev < 1e-13, "unitarity deviation {dev}");
    }
}
