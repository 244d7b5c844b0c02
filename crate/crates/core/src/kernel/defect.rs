//! Defect operators `I - T T*`, `I - T* T` and the finite Hermitian square
//! root of the left defect.

use crate::error::{OpError, Result};
use crate::kernel::leaf::QuasiToeplitzOperator;
use crate::kernel::operator::{one_minus_prod, Operator};
use crate::linalg::{psd_sqrt, DenseMat};
use crate::scalar::Real;
use crate::tol;

/// Both defects of an operator, with the direct-sum shape preserved.
#[derive(Debug, Clone)]
pub struct DefectPair<F: Real> {
    /// `I - T T*`.
    pub left: Operator<F>,
    /// `I - T* T`.
    pub right: Operator<F>,
}

impl<F: Real> DefectPair<F> {
    /// True when every leaf of both defects has identically zero symbol,
    /// i.e. both defects are finitely supported.
    pub fn finitely_supported(&self) -> bool {
        self.left.leaves().iter().all(|qt| qt.symbol().is_zero())
            && self.right.leaves().iter().all(|qt| qt.symbol().is_zero())
    }

    /// Max Hermitian deviation over both defects.
    pub fn hermitian_deviation(&self) -> F {
        let dev = |op: &Operator<F>| {
            op.leaves()
                .iter()
                .fold(F::zero(), |m, qt| m.max(qt.hermitian_deviation()))
        };
        dev(&self.left).max(dev(&self.right))
    }
}

/// Compute both defects of `T`.
pub fn defects<F: Real>(t: &Operator<F>) -> DefectPair<F> {
    let adj = t.adjoint();
    let left = one_minus_prod(t, &adj).expect("adjoint preserves shape");
    let right = one_minus_prod(&adj, t).expect("adjoint preserves shape");
    DefectPair { left, right }
}

/// Finite Hermitian PSD square root of a defect block.
#[derive(Debug, Clone)]
pub struct DefectFactor<F: Real> {
    /// The `d x d` Hermitian PSD matrix Delta.
    pub matrix: DenseMat<F>,
    /// Declared dimension `d`.
    pub dim: usize,
    /// Index of the leaf whose left defect this factors.
    pub component: usize,
}

impl<F: Real> DefectFactor<F> {
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Columns of Delta as finitely supported l2 vectors.
    pub fn columns(&self) -> Vec<crate::kernel::column::Column<F>> {
        (0..self.dim)
            .map(|j| {
                crate::kernel::column::Column::from_dense(
                    (0..self.dim).map(|i| self.matrix[(i, j)]).collect(),
                )
            })
            .collect()
    }

    /// `max |Delta^2 - D|` over the block support.
    pub fn residual_against(&self, defect: &QuasiToeplitzOperator<F>) -> F {
        let sq = self.matrix.mul(&self.matrix);
        let d = self.dim;
        let mut dev = F::zero();
        for i in 0..d {
            for j in 0..d {
                dev = dev.max((sq[(i, j)] - defect.entry(i, j)).norm());
            }
        }
        dev
    }
}

/// PSD principal square root of a finite Hermitian defect leaf via
/// Hermitian eigendecomposition. Eigenvalues in `[PSD_EIGEN_FLOOR, 0)` are
/// clipped to zero; anything lower means `T` is not a contraction to
/// working tolerance.
pub fn defect_sqrt<F: Real>(defect: &QuasiToeplitzOperator<F>) -> Result<DefectFactor<F>> {
    defect_sqrt_component(defect, 0)
}

/// As [`defect_sqrt`], recording which leaf the factor belongs to.
pub fn defect_sqrt_component<F: Real>(
    defect: &QuasiToeplitzOperator<F>,
    component: usize,
) -> Result<DefectFactor<F>> {
    if !defect.symbol().is_zero() {
        return Err(OpError::NotAlmostUnitary {
            reason: "defect has nonzero symbol; no finite square root exists".to_string(),
        });
    }
    let dev = defect.correction().hermitian_deviation();
    if dev > F::real(tol::HERMITIAN_TOL) {
        return Err(OpError::NotHermitian { deviation: dev.to_f64_lossy() });
    }
    let block = defect.correction().square_dense().hermitian_part();
    let matrix = psd_sqrt(&block, F::real(tol::PSD_EIGEN_FLOOR))?;
    let dim = matrix.rows();
    Ok(DefectFactor { matrix, dim, component })
}

/// Square roots of every component's left defect, in leaf order.
pub fn defect_factors<F: Real>(t: &Operator<F>) -> Result<Vec<DefectFactor<F>>> {
    let pair = defects(t);
    pair.left
        .leaves()
        .iter()
        .enumerate()
        .map(|(idx, leaf)| defect_sqrt_component(leaf, idx))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;

    fn shift_op() -> Operator<f64> {
        Operator::leaf(QuasiToeplitzOperator::monomial(1, cpx(1.0, 0.0)))
    }

    fn weighted_half() -> Operator<f64> {
        // e0 -> 0.5 e1, e_j -> e_{j+1} afterwards.
        use crate::kernel::correction::rank_one;
        let leaf = QuasiToeplitzOperator::new(
            crate::kernel::symbol::LaurentSymbol::monomial(1, cpx(1.0, 0.0)),
            rank_one(1, 0, cpx(-0.5, 0.0)),
        );
        Operator::leaf(leaf)
    }

    #[test]
    fn shift_defect_factor_is_rank_one() {
        let s = shift_op();
        let factors = defect_factors(&s).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].dim, 1);
        assert!((factors[0].matrix[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_defect_factor_is_empty() {
        let id = shift_op().identity_like();
        let factors = defect_factors(&id).unwrap();
        assert!(factors[0].is_zero());
    }

    #[test]
    fn weighted_shift_defect_sqrt_matches_diagonal() {
        let t = weighted_half();
        let factors = defect_factors(&t).unwrap();
        let f = &factors[0];
        assert_eq!(f.dim, 2);
        assert!((f.matrix[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((f.matrix[(1, 1)].re - 0.75f64.sqrt()).abs() < 1e-14);
        assert!(f.matrix[(0, 1)].norm() < 1e-14);
        let pair = defects(&t);
        assert!(f.residual_against(pair.left.leaves()[0]) < 1e-10);
    }

    #[test]
    fn non_contraction_defect_is_rejected() {
        // Weighted shift with weight 1.5 and unimodular tail: the defect has
        // zero symbol but eigenvalue 1 - 2.25 < 0.
        use crate::kernel::correction::rank_one;
        let heavy = Operator::leaf(QuasiToeplitzOperator::<f64>::new(
            crate::kernel::symbol::LaurentSymbol::monomial(1, cpx(1.0, 0.0)),
            rank_one(1, 0, cpx(0.5, 0.0)),
        ));
        let pair = defects(&heavy);
        let err = defect_sqrt(pair.left.leaves()[0]).unwrap_err();
        assert!(matches!(err, OpError::NotPositive { .. }));
    }

    #[test]
    fn defect_sqrt_rejects_nonzero_symbol() {
        let too_big = shift_op().scale(cpx(1.5, 0.0));
        let pair = defects(&too_big);
        let err = defect_sqrt(pair.left.leaves()[0]).unwrap_err();
        assert!(matches!(err, OpError::NotAlmostUnitary { .. }));
    }

    #[test]
    fn defects_are_hermitian_and_finite_for_shift() {
        let pair = defects(&shift_op());
        assert!(pair.finitely_supported());
        assert!(pair.hermitian_deviation() < 1e-13);
    }

    #[test]
    fn scaled_shift_defect_symbol_is_nonzero() {
        let half = shift_op().scale(cpx(0.5, 0.0));
        let pair = defects(&half);
        assert!(!pair.finitely_supported());
        // I - (0.5 S)(0.5 S*) has diagonal symbol 0.75.
        assert_eq!(pair.left.leaves()[0].symbol().coeff(0), cpx(0.75, 0.0));
    }
}
