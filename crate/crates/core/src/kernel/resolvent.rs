//! Resolvent application by Neumann series: `(I - zeta T)^{-1} V` for
//! `|zeta| < 1` and finitely supported column families.

use crate::error::{OpError, Result};
use crate::kernel::column::Column;
use crate::kernel::leaf::QuasiToeplitzOperator;
use crate::scalar::{Cpx, Real};

/// Number of series terms needed so that `|zeta|^{M+1} / (1 - |zeta|) < eps`.
pub fn series_length<F: Real>(zeta_abs: F, eps: F) -> usize {
    if zeta_abs == F::zero() {
        return 0;
    }
    // M + 1 > ln(eps (1 - |zeta|)) / ln |zeta|
    let target = (eps * (F::one() - zeta_abs)).ln() / zeta_abs.ln();
    let m = target.to_f64_lossy().ceil().max(0.0) as usize;
    m
}

/// `(I - zeta T)^{-1} v` summed term by term: `sum_{m<=M} (zeta T)^m v`.
///
/// The iteration exits early once the remaining tail bound
/// `|zeta| ||w_m|| / (1 - |zeta|)` drops below `eps ||v||`, which is never
/// later than the a-priori `M`. Entries of the result below
/// `eps * ||result||` are dropped.
pub fn resolvent_column<F: Real>(
    t: &QuasiToeplitzOperator<F>,
    zeta: Cpx<F>,
    v: &Column<F>,
    eps: F,
) -> Result<Column<F>> {
    let zeta_abs = zeta.norm();
    if zeta_abs >= F::one() {
        return Err(OpError::DivergentSeries { modulus: zeta_abs.to_f64_lossy() });
    }
    let max_terms = series_length(zeta_abs, eps);
    let v_norm = v.norm();
    let tail_stop = eps * v_norm;

    let mut acc = v.clone();
    let mut w = v.clone();
    for _ in 0..max_terms {
        let mut next = t.apply_column(&w);
        next.scale(zeta);
        w = next;
        if w.is_empty() {
            break;
        }
        acc.add_assign(&w);
        let tail_bound = w.norm() * zeta_abs / (F::one() - zeta_abs);
        if tail_bound < tail_stop {
            break;
        }
    }
    acc.trim_below(eps * acc.norm());
    Ok(acc)
}

/// Resolvent applied to a finite column family.
pub fn resolvent_apply<F: Real>(
    t: &QuasiToeplitzOperator<F>,
    zeta: Cpx<F>,
    family: &[Column<F>],
    eps: F,
) -> Result<Vec<Column<F>>> {
    family.iter().map(|v| resolvent_column(t, zeta, v, eps)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;

    fn shift() -> QuasiToeplitzOperator<f64> {
        QuasiToeplitzOperator::monomial(1, cpx(1.0, 0.0))
    }

    #[test]
    fn geometric_series_of_the_shift() {
        let r = 0.5;
        let out = resolvent_column(&shift(), cpx(r, 0.0), &Column::basis(0), 1e-12).unwrap();
        for m in 0..20 {
            assert!((out.entry(m) - cpx(r.powi(m as i32), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_point_returns_input() {
        let v = Column::basis(3);
        let out = resolvent_column(&shift(), cpx(0.0, 0.0), &v, 1e-12).unwrap();
        assert_eq!(out, v);
    }

    #[test]
    fn squared_norm_matches_closed_form() {
        // || (I - 0.5 S)^{-1} e0 ||^2 = 1 / (1 - 0.25) = 4/3.
        let out = resolvent_column(&shift(), cpx(0.5, 0.0), &Column::basis(0), 1e-12).unwrap();
        assert!((out.norm_sqr() - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn outside_the_disc_is_divergent() {
        let err = resolvent_column(&shift(), cpx(1.0, 0.0), &Column::basis(0), 1e-12).unwrap_err();
        assert!(matches!(err, OpError::DivergentSeries { .. }));
    }

    #[test]
    fn nilpotent_direction_terminates_early() {
        // S* pushes support up; the series ends after finitely many terms.
        let out =
            resolvent_column(&shift().adjoint(), cpx(0.9, 0.1), &Column::basis(2), 1e-12).unwrap();
        assert!(out.len() <= 3);
    }
}
