//! The index engine: three independent routes to the Fredholm index of an
//! almost-unitary contraction, plus the purity diagnostic.
//!
//! The symbol route is structural ground truth (winding of the unimodular
//! monomial symbol, invariant under the compact correction); the commutator
//! and b-sequence routes are the trace-theoretic computations under test.

use crate::curvature::b_sequence_detail;
use crate::error::{OpError, Result};
use crate::kernel::column::Column;
use crate::kernel::operator::{commutator, Operator};
use crate::scalar::{Cpx, Real};
use crate::tol;

/// Which route produced an [`IndexResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexMethod {
    /// Winding of the monomial symbol (ground truth in this algebra).
    Symbol,
    /// `tr(T T* - T* T)` of the assembled commutator.
    Commutator,
    /// `-b_n` at a probe index.
    BProbe,
}

impl IndexMethod {
    pub fn tag(self) -> &'static str {
        match self {
            IndexMethod::Symbol => "symbol",
            IndexMethod::Commutator => "commutator",
            IndexMethod::BProbe => "b_n",
        }
    }
}

/// Integer index with the raw pre-rounding value and its residual.
#[derive(Debug, Clone)]
pub struct IndexResult<F: Real> {
    pub value: i64,
    pub raw: F,
    pub method: IndexMethod,
    pub residual: F,
    /// False when the residual exceeds `tol::INDEX_RESIDUAL_TOL`.
    pub reliable: bool,
}

fn round_to_index<F: Real>(raw: Cpx<F>, method: IndexMethod) -> IndexResult<F> {
    let value = raw.re.to_f64_lossy().round() as i64;
    let target = Cpx::new(F::real(value as f64), F::zero());
    let residual = (raw - target).norm();
    IndexResult {
        value,
        raw: raw.re,
        method,
        residual,
        reliable: residual <= F::real(tol::INDEX_RESIDUAL_TOL),
    }
}

/// Index from the symbol: each leaf must carry a unimodular monomial
/// `c z^k`; the index is `-sum k` over the leaves.
pub fn index_symbol<F: Real>(t: &Operator<F>) -> Result<IndexResult<F>> {
    let mut total: i64 = 0;
    for leaf in t.leaves() {
        let (k, c) = leaf.symbol().as_monomial().ok_or_else(|| OpError::NotAlmostUnitary {
            reason: "leaf symbol is not a monomial; no structural winding".to_string(),
        })?;
        if (c.norm() - F::one()).abs() > F::real(tol::UNIMODULAR_TOL) {
            return Err(OpError::NotAlmostUnitary {
                reason: format!("monomial coefficient has modulus {} != 1", c.norm()),
            });
        }
        total -= k;
    }
    Ok(IndexResult {
        value: total,
        raw: F::real(total as f64),
        method: IndexMethod::Symbol,
        residual: F::zero(),
        reliable: true,
    })
}

/// Index from the assembled commutator: `tr(T T* - T* T)`, rounded to the
/// nearest integer with the residual reported.
pub fn index_commutator<F: Real>(t: &Operator<F>) -> Result<IndexResult<F>> {
    let comm = commutator(t, &t.adjoint())?;
    let raw = comm.trace().map_err(|e| match e {
        OpError::TraceUndefined { detail } => OpError::NotAlmostUnitary {
            reason: format!("commutator [T, T*] is not trace-class: {detail}"),
        },
        other => other,
    })?;
    Ok(round_to_index(raw, IndexMethod::Commutator))
}

/// Index from the b-sequence at probe index `n`: `-b_n` rounds to the
/// index, for every `n`, by the telescoping constancy of `b`.
pub fn index_via_b<F: Real>(t: &Operator<F>, probe: usize) -> Result<IndexResult<F>> {
    let detail = b_sequence_detail(t, probe)?;
    let b_n = detail.values[probe];
    Ok(round_to_index(Cpx::new(-b_n, F::zero()), IndexMethod::BProbe))
}

/// Purity diagnostic: `max_{j < probes} ||T*^horizon e_j||`, probing each
/// component separately. A value at or below `tol::PURITY_TOL` is reported
/// as "pure to tolerance"; it is a bounded diagnostic, not a proof, since
/// purity quantifies over every vector of the space.
pub fn purity_diagnostic<F: Real>(t: &Operator<F>, probes: usize, horizon: usize) -> F {
    let mut worst = F::zero();
    for leaf in t.leaves() {
        let adj = leaf.adjoint();
        for j in 0..probes {
            let mut col = Column::basis(j);
            for _ in 0..horizon {
                col = adj.apply_column(&col);
                if col.is_empty() {
                    break;
                }
            }
            worst = worst.max(col.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::leaf::QuasiToeplitzOperator;
    use crate::scalar::cpx;

    fn shift_op() -> Operator<f64> {
        Operator::leaf(QuasiToeplitzOperator::monomial(1, cpx(1.0, 0.0)))
    }

    #[test]
    fn symbol_route_on_shift_family() {
        assert_eq!(index_symbol(&shift_op()).unwrap().value, -1);
        assert_eq!(index_symbol(&shift_op().adjoint()).unwrap().value, 1);
        let pair = Operator::direct_sum(vec![shift_op().adjoint(), shift_op()]);
        assert_eq!(index_symbol(&pair).unwrap().value, 0);
    }

    #[test]
    fn symbol_route_rejects_non_monomial() {
        let mixed = shift_op().add(&shift_op().adjoint()).unwrap();
        assert!(matches!(index_symbol(&mixed), Err(OpError::NotAlmostUnitary { .. })));
    }

    #[test]
    fn commutator_route_on_shift() {
        let res = index_commutator(&shift_op()).unwrap();
        assert_eq!(res.value, -1);
        assert!(res.residual < 1e-14);
        assert!(res.reliable);
    }

    #[test]
    fn commutator_route_flags_scaled_shift_as_unreliable() {
        // Symbols commute, so [T, T*] always has zero symbol and a finite
        // trace; for 0.5 S that trace is -0.25, far from any integer.
        let half = shift_op().scale(cpx(0.5, 0.0));
        let res = index_commutator(&half).unwrap();
        assert!(!res.reliable);
        assert!((res.raw + 0.25).abs() < 1e-14);
    }

    #[test]
    fn b_probe_route_on_shift() {
        assert_eq!(index_via_b(&shift_op(), 0).unwrap().value, -1);
        assert_eq!(index_via_b(&shift_op(), 7).unwrap().value, -1);
        let pair = Operator::direct_sum(vec![shift_op().adjoint(), shift_op()]);
        assert_eq!(index_via_b(&pair, 3).unwrap().value, 0);
    }

    #[test]
    fn purity_of_shift_and_identity() {
        assert_eq!(purity_diagnostic(&shift_op(), 8, 16), 0.0);
        let id = shift_op().identity_like();
        assert!((purity_diagnostic(&id, 4, 16) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn adjoint_antisymmetry() {
        let s = shift_op();
        for (a, b) in [
            (index_commutator(&s).unwrap().value, index_commutator(&s.adjoint()).unwrap().value),
            (index_via_b(&s, 2).unwrap().value, index_via_b(&s.adjoint(), 2).unwrap().value),
        ] {
            assert_eq!(a, -b);
        }
    }
}
