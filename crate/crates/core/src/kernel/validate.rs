//! Contraction and almost-unitarity checks with per-leaf certificates.

use crate::kernel::defect::defects;
use crate::kernel::operator::Operator;
use crate::linalg::largest_singular_value;
use crate::scalar::{cpx, Real};
use crate::tol;

/// Configuration of the contraction test.
#[derive(Debug, Clone)]
pub struct ValidationConfig<F: Real> {
    /// Allowed excess of sigma_max and |symbol(z)| above 1.
    pub slack: F,
    /// Number of unit-circle sample points for the symbol bound.
    pub circle_samples: usize,
    /// Extra rows added to the safe window for the truncation.
    pub truncation_pad: usize,
}

impl<F: Real> Default for ValidationConfig<F> {
    fn default() -> Self {
        Self {
            slack: F::real(tol::CONTRACTION_SLACK),
            circle_samples: tol::CIRCLE_SAMPLES,
            truncation_pad: tol::TRUNCATION_PAD,
        }
    }
}

/// Per-leaf evidence from the contraction test.
#[derive(Debug, Clone)]
pub struct LeafCertificate<F: Real> {
    pub sigma_max: F,
    pub symbol_max: F,
    pub truncation: usize,
    pub pass: bool,
}

/// Outcome of the contraction test over all components.
#[derive(Debug, Clone)]
pub struct ContractionCertificate<F: Real> {
    pub pass: bool,
    pub leaves: Vec<LeafCertificate<F>>,
}

/// Contraction test: per leaf, the largest singular value of the
/// `N x N` truncation (`N` = safe window + pad) and the max of `|symbol(z)|`
/// over sampled circle points must both stay within `1 + slack`.
pub fn validate_contraction<F: Real>(
    t: &Operator<F>,
    cfg: &ValidationConfig<F>,
) -> ContractionCertificate<F> {
    let bound = F::one() + cfg.slack;
    let leaves = t
        .leaves()
        .into_iter()
        .map(|leaf| {
            let n = leaf.window_bound() + cfg.truncation_pad;
            let sigma_max = largest_singular_value(&leaf.truncate_dense(n));
            let mut symbol_max = F::zero();
            for s in 0..cfg.circle_samples {
                let theta = 2.0 * std::f64::consts::PI * (s as f64) / (cfg.circle_samples as f64);
                let z = cpx::<F>(theta.cos(), theta.sin());
                symbol_max = symbol_max.max(leaf.symbol().eval(z).norm());
            }
            LeafCertificate {
                sigma_max,
                symbol_max,
                truncation: n,
                pass: sigma_max <= bound && symbol_max <= bound,
            }
        })
        .collect::<Vec<_>>();
    ContractionCertificate { pass: leaves.iter().all(|l| l.pass), leaves }
}

/// Almost-unitary test: both defects must have identically zero symbol in
/// every component, which makes them finitely supported with exact traces.
pub fn validate_almost_unitary<F: Real>(t: &Operator<F>) -> bool {
    defects(t).finitely_supported()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::correction::rank_one;
    use crate::kernel::leaf::QuasiToeplitzOperator;
    use crate::kernel::symbol::LaurentSymbol;
    use crate::scalar::cpx;

    fn shift_op() -> Operator<f64> {
        Operator::leaf(QuasiToeplitzOperator::monomial(1, cpx(1.0, 0.0)))
    }

    #[test]
    fn shift_passes_both_validators() {
        let s = shift_op();
        assert!(validate_contraction(&s, &ValidationConfig::default()).pass);
        assert!(validate_almost_unitary(&s));
    }

    #[test]
    fn scaled_shift_is_a_contraction_but_not_almost_unitary() {
        let half = shift_op().scale(cpx(0.5, 0.0));
        assert!(validate_contraction(&half, &ValidationConfig::default()).pass);
        assert!(!validate_almost_unitary(&half));
    }

    #[test]
    fn overweight_shift_fails_contraction() {
        // e0 -> 1.2 e1: column norm 1.2.
        let leaf = QuasiToeplitzOperator::<f64>::new(
            LaurentSymbol::monomial(1, cpx(1.0, 0.0)),
            rank_one(1, 0, cpx(0.2, 0.0)),
        );
        let t = Operator::leaf(leaf);
        let cert = validate_contraction(&t, &ValidationConfig::default());
        assert!(!cert.pass);
        assert!(cert.leaves[0].sigma_max >= 1.2 - 1e-9);
    }
}
