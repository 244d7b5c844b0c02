//! Constructors for almost-unitary contractions with known ground truth,
//! plus a seeded random generator for property tests.
//!
//! Within this algebra almost-unitarity forces every leaf symbol to be a
//! unimodular monomial, so all constructors keep symbol coefficients in
//! exactly representable unit values (real `+-1`, monomials of the shift);
//! the symbol arithmetic downstream then stays exact and defect symbols
//! cancel to literal zero.

use num_complex::Complex;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OpError, Result};
use crate::kernel::correction::CorrectionBlock;
use crate::kernel::leaf::QuasiToeplitzOperator;
use crate::kernel::operator::Operator;
use crate::kernel::symbol::LaurentSymbol;
use crate::linalg::{clip_singular_values, gram_schmidt_unitary, DenseMat};
use crate::oplang;
use crate::scalar::{czero, Cpx, Real};
use crate::tol;

/// `S^k` for `k > 0`, `S*^{|k|}` for `k < 0`, the identity for `k = 0`.
pub fn shift_power<F: Real>(k: i64) -> Operator<F> {
    Operator::leaf(QuasiToeplitzOperator::monomial(k, Complex::new(F::one(), F::zero())))
}

/// Weighted shift `e_j -> w_j e_{j+1}` with `w_j = prefix[j]` for
/// `j < len(prefix)` and `w_j = tail` afterwards.
///
/// The tail weight must satisfy `|tail|^2 == 1` exactly (e.g. real `+-1` or
/// `+-i`): an inexactly unimodular tail would leave residue in the defect
/// symbols and the operator would genuinely fail the almost-unitary check.
pub fn weighted_shift<F: Real>(prefix: &[Cpx<F>], tail: Cpx<F>) -> Result<Operator<F>> {
    if tail.norm_sqr() != F::one() {
        return Err(OpError::NotAlmostUnitary {
            reason: format!(
                "tail weight must be exactly unimodular in this representation (|tail|^2 = {})",
                tail.norm_sqr()
            ),
        });
    }
    for (j, w) in prefix.iter().enumerate() {
        if w.norm_sqr() > F::one() {
            return Err(OpError::NotContraction {
                reason: format!("prefix weight {j} has modulus {} > 1", w.norm()),
            });
        }
    }
    let correction = CorrectionBlock::from_fn(prefix.len() + 1, prefix.len().max(1), |i, j| {
        if i == j + 1 && j < prefix.len() {
            prefix[j] - tail
        } else {
            czero()
        }
    });
    Ok(Operator::leaf(QuasiToeplitzOperator::new(LaurentSymbol::monomial(1, tail), correction)))
}

/// Embed a finite square block `X` as `X (+) I_tail` in a single leaf
/// (symbol 1, correction `X - I`).
fn embed_block<F: Real>(x: &DenseMat<F>) -> QuasiToeplitzOperator<F> {
    let m = x.rows();
    let correction = CorrectionBlock::from_fn(m, m, |i, j| {
        let id = if i == j { Complex::new(F::one(), F::zero()) } else { czero() };
        x[(i, j)] - id
    });
    QuasiToeplitzOperator::new(LaurentSymbol::one(), correction)
}

/// `U (+) I` as a single leaf, for a finite unitary `U` (checked to
/// `tol::UNITARY_TOL`).
pub fn unitary_embed<F: Real>(u: &DenseMat<F>) -> Result<Operator<F>> {
    if u.rows() != u.cols() {
        return Err(OpError::NotAlmostUnitary { reason: "embedded block must be square".into() });
    }
    let dev = u.adjoint().mul(u).sub(&DenseMat::identity(u.rows())).max_abs();
    if dev > F::real(tol::UNITARY_TOL) {
        return Err(OpError::NotAlmostUnitary {
            reason: format!("block is not unitary (deviation {:.3e})", dev.to_f64_lossy()),
        });
    }
    Ok(Operator::leaf(embed_block(u)))
}

/// Seeded random `m x m` unitary (Gram-Schmidt of a complex Gaussian).
pub fn random_unitary<F: Real>(m: usize, seed: u64) -> DenseMat<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..8 {
        let g = random_gaussian_matrix(m, &mut rng);
        if let Some(q) = gram_schmidt_unitary(&g) {
            return q;
        }
        let _ = attempt;
    }
    // A Gaussian draw essentially never degenerates; fall back to identity.
    DenseMat::identity(m)
}

/// `unitary_embed(random_unitary(m, seed))`.
pub fn unitary_embed_random<F: Real>(m: usize, seed: u64) -> Operator<F> {
    unitary_embed(&random_unitary(m, seed)).expect("random unitary passes the unitarity check")
}

/// Sandwich isometry `(W (+) I) S^k (V (+) I)` with `W`, `V` pseudo-random
/// `m x m` contractions obtained by singular-value clipping. `m = 0`
/// degenerates to `S^k` exactly.
pub fn sandwich_isometry<F: Real>(k: usize, m: usize, seed: u64) -> Operator<F> {
    assert!(k >= 1, "sandwich isometry needs k >= 1");
    if m == 0 {
        return shift_power(k as i64);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = clip_singular_values(&random_gaussian_matrix(m, &mut rng));
    let v = clip_singular_values(&random_gaussian_matrix(m, &mut rng));
    let shift = QuasiToeplitzOperator::monomial(k as i64, Complex::new(F::one(), F::zero()));
    let leaf = embed_block(&w).mul(&shift).mul(&embed_block(&v));
    Operator::leaf(leaf)
}

/// Direct sum of the given operators.
pub fn direct_sum<F: Real>(parts: Vec<Operator<F>>) -> Operator<F> {
    Operator::direct_sum(parts)
}

fn random_gaussian_matrix<F: Real>(m: usize, rng: &mut ChaCha8Rng) -> DenseMat<F> {
    DenseMat::from_fn(m, m, |_, _| {
        let (re, im) = (gaussian(rng), gaussian(rng));
        Complex::new(F::real(re), F::real(im))
    })
}

/// Box-Muller sample; deterministic given the rng state.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

// ---------------------------------------------------------------------------
// Random generator
// ---------------------------------------------------------------------------

/// Bounds for the random generator.
#[derive(Debug, Clone)]
pub struct RandomOpConfig {
    pub max_shift: i64,
    pub max_block: usize,
    pub max_summands: usize,
    pub max_prefix: usize,
}

impl Default for RandomOpConfig {
    fn default() -> Self {
        Self { max_shift: 2, max_block: 3, max_summands: 2, max_prefix: 2 }
    }
}

/// Construction record of a generated operator.
#[derive(Debug, Clone)]
pub struct Provenance {
    /// Spec string that reconstructs the operator bit-identically.
    pub spec_string: String,
    /// Index implied by the construction tree.
    pub structural_index: i64,
}

/// Seeded, reproducible almost-unitary contraction: a direct sum of shifts,
/// weighted shifts, sandwich isometries, unitary embeds and adjoints
/// thereof. The returned operator always passes both validators; the
/// provenance records the spec string and the structural index.
pub fn random_almost_unitary<F: Real>(seed: u64, cfg: &RandomOpConfig) -> (Operator<F>, Provenance) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let summands = rng.random_range(1..=cfg.max_summands.max(1));
    let mut parts = Vec::with_capacity(summands);
    let mut index = 0i64;
    for _ in 0..summands {
        let (term, term_index) = random_term(&mut rng, cfg);
        if rng.random::<bool>() {
            parts.push(format!("adj({term})"));
            index -= term_index;
        } else {
            parts.push(term);
            index += term_index;
        }
    }
    let spec_string = parts.join(" (+) ");
    let op = oplang::parse(&spec_string).expect("generated spec strings always parse");
    (op, Provenance { spec_string, structural_index: index })
}

fn random_term(rng: &mut ChaCha8Rng, cfg: &RandomOpConfig) -> (String, i64) {
    match rng.random_range(0..4u32) {
        0 => {
            let k = rng.random_range(-cfg.max_shift..=cfg.max_shift);
            (format!("shift({k})"), -k)
        }
        1 => {
            let len = rng.random_range(0..=cfg.max_prefix);
            let weights: Vec<String> = (0..len)
                .map(|_| {
                    let w: f64 = rng.random_range(-1.0..=1.0);
                    format!("{w}")
                })
                .collect();
            let tail = if rng.random::<bool>() { "1" } else { "-1" };
            (format!("wshift([{}];{tail})", weights.join(",")), -1)
        }
        2 => {
            let k = rng.random_range(1..=cfg.max_shift.max(1));
            let m = rng.random_range(1..=cfg.max_block.max(1));
            let sub_seed = rng.next_u64();
            (format!("iso(k={k},m={m},seed={sub_seed})"), -k)
        }
        _ => {
            let m = rng.random_range(1..=cfg.max_block.max(1));
            let sub_seed = rng.next_u64();
            (format!("unitary(m={m},seed={sub_seed})"), 0)
        }
    }
}

// ---------------------------------------------------------------------------
// Fixed zoo
// ---------------------------------------------------------------------------

/// A named operator with its analytic ground truth.
#[derive(Debug, Clone)]
pub struct ZooMember<F: Real> {
    pub name: &'static str,
    pub spec: &'static str,
    pub expected_index: i64,
    /// `(K(T), K(T*))`.
    pub expected_curvature: (f64, f64),
    /// Whether the purity diagnostic is expected to vanish.
    pub expected_pure: bool,
    pub op: Operator<F>,
}

/// The fixed zoo: pure members of negative index, adjoint-pure members of
/// positive index, a unitary block, non-pure mixtures, and |index| >= 2
/// cases.
pub fn fixed_zoo<F: Real>() -> Vec<ZooMember<F>> {
    let table: [(&'static str, &'static str, i64, (f64, f64), bool); 10] = [
        ("shift", "shift(1)", -1, (1.0, 0.0), true),
        ("coshift", "shift(-1)", 1, (0.0, 1.0), false),
        ("coshift-squared", "shift(-2)", 2, (0.0, 2.0), false),
        ("damped-shift", "wshift([0.5];1)", -1, (1.0, 0.0), true),
        ("kernel-shift", "wshift([0];1)", -1, (1.0, 0.0), true),
        ("negated-shift", "wshift([];-1)", -1, (1.0, 0.0), true),
        ("rotation-block", "unitary(m=3,seed=5)", 0, (0.0, 0.0), false),
        ("balanced-pair", "adj(shift(1)) (+) shift(1)", 0, (1.0, 1.0), false),
        ("rotation-plus-shift", "unitary(m=2,seed=9) (+) shift(1)", -1, (1.0, 0.0), false),
        ("sandwiched-shift", "iso(k=2,m=2,seed=1)", -2, (2.0, 0.0), true),
    ];
    table
        .into_iter()
        .map(|(name, spec, expected_index, expected_curvature, expected_pure)| ZooMember {
            name,
            spec,
            expected_index,
            expected_curvature,
            expected_pure,
            op: oplang::parse(spec).expect("fixed zoo specs parse"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::index_symbol;
    use crate::kernel::validate::{validate_almost_unitary, validate_contraction, ValidationConfig};
    use crate::scalar::cpx;

    #[test]
    fn shift_power_k_zero_is_identity() {
        let op = shift_power::<f64>(0);
        assert_eq!(op, op.identity_like());
    }

    #[test]
    fn weighted_shift_entries() {
        let op = weighted_shift::<f64>(&[cpx(0.5, 0.0)], cpx(1.0, 0.0)).unwrap();
        assert_eq!(op.entry(0, 1, 0), cpx(0.5, 0.0));
        assert_eq!(op.entry(0, 2, 1), cpx(1.0, 0.0));
        assert_eq!(op.entry(0, 0, 0), cpx(0.0, 0.0));
    }

    #[test]
    fn weighted_shift_empty_prefix_is_the_shift() {
        let op = weighted_shift::<f64>(&[], cpx(1.0, 0.0)).unwrap();
        assert_eq!(op, shift_power(1));
    }

    #[test]
    fn weighted_shift_rejects_bad_weights() {
        let heavy = weighted_shift::<f64>(&[cpx(1.2, 0.0)], cpx(1.0, 0.0));
        assert!(matches!(heavy, Err(OpError::NotContraction { .. })));
        let drifting = weighted_shift::<f64>(&[], cpx(0.9, 0.0));
        assert!(matches!(drifting, Err(OpError::NotAlmostUnitary { .. })));
    }

    #[test]
    fn kernel_shift_still_has_index_minus_one() {
        // e0 -> 0 kills a basis vector but the index is a compact
        // perturbation invariant.
        let op = weighted_shift::<f64>(&[cpx(0.0, 0.0)], cpx(1.0, 0.0)).unwrap();
        assert_eq!(index_symbol(&op).unwrap().value, -1);
    }

    #[test]
    fn sandwich_degenerate_block_is_pure_shift_power() {
        assert_eq!(sandwich_isometry::<f64>(3, 0, 17), shift_power(3));
    }

    #[test]
    fn unitary_embed_rejects_non_unitary() {
        let mut m = DenseMat::<f64>::identity(2);
        m[(0, 0)] = cpx(0.5, 0.0);
        assert!(matches!(unitary_embed(&m), Err(OpError::NotAlmostUnitary { .. })));
    }

    #[test]
    fn generator_is_deterministic() {
        let cfg = RandomOpConfig::default();
        let (a, pa) = random_almost_unitary::<f64>(0, &cfg);
        let (b, pb) = random_almost_unitary::<f64>(0, &cfg);
        assert_eq!(pa.spec_string, pb.spec_string);
        assert_eq!(a, b);
    }

    #[test]
    fn generator_output_validates_and_matches_structural_index() {
        let cfg = RandomOpConfig::default();
        for seed in 0..24 {
            let (op, prov) = random_almost_unitary::<f64>(seed, &cfg);
            assert!(validate_contraction(&op, &ValidationConfig::default()).pass, "seed {seed}");
            assert!(validate_almost_unitary(&op), "seed {seed}");
            assert_eq!(index_symbol(&op).unwrap().value, prov.structural_index, "seed {seed}");
        }
    }

    #[test]
    fn fixed_zoo_members_validate() {
        for member in fixed_zoo::<f64>() {
            assert!(
                validate_contraction(&member.op, &ValidationConfig::default()).pass,
                "{} fails the contraction check",
                member.name
            );
            assert!(validate_almost_unitary(&member.op), "{} not almost unitary", member.name);
            assert_eq!(
                index_symbol(&member.op).unwrap().value,
                member.expected_index,
                "{} index",
                member.name
            );
        }
    }
}
