//! Structured operators on l2(N) with computable curvature and Fredholm
//! index.
//!
//! Almost-unitary contractions are represented exactly as direct sums of
//! quasi-Toeplitz leaves (Laurent-polynomial symbol plus finite correction
//! block). On top of that kernel sit:
//!
//! - a curvature engine with three equivalent formulas (defect-trace limit,
//!   Cesaro ratio, circle-integral of the resolvent kernel),
//! - an index engine with three independent routes (symbol winding,
//!   commutator trace, b-sequence probe),
//! - a zoo of constructors with known ground truth plus a seeded random
//!   generator,
//! - a verification harness that checks the index/curvature relation and the
//!   trace identities behind it, with a deterministic report format.
//!
//! The core is generic over the real scalar (`f32`/`f64`); concrete aliases
//! for the `f64` instantiation are exported at the crate root.

pub mod curvature;
pub mod error;
pub mod harness;
pub mod index;
pub mod kernel;
pub mod linalg;
pub mod oplang;
pub mod scalar;
pub mod tol;
pub mod zoo;

pub use error::{OpError, Result};
pub use kernel::{
    commutator, defect_factors, defect_sqrt, defects, one_minus_prod, resolvent_apply,
    validate_almost_unitary, validate_contraction, Column, CorrectionBlock, DefectFactor,
    DefectPair, LaurentSymbol, Operator, QuasiToeplitzOperator, ValidationConfig,
};
pub use scalar::{cpx, Cpx, Real};

/// Complex scalar at the default `f64` precision.
pub type C64 = Cpx<f64>;
/// Operator at the default `f64` precision.
pub type Op64 = Operator<f64>;
/// Quasi-Toeplitz leaf at the default `f64` precision.
pub type Leaf64 = QuasiToeplitzOperator<f64>;
/// Laurent symbol at the default `f64` precision.
pub type Symbol64 = LaurentSymbol<f64>;
