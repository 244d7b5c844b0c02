//! Working tolerances, stated for `f64` and documented where they bite.
//!
//! The representation keeps symbols exact (coefficients stay in the set
//! generated by the constructors), so most thresholds only have to absorb
//! floating-point drift in correction-block arithmetic.

/// Canonical trim: trailing rows/columns of a correction block are dropped
/// when every entry has modulus at most this factor times the block
/// max-modulus.
pub const CANONICAL_TRIM: f64 = 1e-15;

/// Product trim: after a product is assembled inside its safe window,
/// entries that equal the symbol value to this absolute tolerance are
/// dropped from the correction.
pub const PRODUCT_TRIM: f64 = 1e-13;

/// Hermitian deviation allowed in defect operators and defect-sqrt inputs.
pub const HERMITIAN_TOL: f64 = 1e-13;

/// Eigenvalues of a defect block above this floor (and below zero) are
/// treated as floating-point jitter and clipped to zero; anything below it
/// means the operator is not a contraction to working tolerance.
pub const PSD_EIGEN_FLOOR: f64 = -1e-10;

/// Residual allowed in the factor check `max |Delta^2 - D|`.
pub const DEFECT_SQRT_RESIDUAL: f64 = 1e-10;

/// Slack on the contraction test: sigma_max and |symbol(z)| may exceed 1 by
/// at most this much.
pub const CONTRACTION_SLACK: f64 = 1e-10;

/// Number of unit-circle samples in the symbol contraction test.
pub const CIRCLE_SAMPLES: usize = 512;

/// Extra truncation rows added to the safe window for the sigma_max test.
pub const TRUNCATION_PAD: usize = 16;

/// Modulus deviation from 1 allowed for a monomial symbol coefficient in
/// the structural index route.
pub const UNIMODULAR_TOL: f64 = 1e-10;

/// Deviation from unitarity allowed for an embedded finite block.
pub const UNITARY_TOL: f64 = 1e-12;

/// Imaginary part allowed in a trace that is real by construction.
pub const IMAG_TRACE_TOL: f64 = 1e-11;

/// Per-term agreement required between the two algebraic forms of the
/// a-sequence and between the two factor orders of the b-sequence.
pub const SEQUENCE_CROSS_CHECK: f64 = 1e-10;

/// An integer-valued index result whose raw trace is further than this from
/// the nearest integer is flagged unreliable.
pub const INDEX_RESIDUAL_TOL: f64 = 1e-6;

/// Default residual bound on `index - (K(adjoint) - K)`.
pub const THEOREM_TOL: f64 = 1e-6;

/// Default residual bound on the proof identities over n <= 20.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Default bound on `max_n |b_n - b_0|`.
pub const B_CONSTANCY_TOL: f64 = 1e-10;

/// Purity diagnostic at or below this value is reported as "pure to
/// tolerance".
pub const PURITY_TOL: f64 = 1e-6;

/// Bound on |K(adjoint)| for operators that test pure (the pure-case
/// recovery check).
pub const REMARK1_ADJOINT_TOL: f64 = 1e-8;

/// Richardson extrapolation residual above which the integral formula
/// falls back to the last plain value and is flagged non-converged.
pub const RICHARDSON_RESIDUAL: f64 = 1e-6;
