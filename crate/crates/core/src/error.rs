//! Error types shared across the operator kernel and the engines.

use thiserror::Error;

/// Errors produced by kernel operations and the engines built on them.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum OpError {
    /// Binary arithmetic between operators with different direct-sum shapes.
    #[error("direct-sum shape mismatch: left has {left} component(s), right has {right}")]
    ShapeMismatch { left: usize, right: usize },

    /// Trace requested for an operator whose symbol is not identically zero;
    /// the diagonal sum diverges in this representation. The caller must
    /// assemble a cancelling combination before tracing.
    #[error("trace undefined: {detail}")]
    TraceUndefined { detail: String },

    /// A defect block has an eigenvalue below the PSD jitter floor: the
    /// operator is not a contraction to working tolerance.
    #[error("defect block is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    /// A block that must be Hermitian is not, beyond tolerance.
    #[error("block is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// Neumann series requested at a point outside the open unit disc.
    #[error("Neumann series divergent: |zeta| = {modulus:.6} >= 1")]
    DivergentSeries { modulus: f64 },

    /// The operator fails the almost-unitary requirement.
    #[error("not almost unitary: {reason}")]
    NotAlmostUnitary { reason: String },

    /// The operator fails the contraction requirement.
    #[error("not a contraction: {reason}")]
    NotContraction { reason: String },

    /// Two algebraically equal computation routes disagreed beyond tolerance.
    #[error("cross-check failed for {what} at n = {n}: {lhs:.17e} vs {rhs:.17e}")]
    CrossCheckFailed { what: String, n: usize, lhs: f64, rhs: f64 },

    /// A configuration violates its own invariants.
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
}

pub type Result<T> = std::result::Result<T, OpError>;
