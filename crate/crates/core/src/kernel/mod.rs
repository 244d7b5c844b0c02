//! Exact arithmetic for semi-infinite operators on l2(N) in the
//! quasi-Toeplitz algebra: Laurent-polynomial symbol plus finite correction
//! block, closed under addition, multiplication and adjoint, with exact
//! traces of finitely supported operators.

pub mod column;
pub mod correction;
pub mod defect;
pub mod leaf;
pub mod operator;
pub mod resolvent;
pub mod symbol;
pub mod validate;

pub use column::Column;
pub use correction::CorrectionBlock;
pub use defect::{defect_factors, defect_sqrt, defects, DefectFactor, DefectPair};
pub use leaf::QuasiToeplitzOperator;
pub use operator::{commutator, one_minus_prod, Operator};
pub use resolvent::{resolvent_apply, resolvent_column};
pub use symbol::LaurentSymbol;
pub use validate::{
    validate_almost_unitary, validate_contraction, ContractionCertificate, LeafCertificate,
    ValidationConfig,
};
