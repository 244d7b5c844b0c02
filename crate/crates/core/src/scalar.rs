//! Scalar abstraction. The whole algebra is generic over the real field;
//! matrix entries are `num_complex::Complex` over that field.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar type the operator algebra is generic over (`f32` or `f64`).
///
/// Tolerance constants in [`crate::tol`] are stated for `f64`; they are
/// converted through [`Real::real`] so the same code instantiates at `f32`
/// for smoke testing, at reduced precision.
pub trait Real:
    Float + FromPrimitive + NumAssign + Send + Sync + std::fmt::Debug + std::fmt::Display + 'static
{
    /// Convert an `f64` constant (tolerances, schedule defaults) into `Self`.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("constant must be representable in the scalar type")
    }

    /// Lossy view of the value as `f64`, for reporting and fingerprints.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("real scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over the generic real field.
pub type Cpx<F> = Complex<F>;

/// Complex constant from `f64` parts.
pub fn cpx<F: Real>(re: f64, im: f64) -> Cpx<F> {
    Complex::new(F::real(re), F::real(im))
}

/// Complex zero.
pub fn czero<F: Real>() -> Cpx<F> {
    Complex::new(F::zero(), F::zero())
}

/// Complex one.
pub fn cone<F: Real>() -> Cpx<F> {
    Complex::new(F::one(), F::zero())
}
