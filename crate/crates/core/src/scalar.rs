//! Scalar traits shared by the numerical modules.
//!
//! Element-level algebra only needs field operations, so it is written
//! against [`Field`], which exact rational types satisfy as well. Everything
//! that needs `sqrt`, trigonometry or FFTs is written against [`Real`].

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Ordered field: `+ - * /`, negation and comparison.
///
/// Implemented for every type that provides those operations, including
/// `num_rational::Ratio<i128>`.
pub trait Field: Num + Copy + PartialOrd + Neg<Output = Self> + Debug {
    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn abs_val(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

impl<T> Field for T where T: Num + Copy + PartialOrd + Neg<Output = T> + Debug {}

/// Floating-point scalar used by the mesh, solver and signal modules.
pub trait Real:
    Field
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Display
    + LowerExp
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + rustfft::FftNum
    + 'static
{
    /// Lossy conversion from an `f64` literal or configuration value.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
