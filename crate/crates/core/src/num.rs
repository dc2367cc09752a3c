use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point type used for scores.
///
/// Counts and ratios are computed on integers and converted once, so `f32`
/// and `f64` produce the same orderings on desk-scale data.
pub trait Scalar:
    Float + NumAssign + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize fits in a float")
    }

    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 converts")
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl<T> Scalar for T where
    T: Float + NumAssign + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}
