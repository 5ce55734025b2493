use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Scalar type the whole crate is generic over.
///
/// `f32` and `f64` satisfy this out of the box. The solver only needs a real
/// field with primitive conversions; everything else (matrix algebra,
/// eigendecompositions, RNG draws) is built on top of these bounds.
pub trait Real: RealField + FromPrimitive + ToPrimitive + Copy {
    /// Shorthand for lossy conversion from `f64` constants.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }
}

impl<T> Real for T where T: RealField + FromPrimitive + ToPrimitive + Copy {}
