//! Scalar abstractions shared by the analytic layers.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// Field-like scalar: enough arithmetic to derive splitting ratios.
///
/// Implemented for floats and for exact rationals such as
/// `num_rational::Ratio<i64>`.
pub trait Field: Num + Copy + PartialOrd + Debug {}

impl<T> Field for T where T: Num + Copy + PartialOrd + Debug {}

/// Real floating-point scalar used by the optics, network and detector math.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar.
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
