use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point type the numeric algorithms and oracles are generic over.
pub trait Scalar:
    Float + FromPrimitive + Default + Send + Sync + Debug + Display + 'static
{
    fn count(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("u64 converts to a float")
    }

    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 converts to a float")
    }
}

impl<T: Float + FromPrimitive + Default + Send + Sync + Debug + Display + 'static> Scalar for T {}
