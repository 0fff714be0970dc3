use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar backing the linear algebra and observables.
pub trait Real: Float + FloatConst + FromPrimitive + Sum + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{}
