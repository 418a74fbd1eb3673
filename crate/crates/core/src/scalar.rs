use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{FromPrimitive, NumAssign, PrimInt, Signed, ToPrimitive};

/// Signed integer scalar for component degrees.
///
/// Multidegree arithmetic is agnostic to the width of the underlying
/// integer; any signed primitive works. The crate-level alias [`crate::Deg`]
/// picks `i64` for its own pipelines.
pub trait Degree:
    PrimInt
    + Signed
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Conversion from small counts (cut sizes, incidence tallies).
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count exceeds degree scalar range")
    }
}

impl<T> Degree for T where
    T: PrimInt
        + Signed
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Default
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
