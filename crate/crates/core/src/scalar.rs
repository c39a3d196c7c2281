//! Integer scalar abstraction for exact threshold arithmetic.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, PrimInt, Unsigned};

/// Unsigned machine integer used for thresholds, sizes and overlaps.
///
/// Every comparison against the threshold is done by cross-multiplication in
/// this type, so it must be wide enough to hold `numerator * (x + y)` and
/// `numerator + denominator` for the sizes in play. `u32` is plenty for
/// signatures of a few dozen elements and a decimal threshold with up to four
/// fractional digits; the crate defaults to `u64`.
pub trait Scalar:
    PrimInt + Unsigned + Integer + CheckedAdd + CheckedMul + Hash + Debug + Display + Send + Sync
{
    /// Lossless conversion from a size. Panics when the size does not fit.
    fn from_size(n: usize) -> Self {
        Self::from(n).unwrap_or_else(|| panic!("size {n} does not fit the scalar type"))
    }

    /// Conversion back to a size. Panics when the value does not fit.
    fn to_size(self) -> usize {
        self.to_usize()
            .unwrap_or_else(|| panic!("value {self} does not fit usize"))
    }
}

impl<T> Scalar for T where
    T: PrimInt + Unsigned + Integer + CheckedAdd + CheckedMul + Hash + Debug + Display + Send + Sync
{
}
