//! Exact scalar types.
//!
//! Everything in this crate is computed exactly. Projective points are pairs
//! of integers and rationals are fractions of them, so the scalar parameter is
//! an integer ring rather than a field. `BigInt` is the default; fixed-width
//! integers work for small inputs and are useful in benchmarks.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Signed;

/// An exact signed integer type usable as homogeneous coordinate.
pub trait Scalar:
    Integer + Signed + Clone + Hash + Debug + Display + FromStr + From<i64> + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + From<i64>
        + Send
        + Sync
        + 'static
{
}
