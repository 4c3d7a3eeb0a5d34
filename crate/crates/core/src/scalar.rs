//! Scalar traits the tensor and matrix types are generic over.
//!
//! Everything that touches vertexhood is computed in [`Rational`], an
//! arbitrary-precision fraction kept in lowest terms. Structural operations
//! (indexing, planes, products, group actions, permanents) only need ring
//! arithmetic and an order, so they also accept machine integers and floats.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

/// Arbitrary-precision rational with positive denominator, always reduced.
pub type Rational = BigRational;

/// Ring-like scalar usable as a tensor entry.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + Debug + Send + Sync {}

/// Exact field: every nonzero element has an exact inverse and equality is
/// structural. Implemented for the `Ratio` family only; floats are
/// deliberately left out.
pub trait Field: Scalar + Signed {}

impl<I> Field for Ratio<I> where I: Integer + Clone + Signed + Debug + Send + Sync {}

/// `num / den` as a reduced rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Nearest `f64`, for display only.
pub fn approx(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// Small integer scalars (`i64`, `u8`, ...) convert losslessly into rationals.
pub fn to_rational<T: Into<BigInt> + Clone>(value: &T) -> Rational {
    Rational::from_integer(value.clone().into())
}
