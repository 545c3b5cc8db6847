//! Scalar traits for the generic matrix and polynomial containers.
//!
//! The decision procedures only ever instantiate these with `BigInt` and
//! `BigRational`, but the containers are written against `num-traits` so
//! that small fixed-width types (`i64`, `Ratio<i64>`, `f64`) work as well.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// A commutative ring element usable as a matrix or polynomial entry.
pub trait Scalar: Clone + PartialEq + Debug + Num + Neg<Output = Self> {}

impl<T> Scalar for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> {}

/// Marker for scalars whose `Div` is an exact field inverse.
///
/// Integer types are deliberately excluded: their `Div` truncates.
pub trait Field: Scalar {}

impl<T> Field for Ratio<T> where T: Clone + Integer + Signed + Debug {}
impl Field for f64 {}
impl Field for f32 {}

/// Integer types that can be lifted into their field of fractions.
pub trait IntegerScalar: Scalar + Integer + Signed {
    type Fraction: Field;

    fn to_fraction(&self) -> Self::Fraction;

    /// `None` unless the fraction is integral.
    fn from_fraction(f: &Self::Fraction) -> Option<Self>;
}

impl IntegerScalar for BigInt {
    type Fraction = Ratio<BigInt>;

    fn to_fraction(&self) -> Self::Fraction {
        Ratio::from_integer(self.clone())
    }

    fn from_fraction(f: &Self::Fraction) -> Option<Self> {
        f.is_integer().then(|| f.to_integer())
    }
}

impl IntegerScalar for i64 {
    type Fraction = Ratio<i64>;

    fn to_fraction(&self) -> Self::Fraction {
        Ratio::from_integer(*self)
    }

    fn from_fraction(f: &Self::Fraction) -> Option<Self> {
        f.is_integer().then(|| f.to_integer())
    }
}
