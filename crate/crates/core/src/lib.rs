//! Exact decision procedures for mixing properties of finite families of
//! epimorphisms of the torus `T^d = R^d / Z^d`.
//!
//! An epimorphism is an integer matrix with nonzero determinant. Its dual
//! action on the character group `Z^d` is the transpose. Every procedure here
//! works with exact integer and rational arithmetic; the only floating point
//! values are the Monte Carlo estimates in [`oracle`].

pub mod cyclo;
pub mod error;
pub mod exact;
pub mod examples;
pub mod groups;
pub mod limits;
pub mod mixing;
pub mod oracle;
pub mod scalar;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use exact::{Matrix, Poly};
pub use mixing::{EpiSet, MixingVerdict};

/// Square matrix of big integers; an epimorphism in the standard basis.
pub type IntMat = Matrix<BigInt>;
/// Matrix of exact rationals.
pub type RatMat = Matrix<BigRational>;
pub type IntVec = Vec<BigInt>;
pub type RatVec = Vec<BigRational>;
pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;
/// Exact complex rational `a + bi`.
pub type ComplexRational = Complex<BigRational>;
