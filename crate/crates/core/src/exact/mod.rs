//! Arbitrary-precision vectors, matrices and univariate polynomials, and the
//! exact linear algebra every decision procedure is built on.

pub mod linalg;
pub mod matrix;
pub mod poly;

pub use linalg::{
    canonical_span_basis, clear_denominators, complete_to_unimodular, hermite_normal_form,
    integer_kernel, integer_kernel_lattice, lattice_saturate, primitive, rank, rational_kernel,
};
pub use matrix::Matrix;
pub use poly::{poly_gcd, sturm_real_root_count, Poly};

use crate::{IntMat, IntPoly};

/// `det(xI - m)`, computed without leaving the integers.
pub fn charpoly(m: &IntMat) -> IntPoly {
    m.charpoly()
}
