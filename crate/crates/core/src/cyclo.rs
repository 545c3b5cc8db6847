//! Euler totients, cyclotomic polynomials and root-of-unity detection.
//!
//! A root of unity that is an eigenvalue of a `d x d` rational matrix has
//! degree at most `d` over `Q`, so its order `n` satisfies `phi(n) <= d`.
//! The least common multiple of all such `n` therefore annihilates every
//! such eigenvalue, and a single gcd with `x^M - 1` detects them all.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{IntPoly, RatPoly};

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    Ok(phi)
}

/// All `n >= 1` with `phi(n) <= bound`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSet {
    pub bound: u64,
    pub orders: Vec<u64>,
}

impl OrderSet {
    pub fn contains(&self, n: u64) -> bool {
        self.orders.binary_search(&n).is_ok()
    }

    pub fn max(&self) -> u64 {
        *self.orders.last().expect("order sets always contain 1")
    }

    pub fn lcm(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| acc.lcm(&n))
    }
}

/// Upper end of the search range for `phi(n) <= bound`, from
/// `phi(n) >= sqrt(n / 2)`.
pub fn search_limit(bound: u64) -> u64 {
    2 * bound * bound + 2
}

pub fn phi_bounded_orders(bound: u64) -> Result<OrderSet> {
    if bound == 0 {
        return Err(Error::NonPositive);
    }
    let mut orders = Vec::new();
    for n in 1..=search_limit(bound) {
        if euler_phi(n)? <= bound {
            orders.push(n);
        }
    }
    Ok(OrderSet { bound, orders })
}

/// `lcm{n : phi(n) <= d}`: every finite-order element of `GL(d, Q)` satisfies
/// `g^M = I`.
pub fn torsion_exponent(d: u64) -> Result<u64> {
    Ok(phi_bounded_orders(d)?.lcm())
}

/// The `n`-th cyclotomic polynomial, obtained from `x^n - 1` by exactly
/// dividing out `Phi_m` for every proper divisor `m` of `n`.
pub fn cyclotomic(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    let mut p = x_pow_minus_one(n);
    for m in 1..n {
        if n.is_multiple_of(m) {
            let phi_m = cyclotomic(m)?;
            p = p.exact_div_monic(&phi_m).expect("Phi_m divides x^n - 1");
        }
    }
    Ok(p)
}

/// `x^n - 1`
pub fn x_pow_minus_one(n: u64) -> IntPoly {
    let mut c = vec![num_bigint::BigInt::from(0); n as usize + 1];
    c[0] = (-1).into();
    c[n as usize] = 1.into();
    IntPoly::new(c)
}

/// True iff `p` has a root that is a root of unity, given that `p` is a
/// nonzero polynomial of degree at most `d` (so every such root has order
/// dividing `torsion_exponent(d)`).
pub fn has_root_of_unity_root(p: &RatPoly, d: u64) -> Result<bool> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg as u64 > d {
        return Err(Error::DegreeTooLarge { degree: deg, bound: d as usize });
    }
    if deg == 0 {
        return Ok(false);
    }
    let m = torsion_exponent(d)?;
    // gcd(p, x^M - 1) = gcd(p, (x^M mod p) - 1)
    let reduced = &RatPoly::x_pow_mod(m, p) - &RatPoly::one();
    let g = p.gcd(&reduced)?;
    Ok(g.degree().is_some_and(|k| k > 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small_values() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert_eq!(euler_phi(5).unwrap(), 4);
        assert_eq!(euler_phi(0), Err(Error::NonPositive));
    }

    #[test]
    fn phi_bounded_order_sets() {
        assert_eq!(phi_bounded_orders(1).unwrap().orders, vec![1, 2]);
        assert_eq!(phi_bounded_orders(2).unwrap().orders, vec![1, 2, 3, 4, 6]);
        assert_eq!(phi_bounded_orders(4).unwrap().orders, vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
    }

    #[test]
    fn torsion_exponents() {
        assert_eq!(torsion_exponent(1).unwrap(), 2);
        assert_eq!(torsion_exponent(2).unwrap(), 12);
        assert_eq!(torsion_exponent(4).unwrap(), 120);
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1).unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(4).unwrap(), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(12).unwrap(), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn root_of_unity_detection() {
        let rp = |c: &[i64]| IntPoly::from_i64(c).to_fraction();
        assert!(has_root_of_unity_root(&rp(&[-1, 1]), 1).unwrap());
        assert!(has_root_of_unity_root(&rp(&[1, 0, 1]), 2).unwrap());
        assert!(!has_root_of_unity_root(&rp(&[-1, -1, 1]), 2).unwrap());
        assert_eq!(has_root_of_unity_root(&RatPoly::zero(), 2), Err(Error::ZeroPolynomial));
        assert!(has_root_of_unity_root(&rp(&[1, 0, 0, 1]), 2).is_err());
    }
}
