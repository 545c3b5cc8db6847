use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, IntegerScalar, Scalar};

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial
/// has an empty coefficient list and `degree() == None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `x - root`
    pub fn linear_root(root: T) -> Self {
        Poly::new(vec![-root, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for nonzero constants.
    pub fn is_unit_degree(&self) -> bool {
        self.degree() == Some(0)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        let mut k = T::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for c in self.coeffs.iter().skip(1) {
            k = k + T::one();
            out.push(c.clone() * k.clone());
        }
        Poly::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `p(c x)`
    pub fn scale_argument(&self, c: &T) -> Self {
        let mut factor = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * factor.clone());
            factor = factor * c.clone();
        }
        Poly::new(out)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field> Poly<T> {
    /// Scales to leading coefficient one. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let lc = lc.clone();
                Poly::new(self.coeffs.iter().map(|c| c.clone() / lc.clone()).collect())
            }
        }
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![T::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + dd].clone() / lc.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// `x^e mod modulus` by repeated squaring.
    pub fn x_pow_mod(e: u64, modulus: &Self) -> Self {
        let mut result = Poly::one().rem(modulus);
        let mut base = Poly::monomial(T::one(), 1).rem(modulus);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(modulus);
            }
        }
        result
    }

    /// Monic greatest common divisor. `gcd(p, 0)` is `monic(p)`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            // Keeping the remainders monic stops coefficient growth.
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Lagrange interpolation through `(x_i, y_i)`; the `x_i` must be distinct.
    pub fn interpolate(points: &[(T, T)]) -> Self {
        let mut acc = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Poly::one();
            let mut denom = T::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = &basis * &Poly::linear_root(xj.clone());
                    denom = denom * (xi.clone() - xj.clone());
                }
            }
            acc = &acc + &basis.scale(&(yi.clone() / denom));
        }
        acc
    }
}

impl<T: IntegerScalar> Poly<T> {
    pub fn to_fraction(&self) -> Poly<T::Fraction> {
        Poly::new(self.coeffs.iter().map(IntegerScalar::to_fraction).collect())
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn exact_div_monic(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        if !divisor.coeffs[dd].is_one() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![T::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::new(quot))
    }
}

impl Poly<BigInt> {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl Poly<BigRational> {
    /// Rescales a rational polynomial to a primitive integer polynomial with
    /// positive leading coefficient.
    pub fn to_primitive_integer(&self) -> Poly<BigInt> {
        if self.is_zero() {
            return Poly::zero();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        Poly::new(ints.into_iter().map(|c| c / &content * &sign).collect())
    }
}

impl<'a, T: Scalar> Add<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &'a Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Sub<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &'a Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Mul<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &'a Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})x", c)?,
                _ => write!(f, "({})x^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Monic gcd over the rationals.
pub fn poly_gcd(p: &Poly<BigRational>, q: &Poly<BigRational>) -> Result<Poly<BigRational>> {
    p.gcd(q)
}

/// Number of distinct real roots of a squarefree-or-not polynomial, counted
/// with a Sturm sequence over the whole real line.
pub fn sturm_real_root_count(p: &Poly<BigRational>) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        seq.push(-&r);
    }
    seq.pop();
    // Sign at +inf is the leading sign; at -inf it flips with odd degree.
    let sign_changes = |at_neg_inf: bool| {
        let signs: Vec<bool> = seq
            .iter()
            .map(|q| {
                let pos = q.leading().unwrap().is_positive();
                if at_neg_inf && q.degree().unwrap() % 2 == 1 {
                    !pos
                } else {
                    pos
                }
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    Ok(sign_changes(true) - sign_changes(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{IntPoly, RatPoly};

    fn rp(c: &[i64]) -> RatPoly {
        IntPoly::from_i64(c).to_fraction()
    }

    #[test]
    fn gcd_divides_x4_minus_1() {
        let g = poly_gcd(&rp(&[1, 0, 1]), &rp(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(g, rp(&[1, 0, 1]));
    }

    #[test]
    fn golden_ratio_coprime_to_x12_minus_1() {
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let g = poly_gcd(&rp(&[-1, -1, 1]), &rp(&c)).unwrap();
        assert_eq!(g, RatPoly::one());
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let p = rp(&[4, 6, 2]);
        assert_eq!(poly_gcd(&p, &RatPoly::zero()).unwrap(), rp(&[2, 3, 1]));
        assert_eq!(poly_gcd(&RatPoly::zero(), &p).unwrap(), rp(&[2, 3, 1]));
    }

    #[test]
    fn gcd_rejects_two_zeros() {
        assert_eq!(poly_gcd(&RatPoly::zero(), &RatPoly::zero()), Err(Error::BothZero));
    }

    #[test]
    fn zero_polynomial_degree_sentinel() {
        assert_eq!(IntPoly::zero().degree(), None);
        assert_eq!(IntPoly::from_i64(&[3, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn x_pow_mod_matches_division() {
        let m = rp(&[1, 1, 1]);
        let mut c = vec![0i64; 8];
        c[7] = 1;
        assert_eq!(RatPoly::x_pow_mod(7, &m), rp(&c).rem(&m));
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = rp(&[3, -1, 0, 2]);
        let pts: Vec<_> = (0..4)
            .map(|x| {
                let x = BigRational::from_integer(x.into());
                (x.clone(), p.eval(&x))
            })
            .collect();
        assert_eq!(RatPoly::interpolate(&pts), p);
    }

    #[test]
    fn exact_monic_division() {
        let x4m1 = IntPoly::from_i64(&[-1, 0, 0, 0, 1]);
        let q = x4m1.exact_div_monic(&IntPoly::from_i64(&[1, 0, 1])).unwrap();
        assert_eq!(q, IntPoly::from_i64(&[-1, 0, 1]));
        assert!(x4m1.exact_div_monic(&IntPoly::from_i64(&[1, 1, 1])).is_none());
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(sturm_real_root_count(&rp(&[1, 0, 1])).unwrap(), 0);
        assert_eq!(sturm_real_root_count(&rp(&[-1, -1, 1])).unwrap(), 2);
        // (x-1)^2 (x+2): two distinct real roots
        assert_eq!(sturm_real_root_count(&rp(&[2, -3, 0, 1])).unwrap(), 2);
    }

    #[test]
    fn primitive_integer_rescaling() {
        let p = RatPoly::new(vec![
            BigRational::new((-1).into(), 2.into()),
            BigRational::new(1.into(), 3.into()),
        ]);
        assert_eq!(p.to_primitive_integer(), IntPoly::from_i64(&[-3, 2]));
    }
}
