//! Correlation limits along arithmetic progressions.
//!
//! For trigonometric polynomials `f_1, ..., f_s` the correlation
//! `∫ f_1(T_1^n x) ⋯ f_s(T_s^n x) dm` is a finite sum over character tuples
//! `(χ_1, ..., χ_s)` of coefficient products, where a tuple contributes
//! exactly when `Σ T̂_k^n χ_k = 0`. Once every eigenvalue ratio that is a
//! root of unity has been killed by passing to a power `T_k^l`, the
//! indicator is eventually constant along each residue class mod `l`, so
//! the limit exists per class and is computed exactly here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{cyclotomic, euler_phi, phi_bounded_orders};
use crate::error::{Error, Result};
use crate::{ComplexRational, EpiSet, IntMat, IntPoly, IntVec, RatPoly};

/// Finite Fourier series with exact complex-rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<IntVec, ComplexRational>,
}

impl TrigPoly {
    pub fn new(dim: usize) -> Self {
        TrigPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: ComplexRational) -> Self {
        let mut p = TrigPoly::new(dim);
        p.add_term(vec![BigInt::zero(); dim], c).expect("dimension matches");
        p
    }

    /// The single character `x ↦ e^{2πi <chi, x>}`.
    pub fn character(chi: IntVec) -> Self {
        let mut p = TrigPoly::new(chi.len());
        p.add_term(chi, ComplexRational::one()).expect("dimension matches");
        p
    }

    /// Adds `c · χ`, merging with an existing coefficient; zero results are
    /// dropped.
    pub fn add_term(&mut self, chi: IntVec, c: ComplexRational) -> Result<()> {
        if chi.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: chi.len() });
        }
        let entry = self.terms.entry(chi).or_insert_with(ComplexRational::zero);
        *entry = &*entry + c;
        self.terms.retain(|_, v| !v.is_zero());
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<IntVec, ComplexRational> {
        &self.terms
    }

    /// Fourier coefficient at `chi` (zero when absent).
    pub fn coefficient(&self, chi: &[BigInt]) -> ComplexRational {
        self.terms.get(chi).cloned().unwrap_or_else(ComplexRational::zero)
    }

    /// Mean value: the coefficient of the trivial character.
    pub fn mean(&self) -> ComplexRational {
        self.coefficient(&vec![BigInt::zero(); self.dim])
    }

    pub fn scale(&self, c: &ComplexRational) -> Self {
        let mut p = TrigPoly::new(self.dim);
        for (chi, v) in &self.terms {
            let prod = v * c;
            if !prod.is_zero() {
                p.terms.insert(chi.clone(), prod);
            }
        }
        p
    }
}

/// Modulus `l` for which all root-of-unity eigenvalue ratios disappear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spec2Modulus {
    pub modulus: u64,
    /// Orders of the root-of-unity ratios that were found.
    pub orders: Vec<u64>,
    pub totient: u64,
}

/// Limits for every residue class modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressionLimit {
    pub modulus: u64,
    pub values: Vec<ComplexRational>,
}

// Sylvester matrix of f (degree m) and g (formal degree n).
fn sylvester(f: &[BigInt], g: &[BigInt]) -> IntMat {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut s = IntMat::zeros(size, size);
    for r in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[(r, r + k)] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[(n + r, r + k)] = c.clone();
        }
    }
    s
}

/// `Res_y(p(y), q(x y))` as a polynomial in `x`; its roots are the ratios
/// `μ / λ` with `p(λ) = 0`, `q(μ) = 0`.
pub fn ratio_polynomial(p: &IntPoly, q: &IntPoly) -> RatPoly {
    let dp = p.degree().expect("nonzero polynomial");
    let dq = q.degree().expect("nonzero polynomial");
    let deg = dp * dq;
    let points: Vec<(BigRational, BigRational)> = (0..=deg as i64)
        .map(|x0| {
            let x0 = BigInt::from(x0);
            // q(x0 y) keeps its formal degree even when x0 = 0.
            let mut scaled = Vec::with_capacity(dq + 1);
            let mut factor = BigInt::one();
            for c in q.coeffs() {
                scaled.push(c * &factor);
                factor *= &x0;
            }
            let res = sylvester(p.coeffs(), &scaled).det_bareiss();
            (BigRational::from_integer(x0), BigRational::from_integer(res))
        })
        .collect();
    RatPoly::interpolate(&points)
}

/// Least common multiple of the orders `n` (with `phi(n) <= d^2`) of all
/// eigenvalue ratios `μ / λ`, `μ, λ ∈ ∪_k Spec(T_k)`, that are roots of
/// unity.
pub fn spec2_exponent(family: &EpiSet) -> Result<Spec2Modulus> {
    let d = family.dim();
    let candidates = phi_bounded_orders((d * d) as u64)?.orders;
    let charpolys: Vec<IntPoly> = family.maps().iter().map(IntMat::charpoly).collect();
    let cyclos: Vec<RatPoly> =
        candidates.iter().map(|&n| cyclotomic(n).map(|p| p.to_fraction())).collect::<Result<_>>()?;
    let mut found = vec![false; candidates.len()];
    for p in &charpolys {
        for q in &charpolys {
            let r = ratio_polynomial(p, q);
            for (idx, phi_n) in cyclos.iter().enumerate() {
                if !found[idx] && r.gcd(phi_n)?.degree().is_some_and(|k| k > 0) {
                    found[idx] = true;
                }
            }
        }
    }
    let orders: Vec<u64> =
        candidates.iter().zip(&found).filter(|(_, &f)| f).map(|(&n, _)| n).collect();
    let modulus = orders.iter().fold(1u64, |acc, &n| acc.lcm(&n));
    Ok(Spec2Modulus { modulus, totient: euler_phi(modulus)?, orders })
}

fn check_chars(family: &EpiSet, chars: &[IntVec]) -> Result<()> {
    if chars.len() != family.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} characters for {} maps",
            chars.len(),
            family.len()
        )));
    }
    for c in chars {
        if c.len() != family.dim() {
            return Err(Error::DimensionMismatch { expected: family.dim(), found: c.len() });
        }
    }
    Ok(())
}

/// Limit along `n ≡ residue (mod l)` of `∫ Π χ_k(T_k^n x) dm`: `true` when
/// `Σ T̂_k^n χ_k` vanishes on the whole progression.
///
/// The progression values obey a reversible recurrence of order at most
/// `s d`, so vanishing at the first `s d + 1` terms is checked and then
/// re-asserted on the next `2 s d`.
pub fn character_limit(family: &EpiSet, l: u64, residue: u64, chars: &[IntVec]) -> Result<bool> {
    if l == 0 {
        return Err(Error::NonPositive);
    }
    if residue >= l {
        return Err(Error::InvalidParameter(format!("residue {residue} not below modulus {l}")));
    }
    check_chars(family, chars)?;
    let duals = family.duals();
    let steps: Vec<IntMat> = duals.iter().map(|m| m.pow(l)).collect();
    let mut current: Vec<IntVec> =
        duals.iter().zip(chars).map(|(m, c)| m.pow(residue).mul_vec(c)).collect();
    let horizon = family.len() * family.dim();
    for j in 0..=3 * horizon {
        let sum = current.iter().fold(vec![BigInt::zero(); family.dim()], |mut acc, v| {
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
            acc
        });
        let zero = sum.iter().all(Zero::is_zero);
        if !zero {
            if j <= horizon {
                return Ok(false);
            }
            return Err(Error::StabilizationViolated {
                exponent: l,
                detail: format!("character sum nonzero at progression index {j}"),
            });
        }
        current = steps.iter().zip(&current).map(|(m, v)| m.mul_vec(v)).collect();
    }
    Ok(true)
}

fn residue_limit(family: &EpiSet, fs: &[TrigPoly], l: u64, residue: u64) -> Result<ComplexRational> {
    let supports: Vec<Vec<(&IntVec, &ComplexRational)>> =
        fs.iter().map(|f| f.terms().iter().collect()).collect();
    if supports.iter().any(Vec::is_empty) {
        return Ok(ComplexRational::zero());
    }
    let mut total = ComplexRational::zero();
    let mut idx = vec![0usize; fs.len()];
    loop {
        let chars: Vec<IntVec> =
            idx.iter().zip(&supports).map(|(&i, s)| s[i].0.clone()).collect();
        if character_limit(family, l, residue, &chars)? {
            let prod = idx
                .iter()
                .zip(&supports)
                .fold(ComplexRational::one(), |acc, (&i, s)| acc * s[i].1);
            total += prod;
        }
        // Odometer over the product of supports.
        let mut pos = fs.len();
        loop {
            if pos == 0 {
                return Ok(total);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < supports[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn check_fs(family: &EpiSet, fs: &[TrigPoly]) -> Result<()> {
    if fs.len() != family.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} functions for {} maps",
            fs.len(),
            family.len()
        )));
    }
    for f in fs {
        if f.dim() != family.dim() {
            return Err(Error::DimensionMismatch { expected: family.dim(), found: f.dim() });
        }
    }
    Ok(())
}

/// `lim_j ∫ f_1(T_1^n x) ⋯ f_s(T_s^n x) dm` over `n = residue + l j`, with
/// `l` from [`spec2_exponent`]. The residue is taken modulo `l`.
pub fn trigpoly_limit(family: &EpiSet, fs: &[TrigPoly], residue: u64) -> Result<ComplexRational> {
    check_fs(family, fs)?;
    let l = spec2_exponent(family)?.modulus;
    residue_limit(family, fs, l, residue % l)
}

/// Limits for all residue classes at once.
pub fn progression_limit(family: &EpiSet, fs: &[TrigPoly]) -> Result<ProgressionLimit> {
    check_fs(family, fs)?;
    let l = spec2_exponent(family)?.modulus;
    let values = (0..l).map(|k| residue_limit(family, fs, l, k)).collect::<Result<_>>()?;
    Ok(ProgressionLimit { modulus: l, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IntVec {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn cr(re: i64) -> ComplexRational {
        ComplexRational::new(BigRational::from_integer(re.into()), BigRational::zero())
    }

    fn fib() -> IntMat {
        IntMat::from_i64(&[&[1, 1], &[1, 0]])
    }

    fn id_negid() -> EpiSet {
        EpiSet::from_i64(&[&[&[1]], &[&[-1]]]).unwrap()
    }

    fn example_pair() -> EpiSet {
        EpiSet::from_i64(&[&[&[0, -1], &[1, 0]], &[&[0, -1], &[1, -1]]]).unwrap()
    }

    #[test]
    fn ratio_polynomial_of_rotation() {
        // Spec(S) = {i, -i}: ratios 1, 1, -1, -1 → (x - 1)^2 (x + 1)^2 up to scale.
        let p = IntPoly::from_i64(&[1, 0, 1]);
        let r = ratio_polynomial(&p, &p).monic();
        assert_eq!(r, IntPoly::from_i64(&[1, 0, -2, 0, 1]).to_fraction());
    }

    #[test]
    fn spec2_values() {
        let a = EpiSet::new(vec![fib()]).unwrap();
        assert_eq!(spec2_exponent(&a).unwrap().modulus, 1);
        let m = spec2_exponent(&id_negid()).unwrap();
        assert_eq!((m.modulus, m.totient), (2, 1));
        let st = spec2_exponent(&example_pair()).unwrap();
        assert_eq!(st.modulus, 12);
        // ±i over ±i, ω over ω^k, and the cross ratios ±i ω^k of order 12.
        assert_eq!(st.orders, vec![1, 2, 3, 12]);
    }

    #[test]
    fn character_limits() {
        let f = id_negid();
        assert!(character_limit(&f, 2, 0, &[iv(&[0]), iv(&[0])]).unwrap());
        assert!(character_limit(&f, 2, 1, &[iv(&[1]), iv(&[1])]).unwrap());
        assert!(!character_limit(&f, 2, 0, &[iv(&[1]), iv(&[1])]).unwrap());
        let a = fib();
        let g = EpiSet::new(vec![a.clone(), a.pow(2)]).unwrap();
        assert!(!character_limit(&g, 1, 0, &[iv(&[1, 0]), iv(&[0, 1])]).unwrap());
        assert!(character_limit(&f, 2, 0, &[iv(&[1, 0]), iv(&[1])]).is_err());
    }

    #[test]
    fn constants_multiply() {
        let f = id_negid();
        let fs = [TrigPoly::constant(1, cr(3)), TrigPoly::constant(1, cr(-2))];
        assert_eq!(trigpoly_limit(&f, &fs, 0).unwrap(), cr(-6));
    }

    #[test]
    fn character_pair_limits_by_residue() {
        let f = id_negid();
        let fs = [TrigPoly::character(iv(&[1])), TrigPoly::character(iv(&[1]))];
        let lim = progression_limit(&f, &fs).unwrap();
        assert_eq!(lim.modulus, 2);
        assert_eq!(lim.values, vec![cr(0), cr(1)]);
    }

    #[test]
    fn mixing_pair_zero_mean_limit_vanishes() {
        let a = fib();
        let g = EpiSet::new(vec![a.clone(), a.pow(2)]).unwrap();
        let mut f1 = TrigPoly::character(iv(&[1, 0]));
        f1.add_term(iv(&[0, -1]), cr(2)).unwrap();
        let f2 = TrigPoly::character(iv(&[1, 1]));
        let lim = progression_limit(&g, &[f1, f2]).unwrap();
        assert!(lim.values.iter().all(Zero::is_zero));
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let mut p = TrigPoly::character(iv(&[1]));
        p.add_term(iv(&[1]), cr(-1)).unwrap();
        assert!(p.terms().is_empty());
    }
}
