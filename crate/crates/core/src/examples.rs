//! Constructive counterexample families.
//!
//! Every generator re-runs the decision engine on its output and fails with
//! [`Error::ConstructionFailed`] if the verdicts are not the advertised ones.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::linalg::{complete_to_unimodular, primitive, rank};
use crate::exact::sturm_real_root_count;
use crate::groups::lorentz_generators;
use crate::mixing::{combinations, is_ergodic, is_mixing_set};
use crate::{EpiSet, Error, IntMat, IntPoly, IntVec, RatMat, Result};

fn check_range(d: usize, s: usize) -> Result<()> {
    if d == 0 || s < 2 || s > d + 1 {
        return Err(Error::InvalidParameter(format!("need 2 <= s <= d + 1, got d = {d}, s = {s}")));
    }
    Ok(())
}

fn unit(d: usize, i: usize) -> IntVec {
    (0..d).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Every proper subset of size at least two is mixing.
fn proper_subsets_mixing(family: &EpiSet) -> Result<bool> {
    let s = family.len();
    for k in 2..s {
        for subset in combinations(s, k) {
            if !is_mixing_set(&family.subset(&subset))?.is_mixing() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `e_1, ..., e_{s-1}` followed by their sum; for `s = d + 1` this is the
/// standard basis plus the all-ones vector.
pub fn default_unipotent_vectors(d: usize, s: usize) -> Result<Vec<IntVec>> {
    check_range(d, s)?;
    let mut vs: Vec<IntVec> = (0..s - 1).map(|i| unit(d, i)).collect();
    let sum = (0..d).map(|k| BigInt::from((k < s - 1) as i64)).collect();
    vs.push(sum);
    Ok(vs)
}

pub fn gen_unipotent_family(d: usize, s: usize) -> Result<EpiSet> {
    gen_unipotent_family_with(&default_unipotent_vectors(d, s)?)
}

/// Unipotent maps whose duals are `I + N_i` with `ker N_i = <v_i>`.
///
/// Every proper subset of the `v_i` must be linearly independent. The family
/// is then not mixing exactly when the full set of `v_i` is dependent, while
/// every proper subfamily is mixing.
pub fn gen_unipotent_family_with(vs: &[IntVec]) -> Result<EpiSet> {
    let d = vs.first().ok_or(Error::EmptyFamily)?.len();
    let s = vs.len();
    check_range(d, s)?;
    if vs.iter().any(|v| v.len() != d) {
        return Err(Error::ShapeMismatch("vectors of unequal length".into()));
    }
    if vs.iter().any(|v| v.iter().all(Zero::is_zero)) {
        return Err(Error::DependentVectors);
    }
    for subset in combinations(s, s - 1) {
        let rows: Vec<IntVec> = subset.iter().map(|&i| vs[i].clone()).collect();
        if rank(&IntMat::from_rows(rows)?) != s - 1 {
            return Err(Error::DependentVectors);
        }
    }
    let dependent = rank(&IntMat::from_rows(vs.to_vec())?) < s;

    // Single Jordan block with kernel <e_1>.
    let mut jordan = IntMat::zeros(d, d);
    for k in 0..d - 1 {
        jordan[(k, k + 1)] = BigInt::one();
    }
    let id = IntMat::identity(d);
    let mut maps = Vec::with_capacity(s);
    for v in vs {
        let u = complete_to_unimodular(&primitive(v))?;
        let u_inv = u.unimodular_inverse().expect("completion is unimodular");
        let n = &(&u * &jordan) * &u_inv;
        debug_assert!(n.mul_vec(v).iter().all(Zero::is_zero));
        maps.push(&id + &n.transpose());
    }
    let family = EpiSet::new(maps)?;

    let full_mixing = is_mixing_set(&family)?.is_mixing();
    if full_mixing == dependent || !proper_subsets_mixing(&family)? {
        return Err(Error::ConstructionFailed(format!(
            "unipotent family (d = {d}, s = {s}) failed verification"
        )));
    }
    Ok(family)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinPoly {
    pub poly: IntPoly,
    /// The prime actually used; larger than requested if the sign
    /// conditions failed.
    pub q: u64,
    /// `d = 1`: the construction collapses to `x`.
    pub degenerate: bool,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    (n.max(2)..).find(|&k| is_prime(k)).expect("primes are unbounded")
}

fn eisenstein_candidate(d: usize, q: u64) -> IntPoly {
    let qb = BigInt::from(q);
    let mut p = IntPoly::one();
    for k in 1..=d {
        p = &p * &IntPoly::linear_root(&qb * BigInt::from(k));
    }
    &p + &IntPoly::constant(qb)
}

// Sign of p at (2j+1)q/2 is (-1)^(d-j) for j = 0..=d, giving d sign changes.
fn sign_conditions_hold(p: &IntPoly, d: usize, q: u64) -> bool {
    let rp = p.to_fraction();
    (0..=d).all(|j| {
        let x = BigRational::new(BigInt::from((2 * j + 1) as u64 * q), BigInt::from(2));
        let v = rp.eval(&x);
        let want_positive = (d - j).is_multiple_of(2);
        !v.is_zero() && v.is_positive() == want_positive
    })
}

fn eisenstein_at(p: &IntPoly, q: u64) -> bool {
    let qb = BigInt::from(q);
    let d = p.degree().unwrap_or(0);
    let divides = (0..d).all(|k| p.coeff(k).is_multiple_of(&qb));
    divides && !p.coeff(0).is_multiple_of(&(&qb * &qb)) && p.coeff(d).is_one()
}

/// `(x - q)(x - 2q)...(x - dq) + q`: irreducible by Eisenstein at `q`, with
/// `d` distinct real roots.
pub fn gen_eisenstein_poly(d: usize, q: u64) -> Result<EisensteinPoly> {
    if d == 0 {
        return Err(Error::NonPositive);
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if d == 1 {
        return Ok(EisensteinPoly { poly: eisenstein_candidate(1, q), q, degenerate: true });
    }
    let mut q = q;
    loop {
        let p = eisenstein_candidate(d, q);
        if sign_conditions_hold(&p, d, q) {
            if !eisenstein_at(&p, q) || sturm_real_root_count(&p.to_fraction())? != d {
                return Err(Error::ConstructionFailed(format!("Eisenstein checks failed at q = {q}")));
            }
            return Ok(EisensteinPoly { poly: p, q, degenerate: false });
        }
        q = next_prime(q + 1);
    }
}

/// Matrix of multiplication by a root in the power basis: `w = (1, λ, ...,
/// λ^{d-1})` is an eigenvector with eigenvalue `λ` for each root `λ`.
pub fn companion(p: &IntPoly) -> Result<IntMat> {
    let d = p.degree().filter(|&d| d >= 1).ok_or(Error::InvalidParameter("degree < 1".into()))?;
    if !p.coeff(d).is_one() {
        return Err(Error::InvalidParameter("polynomial must be monic".into()));
    }
    let mut m = IntMat::zeros(d, d);
    for k in 0..d - 1 {
        m[(k, k + 1)] = BigInt::one();
    }
    for k in 0..d {
        m[(d - 1, k)] = -p.coeff(k);
    }
    Ok(m)
}

/// `s` ergodic epimorphisms sharing their spectrum, conjugated by powers of
/// `A = diag(1, ..., 1, 2, ..., s - 1)` and scaled to be integral. Their duals
/// admit the relation with coefficients of `∏ (x - k)`, so the family is not
/// mixing, while every proper subfamily is.
pub fn gen_epi_family(d: usize, s: usize) -> Result<EpiSet> {
    check_range(d, s)?;
    let base = if d == 1 {
        // The d = 1 Eisenstein construction degenerates to x; any root
        // outside the unit circle serves.
        IntPoly::from_i64(&[-2, 1])
    } else {
        gen_eisenstein_poly(d, next_prime(4 * (d * d) as u64 + 1))?.poly
    };
    let m = companion(&base)?.to_fraction();
    let diag: Vec<BigRational> = (0..d)
        .map(|i| {
            let ones = d + 2 - s;
            BigRational::from_integer(BigInt::from(if i < ones { 1 } else { i + 2 - ones }))
        })
        .collect();
    let a = RatMat::diagonal(&diag);
    let a_inv = a.inverse().expect("diagonal with nonzero entries");

    let mut conj = Vec::with_capacity(s);
    let (mut left, mut right) = (RatMat::identity(d), RatMat::identity(d));
    for _ in 0..s {
        conj.push(&(&left * &m) * &right);
        left = &left * &a;
        right = &right * &a_inv;
    }
    let c = conj
        .iter()
        .flat_map(|x| x.entries().map(|e| e.denom().clone()).collect::<Vec<_>>())
        .fold(BigInt::one(), |acc, den| acc.lcm(&den));
    let maps: Vec<IntMat> = conj
        .iter()
        .map(|x| x.map(|e| (e * &c).to_integer()).transpose())
        .collect();
    let family = EpiSet::new(maps)?;

    for t in family.maps() {
        if !is_ergodic(t)? {
            return Err(Error::ConstructionFailed("non-ergodic member".into()));
        }
    }
    if is_mixing_set(&family)?.is_mixing() || !proper_subsets_mixing(&family)? {
        return Err(Error::ConstructionFailed(format!(
            "epimorphism family (d = {d}, s = {s}) failed verification"
        )));
    }
    Ok(family)
}

/// Companion matrix of `x^d - 3x^{d-1} + (-1)^d`: determinant one, and by
/// Rouché exactly one root outside the unit circle and none on it.
pub fn hyperbolic_sl(d: usize) -> Result<IntMat> {
    if d < 2 {
        return Err(Error::InvalidParameter("hyperbolic SL(d, Z) needs d >= 2".into()));
    }
    let mut c = vec![0i64; d + 1];
    c[0] = if d.is_multiple_of(2) { 1 } else { -1 };
    c[d - 1] = -3;
    c[d] = 1;
    companion(&IntPoly::from_i64(&c))
}

/// Block upper-triangular generators `[[A, C], [0, B]]`, one per `C`.
pub fn gen_block_triangular_with(a: &IntMat, b: &IntMat, cs: &[IntMat]) -> Result<EpiSet> {
    let (d1, d2) = (a.rows(), b.rows());
    if cs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut maps = Vec::with_capacity(cs.len());
    for c in cs {
        if c.rows() != d1 || c.cols() != d2 {
            return Err(Error::ShapeMismatch(format!("C must be {d1} x {d2}")));
        }
        let mut g = IntMat::zeros(d1 + d2, d1 + d2);
        for i in 0..d1 {
            for j in 0..d1 {
                g[(i, j)] = a[(i, j)].clone();
            }
            for j in 0..d2 {
                g[(i, d1 + j)] = c[(i, j)].clone();
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                g[(d1 + i, d1 + j)] = b[(i, j)].clone();
            }
        }
        maps.push(g);
    }
    let family = EpiSet::new(maps)?;
    for g in family.maps() {
        if !is_ergodic(g)? {
            return Err(Error::ConstructionFailed("non-ergodic block generator".into()));
        }
    }
    Ok(family)
}

/// Hyperbolic diagonal blocks with `C ∈ {0, E_11}`.
pub fn gen_block_triangular(d1: usize, d2: usize) -> Result<EpiSet> {
    let a = hyperbolic_sl(d1)?;
    let b = hyperbolic_sl(d2)?;
    let mut e11 = IntMat::zeros(d1, d2);
    e11[(0, 0)] = BigInt::one();
    gen_block_triangular_with(&a, &b, &[IntMat::zeros(d1, d2), e11])
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub family: EpiSet,
}

/// Quarter rotation and an order-three map; their twelfth powers coincide.
pub fn st_pair() -> EpiSet {
    EpiSet::from_i64(&[&[&[0, -1], &[1, 0]], &[&[0, -1], &[1, -1]]]).expect("valid fixture")
}

/// `2α, 2β` with `α, β` the standard free generators of a subgroup of
/// `SL(2, Z)`.
pub fn scaled_free_pair() -> EpiSet {
    EpiSet::from_i64(&[&[&[2, 4], &[0, 2]], &[&[2, 0], &[4, 2]]]).expect("valid fixture")
}

/// Generators of the form `[[1, *], [0, *]]` in `SL(3, Z)`. The first two
/// are unipotent and fix the dual character `(0, 0, 1)`.
pub fn upper_left_one() -> EpiSet {
    EpiSet::from_i64(&[
        &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]],
        &[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]],
        &[&[1, 0, 0], &[0, 2, 1], &[0, 1, 1]],
    ])
    .expect("valid fixture")
}

/// Two integral elements of `SO(2, 1)` of infinite order, from the bounded
/// entry search.
pub fn lorentz_pair() -> Result<EpiSet> {
    let gens = lorentz_generators(3);
    let second = gens
        .iter()
        .skip(1)
        .find(|g| !g.commutes_with(&gens[0]))
        .ok_or_else(|| Error::ConstructionFailed("no non-commuting Lorentz pair".into()))?;
    EpiSet::new(vec![gens[0].clone(), second.clone()])
}

pub fn fixtures() -> Result<Vec<Fixture>> {
    Ok(vec![
        Fixture { name: "st-pair", family: st_pair() },
        Fixture { name: "scaled-free-pair", family: scaled_free_pair() },
        Fixture { name: "upper-left-one", family: upper_left_one() },
        Fixture { name: "lorentz", family: lorentz_pair()? },
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpec {
    UnipotentSharp { d: usize, s: usize },
    EisensteinPoly { d: usize, q: u64 },
    EpiSharp { d: usize, s: usize },
    BlockTriangular { d1: usize, d2: usize },
    ScaledSl,
    StPair,
}

impl FamilySpec {
    /// The family described; for `EisensteinPoly` the single companion
    /// matrix of the polynomial.
    pub fn build(&self) -> Result<EpiSet> {
        match *self {
            FamilySpec::UnipotentSharp { d, s } => gen_unipotent_family(d, s),
            FamilySpec::EisensteinPoly { d, q } => {
                EpiSet::new(vec![companion(&gen_eisenstein_poly(d, q)?.poly)?])
            }
            FamilySpec::EpiSharp { d, s } => gen_epi_family(d, s),
            FamilySpec::BlockTriangular { d1, d2 } => gen_block_triangular(d1, d2),
            FamilySpec::ScaledSl => Ok(scaled_free_pair()),
            FamilySpec::StPair => Ok(st_pair()),
        }
    }
}
