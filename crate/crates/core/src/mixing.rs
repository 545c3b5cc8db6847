//! Mixing decisions for finite families of toral epimorphisms.
//!
//! A family `{T_1, ..., T_s}` fails to be mixing exactly when some nonzero
//! character tuple `(x_1, ..., x_s)` satisfies
//!
//! ```text
//! T̂_1^n x_1 + ... + T̂_s^n x_s = 0
//! ```
//!
//! for infinitely many `n`, where `T̂ = Tᵀ` is the dual action on `Z^d`. Such
//! relations can be pushed onto an arithmetic progression `n = l, 2l, ...`
//! with `phi(l) <= d^2`, and along a progression the set of relations that
//! hold for *every* `n` is a rational subspace. That subspace is computed
//! here from finitely many `n`, which is what makes the problem decidable.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{has_root_of_unity_root, phi_bounded_orders};
use crate::error::{Error, Result};
use crate::exact::linalg::{canonical_span_basis, kernel_of_rows, lattice_saturate, primitive};
use crate::{IntMat, IntVec, RatPoly};

/// Ordered family of same-dimension integer matrices with nonzero
/// determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpiSet {
    dim: usize,
    maps: Vec<IntMat>,
}

impl EpiSet {
    pub fn new(maps: Vec<IntMat>) -> Result<Self> {
        let first = maps.first().ok_or(Error::EmptyFamily)?;
        let dim = first.rows();
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        for (index, m) in maps.iter().enumerate() {
            if !m.is_square() {
                return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
            }
            if m.rows() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.rows() });
            }
            if m.det_bareiss().is_zero() {
                return Err(Error::ZeroDeterminant { index });
            }
        }
        Ok(EpiSet { dim, maps })
    }

    pub fn from_i64(maps: &[&[&[i64]]]) -> Result<Self> {
        EpiSet::new(maps.iter().map(|m| IntMat::from_i64(m)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[IntMat] {
        &self.maps
    }

    pub fn duals(&self) -> Vec<IntMat> {
        self.maps.iter().map(dual).collect()
    }

    /// The subfamily at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> EpiSet {
        EpiSet { dim: self.dim, maps: indices.iter().map(|&i| self.maps[i].clone()).collect() }
    }

    /// `{T_k^e}`
    pub fn powers(&self, e: u64) -> EpiSet {
        EpiSet { dim: self.dim, maps: self.maps.iter().map(|m| m.pow(e)).collect() }
    }

    pub fn into_maps(self) -> Vec<IntMat> {
        self.maps
    }
}

/// Dual action on characters: the transpose.
pub fn dual(m: &IntMat) -> IntMat {
    m.transpose()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum MixingVerdict {
    Mixing {
        exponents_checked: Vec<u64>,
    },
    NotMixing {
        exponent: u64,
        #[serde(with = "crate::mixing::serde_vecs")]
        witness: Vec<IntVec>,
        support: Vec<usize>,
    },
}

impl MixingVerdict {
    pub fn is_mixing(&self) -> bool {
        matches!(self, MixingVerdict::Mixing { .. })
    }
}

/// Exponent search configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MixingConfig {
    /// When set, every `l` up to this bound is checked in addition to the
    /// totient-bounded set.
    pub max_exponent: Option<u64>,
}

/// Exponents `l` examined for a family of dimension `d`: all `l` with
/// `phi(l) <= d^2`, plus `1..=max_exponent` when configured.
pub fn exponent_set(d: usize, config: &MixingConfig) -> Vec<u64> {
    let d2 = (d * d) as u64;
    let mut set: BTreeSet<u64> =
        phi_bounded_orders(d2).expect("d >= 1").orders.into_iter().collect();
    if let Some(max) = config.max_exponent {
        set.extend(1..=max);
    }
    set.into_iter().collect()
}

/// Single-map ergodicity: no eigenvalue is a root of unity.
pub fn is_ergodic(t: &IntMat) -> Result<bool> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    if t.det_bareiss().is_zero() {
        return Err(Error::ZeroDeterminant { index: 0 });
    }
    let p = t.charpoly().to_fraction();
    Ok(!has_root_of_unity_root(&p, t.rows() as u64)?)
}

// Block row n of the stacked system: [D_1^n | ... | D_s^n] applied to a
// tuple, evaluated against each basis vector of the current kernel.
fn block_times_basis(powers: &[IntMat], basis: &[IntVec], d: usize) -> Vec<IntVec> {
    // Returns the d x k matrix as rows.
    let k = basis.len();
    let mut out = vec![vec![BigInt::zero(); k]; d];
    for (col, v) in basis.iter().enumerate() {
        for (block, p) in powers.iter().enumerate() {
            let chunk = &v[block * d..(block + 1) * d];
            if chunk.iter().all(Zero::is_zero) {
                continue;
            }
            let y = p.mul_vec(chunk);
            for (i, yi) in y.into_iter().enumerate() {
                out[i][col] += yi;
            }
        }
    }
    out
}

fn combine(basis: &[IntVec], coeffs: &IntVec) -> IntVec {
    let n = basis[0].len();
    let mut v = vec![BigInt::zero(); n];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            *x += c * y;
        }
    }
    primitive(&v)
}

/// Basis of the tuples `(x_1, ..., x_s)` with `Σ_k D_k^{l n} x_k = 0` for
/// every `n >= 1`, where `D_k` is the dual of `T_k`.
///
/// Membership for `n = 1..=s d` implies the relation for all `n`: the block
/// sequence obeys a reversible linear recurrence of order at most `s d`.
/// The result is re-verified at `n = s d + 1 ..= 2 s d`. Each tuple is
/// returned split into its `s` character vectors, in canonical order.
pub fn stabilized_relation_kernel(family: &EpiSet, l: u64) -> Result<Vec<Vec<IntVec>>> {
    if l == 0 {
        return Err(Error::NonPositive);
    }
    let d = family.dim();
    let s = family.len();
    let horizon = s * d;
    let steps: Vec<IntMat> = family.maps().iter().map(|m| dual(m).pow(l)).collect();
    let mut powers = steps.clone();

    // Identity basis of (Q^d)^s, intersected block by block.
    let mut basis: Vec<IntVec> = (0..s * d)
        .map(|i| (0..s * d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for n in 1..=2 * horizon {
        if basis.is_empty() {
            break;
        }
        let image = block_times_basis(&powers, &basis, d);
        if n > horizon {
            if image.iter().flatten().any(|x| !x.is_zero()) {
                return Err(Error::StabilizationViolated {
                    exponent: l,
                    detail: format!("relation fails at n = {n} after holding for n <= {horizon}"),
                });
            }
        } else {
            let coeffs = kernel_of_rows(image, basis.len());
            basis = coeffs.iter().map(|c| combine(&basis, c)).collect();
        }
        powers = powers.iter().zip(&steps).map(|(p, st)| p * st).collect();
    }

    let canonical = canonical_span_basis(&basis, s * d);
    Ok(canonical.into_iter().map(|v| v.chunks(d).map(<[BigInt]>::to_vec).collect()).collect())
}

/// Decides whether the family is mixing.
///
/// Exponents are tried in ascending order; the first with a nonzero
/// relation kernel gives `NotMixing` with the first canonical kernel tuple
/// as certificate.
pub fn is_mixing_set(family: &EpiSet) -> Result<MixingVerdict> {
    is_mixing_set_with(family, &MixingConfig::default())
}

pub fn is_mixing_set_with(family: &EpiSet, config: &MixingConfig) -> Result<MixingVerdict> {
    if family.len() < 2 {
        return Err(Error::TooFewMaps { needed: 2, found: family.len() });
    }
    let exponents = exponent_set(family.dim(), config);
    for &l in &exponents {
        let kernel = stabilized_relation_kernel(family, l)?;
        if let Some(witness) = kernel.into_iter().next() {
            let support = witness
                .iter()
                .enumerate()
                .filter(|(_, x)| x.iter().any(|v| !v.is_zero()))
                .map(|(i, _)| i)
                .collect();
            return Ok(MixingVerdict::NotMixing { exponent: l, witness, support });
        }
    }
    Ok(MixingVerdict::Mixing { exponents_checked: exponents })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result")]
pub enum SpectralCheck {
    /// No two maps share an eigenvalue at any checked power.
    ProvenMixing,
    /// More than `d` maps share an eigenvalue at power `exponent`.
    ProvenNotMixing { exponent: u64, subset: Vec<usize> },
    Inconclusive,
}

fn gcd_nonconstant(polys: &[RatPoly]) -> Result<bool> {
    let mut g = polys[0].clone();
    for p in &polys[1..] {
        g = g.gcd(p)?;
        if g.degree() == Some(0) {
            return Ok(false);
        }
    }
    Ok(g.degree().is_some_and(|k| k > 0))
}

// Lexicographic k-subsets of 0..n.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Eigenvalue-only shortcuts: pairwise disjoint spectra at every checked
/// power prove mixing, and a common eigenvalue among more than `d` maps
/// proves the opposite (their eigenvectors must be dependent).
pub fn spectral_precheck(family: &EpiSet) -> Result<SpectralCheck> {
    spectral_precheck_with(family, &MixingConfig::default())
}

pub fn spectral_precheck_with(family: &EpiSet, config: &MixingConfig) -> Result<SpectralCheck> {
    let s = family.len();
    if s < 2 {
        return Err(Error::TooFewMaps { needed: 2, found: s });
    }
    let d = family.dim();
    let mut all_disjoint = true;
    for l in exponent_set(d, config) {
        let polys: Vec<RatPoly> =
            family.maps().iter().map(|m| m.pow(l).charpoly().to_fraction()).collect();
        if s > d {
            for subset in combinations(s, d + 1) {
                let sub: Vec<RatPoly> = subset.iter().map(|&i| polys[i].clone()).collect();
                if gcd_nonconstant(&sub)? {
                    return Ok(SpectralCheck::ProvenNotMixing { exponent: l, subset });
                }
            }
        }
        if all_disjoint {
            for pair in combinations(s, 2) {
                if gcd_nonconstant(&[polys[pair[0]].clone(), polys[pair[1]].clone()])? {
                    all_disjoint = false;
                    break;
                }
            }
        }
    }
    Ok(if all_disjoint { SpectralCheck::ProvenMixing } else { SpectralCheck::Inconclusive })
}

/// Mixing criterion for a commuting pair: `T_i^{-1} T_j` has no
/// root-of-unity eigenvalue.
pub fn commuting_pair_criterion(ti: &IntMat, tj: &IntMat) -> Result<bool> {
    let family = EpiSet::new(vec![ti.clone(), tj.clone()])?;
    if !ti.commutes_with(tj) {
        return Err(Error::NonCommuting);
    }
    let inv = ti.to_fraction().inverse().expect("nonzero determinant");
    let ratio = &inv * &tj.to_fraction();
    let p = ratio.charpoly();
    Ok(!has_root_of_unity_root(&p, family.dim() as u64)?)
}

/// Character sublattice on which two maps agree after passing to a power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientWitness {
    pub exponent: u64,
    #[serde(with = "crate::mixing::serde_vecs")]
    pub sublattice: Vec<IntVec>,
}

fn annihilator(basis: &[IntVec], d: usize) -> Vec<IntVec> {
    kernel_of_rows(basis.to_vec(), d)
}

fn rows_times(rows: &[IntVec], m: &IntMat) -> Vec<IntVec> {
    // row vector * matrix = (mᵀ row)ᵀ
    let mt = m.transpose();
    rows.iter().map(|r| mt.mul_vec(r)).collect()
}

/// Largest subspace `W` of `ker(D_1^l - D_2^l)` invariant under both
/// `D_1^l` and `D_2^l`, as a saturated character lattice, for the first
/// exponent where it is nonzero.
pub fn pair_quotient_witness(t1: &IntMat, t2: &IntMat) -> Result<Option<QuotientWitness>> {
    pair_quotient_witness_with(t1, t2, &MixingConfig::default())
}

pub fn pair_quotient_witness_with(
    t1: &IntMat,
    t2: &IntMat,
    config: &MixingConfig,
) -> Result<Option<QuotientWitness>> {
    let family = EpiSet::new(vec![t1.clone(), t2.clone()])?;
    let d = family.dim();
    for l in exponent_set(d, config) {
        let m1 = dual(t1).pow(l);
        let m2 = dual(t2).pow(l);
        let mut w = crate::exact::integer_kernel(&(&m1 - &m2));
        loop {
            if w.is_empty() {
                break;
            }
            let ann = annihilator(&w, d);
            let mut rows = ann.clone();
            rows.extend(rows_times(&ann, &m1));
            rows.extend(rows_times(&ann, &m2));
            let next = kernel_of_rows(rows, d);
            if next.len() == w.len() {
                break;
            }
            w = next;
        }
        if !w.is_empty() {
            let rational: Vec<_> =
                w.iter().map(|v| v.iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect()).collect();
            return Ok(Some(QuotientWitness { exponent: l, sublattice: lattice_saturate(&rational)? }));
        }
    }
    Ok(None)
}

/// `F ∪ {id}` is mixing: every member is ergodic and, for two or more maps,
/// the family itself is mixing.
pub fn jointly_mixing(family: &EpiSet) -> Result<bool> {
    jointly_mixing_with(family, &MixingConfig::default())
}

pub fn jointly_mixing_with(family: &EpiSet, config: &MixingConfig) -> Result<bool> {
    for m in family.maps() {
        if !is_ergodic(m)? {
            return Ok(false);
        }
    }
    if family.len() < 2 {
        return Ok(true);
    }
    Ok(is_mixing_set_with(family, config)?.is_mixing())
}

/// `Vec<IntVec>` as nested arrays of decimal strings.
pub mod serde_vecs {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> =
            v.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let strs: Vec<Vec<String>> = Vec::deserialize(d)?;
        strs.iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.parse::<BigInt>().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
