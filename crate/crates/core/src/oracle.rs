//! Independent checks that share no code path with the kernel method:
//! direct enumeration of small character relations, certificate replay,
//! and Monte Carlo estimates of box correlations.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::groups::{enumerate_elements, Word};
use crate::limits::TrigPoly;
use crate::mixing::{combinations, dual};
use crate::{EpiSet, Error, IntMat, IntVec, Result};

const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn reduce(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below P")
}

fn small_mod(x: i64) -> u64 {
    if x >= 0 {
        x as u64
    } else {
        P - x.unsigned_abs()
    }
}

/// All `(2h+1)^k` vectors in `[-h, h]^k`, lexicographic.
fn box_points(k: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-h..=h).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn partial_sum(cols: &[Vec<u64>], x: &[i64], d: usize) -> Vec<u64> {
    let mut acc = vec![0u64; d];
    for (c, &xi) in cols.iter().zip(x) {
        if xi == 0 {
            continue;
        }
        let m = small_mod(xi);
        for (a, &ci) in acc.iter_mut().zip(c) {
            *a = add_mod(*a, mul_mod(m, ci));
        }
    }
    acc
}

/// Nonzero `x ∈ [-h, h]^m` with `Σ x_j c_j ≡ 0 (mod P)`, by meet in the
/// middle over the two halves of the coordinates. Callers re-check hits
/// exactly.
fn box_solutions(cols: &[Vec<u64>], d: usize, h: i64) -> Vec<Vec<i64>> {
    let split = cols.len() / 2;
    let (left, right) = cols.split_at(split);
    let mut table: HashMap<Vec<u64>, Vec<Vec<i64>>> = HashMap::new();
    for x in box_points(left.len(), h) {
        table.entry(partial_sum(left, &x, d)).or_default().push(x);
    }
    let mut out = Vec::new();
    for y in box_points(right.len(), h) {
        let key: Vec<u64> = partial_sum(right, &y, d).into_iter().map(|q| (P - q) % P).collect();
        if let Some(xs) = table.get(&key) {
            for x in xs {
                let mut v = x.clone();
                v.extend_from_slice(&y);
                if v.iter().any(|&e| e != 0) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// First nonzero entry positive and entries coprime.
fn is_canonical(x: &[i64]) -> bool {
    let first_positive = x.iter().find(|&&e| e != 0).is_some_and(|&e| e > 0);
    first_positive && x.iter().fold(0i64, |g, &e| g.gcd(&e)) == 1
}

fn norm_key(x: &[i64]) -> (i64, Vec<i64>) {
    (x.iter().map(|e| e.abs()).max().unwrap_or(0), x.to_vec())
}

fn columns_mod_p(mats: &[IntMat]) -> Vec<Vec<u64>> {
    mats.iter()
        .flat_map(|m| (0..m.cols()).map(move |j| m.column(j).iter().map(reduce).collect()))
        .collect()
}

fn relation_holds(mats: &[IntMat], x: &[i64], d: usize) -> bool {
    let mut acc = vec![BigInt::zero(); d];
    for (k, m) in mats.iter().enumerate() {
        let chunk: IntVec = x[k * d..(k + 1) * d].iter().map(|&e| BigInt::from(e)).collect();
        for (a, y) in acc.iter_mut().zip(m.mul_vec(&chunk)) {
            *a += y;
        }
    }
    acc.iter().all(Zero::is_zero)
}

fn split_tuple(x: &[i64], d: usize) -> Vec<IntVec> {
    x.chunks(d).map(|c| c.iter().map(|&e| BigInt::from(e)).collect()).collect()
}

fn check_bound(name: &str, v: u64) -> Result<i64> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive")));
    }
    i64::try_from(v).map_err(|_| Error::InvalidParameter(format!("{name} too large")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationHit {
    #[serde(with = "crate::mixing::serde_vecs")]
    pub tuple: Vec<IntVec>,
    /// Every `n <= horizon` at which the relation holds.
    pub hits: Vec<u64>,
}

/// Searches primitive tuples with entries in `[-height, height]` for
/// `Σ_k T̂_k^n x_k = 0` at `min_hits` or more `n ∈ [1, horizon]`. Returns the
/// least such tuple by max-norm, then lexicographically.
pub fn brute_force_relation_search(
    family: &EpiSet,
    height: u64,
    horizon: u64,
    min_hits: usize,
) -> Result<Option<RelationHit>> {
    let h = check_bound("height", height)?;
    check_bound("horizon", horizon)?;
    if min_hits == 0 {
        return Err(Error::InvalidParameter("min_hits must be positive".into()));
    }
    let d = family.dim();
    let duals = family.duals();
    let mut powers = duals.clone();
    let mut hits: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    for n in 1..=horizon {
        let cols = columns_mod_p(&powers);
        for x in box_solutions(&cols, d, h) {
            if is_canonical(&x) && relation_holds(&powers, &x, d) {
                hits.entry(x).or_default().push(n);
            }
        }
        powers = powers.iter().zip(&duals).map(|(p, t)| p * t).collect();
    }
    Ok(hits
        .into_iter()
        .filter(|(_, ns)| ns.len() >= min_hits)
        .min_by_key(|(x, _)| norm_key(x))
        .map(|(x, ns)| RelationHit { tuple: split_tuple(&x, d), hits: ns }))
}

/// Replays a certificate: `Σ_k T̂_k^{l n} x_k = 0` for every `n = 1..=depth`,
/// by repeated matrix-vector products.
pub fn verify_witness(family: &EpiSet, l: u64, witness: &[IntVec], depth: u64) -> Result<bool> {
    if l == 0 {
        return Err(Error::NonPositive);
    }
    if witness.len() != family.len() || witness.iter().any(|x| x.len() != family.dim()) {
        return Err(Error::ShapeMismatch(format!(
            "expected {} vectors of length {}",
            family.len(),
            family.dim()
        )));
    }
    if witness.iter().flatten().all(Zero::is_zero) {
        return Err(Error::InvalidParameter("witness is the zero tuple".into()));
    }
    let steps: Vec<IntMat> = family.maps().iter().map(|t| dual(t).pow(l)).collect();
    let mut current: Vec<IntVec> = witness.to_vec();
    for _ in 0..depth {
        current = steps.iter().zip(&current).map(|(m, x)| m.mul_vec(x)).collect();
        let mut sum = vec![BigInt::zero(); family.dim()];
        for x in &current {
            for (a, b) in sum.iter_mut().zip(x) {
                *a += b;
            }
        }
        if sum.iter().any(|v| !v.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Half-open box `∏ [a_i, b_i)` inside `[0, 1)^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSet {
    intervals: Vec<(BigRational, BigRational)>,
}

impl BoxSet {
    pub fn new(intervals: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidParameter("box needs at least one side".into()));
        }
        for (a, b) in &intervals {
            if a.is_negative() || a >= b || b > &BigRational::one() {
                return Err(Error::InvalidParameter(format!("bad interval [{a}, {b})")));
            }
        }
        Ok(BoxSet { intervals })
    }

    /// `[0, 1/2)^d`
    pub fn lower_half(d: usize) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        BoxSet { intervals: vec![(BigRational::zero(), half); d] }
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn measure(&self) -> BigRational {
        self.intervals.iter().map(|(a, b)| b - a).product()
    }

    // Integer thresholds for y / 2^32 ∈ [a, b): y >= ⌈a 2^32⌉, y < ⌈b 2^32⌉.
    fn thresholds(&self) -> Vec<(u64, u64)> {
        let scale = BigRational::from_integer(BigInt::one() << 32);
        self.intervals
            .iter()
            .map(|(a, b)| {
                let lo = (a * &scale).ceil().to_integer().to_u64().expect("within [0, 2^32]");
                let hi = (b * &scale).ceil().to_integer().to_u64().expect("within [0, 2^32]");
                (lo, hi)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

impl McEstimate {
    /// `|estimate - target| <= k · std_error`, with the error floored at
    /// one sample's worth so that exact hits of 0 or 1 are not rejected.
    pub fn within(&self, target: f64, k: f64) -> bool {
        let se = self.std_error.max(1.0 / self.samples as f64);
        (self.estimate - target).abs() <= k * se
    }
}

const CHUNK: u64 = 4096;

/// Estimates `m(⋂_k T_k^{-n} B_k)` from `samples` points `x = k / 2^32`.
///
/// `T^n x mod 1` is computed exactly by reducing `T^n` modulo `2^32`; only
/// the sampling is random. Chunk `c` draws from ChaCha stream `c` of
/// `seed`, so the result does not depend on the thread count.
pub fn mc_correlation(
    family: &EpiSet,
    n: u64,
    boxes: &[BoxSet],
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let d = family.dim();
    if boxes.len() != family.len() || boxes.iter().any(|b| b.dim() != d) {
        return Err(Error::ShapeMismatch(format!("need {} boxes of dimension {d}", family.len())));
    }
    let modulus = BigInt::one() << 32;
    let mats: Vec<Vec<u64>> = family
        .maps()
        .iter()
        .map(|t| {
            t.pow(n).entries().map(|e| e.mod_floor(&modulus).to_u64().expect("below 2^32")).collect()
        })
        .collect();
    let limits: Vec<Vec<(u64, u64)>> = boxes.iter().map(BoxSet::thresholds).collect();
    let mask = (1u64 << 32) - 1;

    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![0u64; d];
            let mut local = 0;
            for _ in 0..count {
                for xi in x.iter_mut() {
                    *xi = rng.gen::<u32>() as u64;
                }
                let inside = mats.iter().zip(&limits).all(|(m, lim)| {
                    (0..d).all(|i| {
                        let y = (0..d)
                            .fold(0u64, |acc, j| acc.wrapping_add(m[i * d + j].wrapping_mul(x[j])))
                            & mask;
                        lim[i].0 <= y && y < lim[i].1
                    })
                });
                local += inside as u64;
            }
            local
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HigherOrderWitness {
    pub words: Vec<Word>,
    #[serde(with = "crate::mixing::serde_vecs")]
    pub tuple: Vec<IntVec>,
}

/// Bounded search for a refutation of order-`order` mixing of the semigroup
/// (group, when every generator is unimodular) spanned by `generators`.
///
/// Looks for `order` distinct elements `w_i`, given by words of length at
/// most `word_len`, and a tuple with entries in `[-height, height]` such
/// that `Σ_i ŵ_i^n x_i = 0` for every `n = 1..=horizon`. Absence proves
/// nothing.
pub fn higher_order_refute(
    generators: &EpiSet,
    order: usize,
    word_len: usize,
    height: u64,
    horizon: u64,
) -> Result<Option<HigherOrderWitness>> {
    if order < 2 {
        return Err(Error::TooFewMaps { needed: 2, found: order });
    }
    let h = check_bound("height", height)?;
    check_bound("horizon", horizon)?;
    let d = generators.dim();
    let use_inverses = generators.maps().iter().all(IntMat::is_unimodular);
    let elements = enumerate_elements(generators, word_len, use_inverses)?;
    let powers: Vec<Vec<IntMat>> = elements
        .iter()
        .map(|(_, m)| {
            let step = dual(m);
            let mut acc = Vec::with_capacity(horizon as usize);
            let mut cur = step.clone();
            for _ in 0..horizon {
                let next = &cur * &step;
                acc.push(std::mem::replace(&mut cur, next));
            }
            acc
        })
        .collect();

    let combos = combinations(elements.len(), order);
    Ok(combos.par_iter().find_map_first(|combo| {
        let first: Vec<IntMat> = combo.iter().map(|&e| powers[e][0].clone()).collect();
        let mut found: Vec<Vec<i64>> = box_solutions(&columns_mod_p(&first), d, h)
            .into_iter()
            .filter(|x| is_canonical(x))
            .filter(|x| {
                (0..horizon as usize).all(|n| {
                    let mats: Vec<IntMat> = combo.iter().map(|&e| powers[e][n].clone()).collect();
                    relation_holds(&mats, x, d)
                })
            })
            .collect();
        found.sort_by_key(|x| norm_key(x));
        found.into_iter().next().map(|x| HigherOrderWitness {
            words: combo.iter().map(|&e| elements[e].0.clone()).collect(),
            tuple: split_tuple(&x, d),
        })
    }))
}

/// Riemann sum of `∫ f_1(T_1^n x) ⋯ f_s(T_s^n x) dm` over the grid
/// `(Z / grid)^d / grid`. Points `T^n x mod 1` stay on the grid and are
/// computed exactly; only the exponentials are floating point. An odd
/// `grid` keeps the grid from collapsing under even determinants.
pub fn riemann_correlation(family: &EpiSet, fs: &[TrigPoly], n: u64, grid: u64) -> Result<Complex<f64>> {
    if !(2..1 << 31).contains(&grid) {
        return Err(Error::InvalidParameter("grid must be in [2, 2^31)".into()));
    }
    if fs.len() != family.len() || fs.iter().any(|f| f.dim() != family.dim()) {
        return Err(Error::ShapeMismatch(format!("need {} functions of dimension {}", family.len(), family.dim())));
    }
    let d = family.dim();
    let g = BigInt::from(grid);
    let reduce_g = |x: &BigInt| x.mod_floor(&g).to_u64().expect("below grid");
    let mats: Vec<Vec<u64>> = family.maps().iter().map(|t| t.pow(n).entries().map(reduce_g).collect()).collect();
    // Each term as (character mod grid, coefficient).
    let terms: Vec<Vec<(Vec<u64>, Complex<f64>)>> = fs
        .iter()
        .map(|f| {
            f.terms()
                .iter()
                .map(|(chi, c)| {
                    let c = Complex::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN));
                    (chi.iter().map(reduce_g).collect(), c)
                })
                .collect()
        })
        .collect();
    let tau = 2.0 * std::f64::consts::PI / grid as f64;
    let total_points = grid.pow(d as u32);
    let sum: Complex<f64> = (0..total_points)
        .into_par_iter()
        .map(|idx| {
            let mut x = vec![0u64; d];
            let mut rest = idx;
            for xi in x.iter_mut() {
                *xi = rest % grid;
                rest /= grid;
            }
            let mut prod = Complex::new(1.0, 0.0);
            for (m, ts) in mats.iter().zip(&terms) {
                let y: Vec<u64> = (0..d)
                    .map(|i| (0..d).fold(0u64, |acc, j| (acc + m[i * d + j] * x[j]) % grid))
                    .collect();
                let value: Complex<f64> = ts
                    .iter()
                    .map(|(chi, c)| {
                        let phase = chi.iter().zip(&y).fold(0u64, |acc, (a, b)| (acc + a * b) % grid);
                        c * Complex::from_polar(1.0, tau * phase as f64)
                    })
                    .sum();
                prod *= value;
            }
            prod
        })
        .sum();
    Ok(sum / total_points as f64)
}

/// `(1/N) Σ_{n=1}^{N}` of [`riemann_correlation`].
pub fn cesaro_correlation(family: &EpiSet, fs: &[TrigPoly], horizon: u64, grid: u64) -> Result<Complex<f64>> {
    check_bound("horizon", horizon)?;
    let mut total = Complex::new(0.0, 0.0);
    for n in 1..=horizon {
        total += riemann_correlation(family, fs, n, grid)?;
    }
    Ok(total / horizon as f64)
}

/// Draws a random `EpiSet` with entries in `[-bound, bound]`, rejecting
/// singular matrices.
pub fn random_epi_set<R: Rng>(rng: &mut R, d: usize, s: usize, bound: i64) -> EpiSet {
    let maps = (0..s)
        .map(|_| loop {
            let rows: Vec<IntVec> = (0..d)
                .map(|_| (0..d).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
                .collect();
            let m = IntMat::from_rows(rows).expect("square");
            if !m.det_bareiss().is_zero() {
                break m;
            }
        })
        .collect();
    EpiSet::new(maps).expect("nonsingular and same dimension")
}
