//! Bounded refutation scans for group-level properties.
//!
//! None of these scans can prove that a group acts mixingly or ergodically;
//! they look for concrete counterexamples (an infinite-order element with a
//! root-of-unity eigenvalue, or a finite dual orbit) and otherwise report how
//! far they searched.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{has_root_of_unity_root, torsion_exponent};
use crate::error::{Error, Result};
use crate::mixing::dual;
use crate::{EpiSet, IntMat, IntVec};

/// One generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    fn inverted(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// Product of letters, read left to right as matrix multiplication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Evaluates the word against `generators` and their inverses.
    pub fn evaluate(&self, generators: &[IntMat], inverses: &[Option<IntMat>]) -> Result<IntMat> {
        let d = generators.first().ok_or(Error::EmptyFamily)?.rows();
        let mut m = IntMat::identity(d);
        for letter in &self.0 {
            let g = if letter.inverse {
                inverses
                    .get(letter.generator)
                    .and_then(Option::as_ref)
                    .ok_or(Error::NotUnimodular { index: letter.generator, det: "?".into() })?
            } else {
                generators.get(letter.generator).ok_or_else(|| {
                    Error::InvalidParameter(format!("no generator {}", letter.generator))
                })?
            };
            m = &m * g;
        }
        Ok(m)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| if l.inverse { format!("g{}^-1", l.generator) } else { format!("g{}", l.generator) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefutationReason {
    /// An element of infinite order with a root-of-unity eigenvalue.
    RootOfUnityEigenvalue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupScanReport {
    Refuted { word: Word, matrix: IntMat, reason: RefutationReason },
    CleanUpTo { max_word_length: usize, words_examined: usize },
}

/// `g^M = I` for the torsion exponent `M` of the dimension.
pub fn is_finite_order(g: &IntMat) -> Result<bool> {
    if !g.is_square() {
        return Err(Error::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    let det = g.det_bareiss();
    if det.is_zero() {
        return Err(Error::ZeroDeterminant { index: 0 });
    }
    // Finite order forces |det| = 1; skip the powering otherwise.
    if det.abs() != BigInt::from(1) {
        return Ok(false);
    }
    let m = torsion_exponent(g.rows() as u64)?;
    Ok(g.pow(m).is_identity())
}

fn inverses_for(generators: &EpiSet, required: bool) -> Result<Vec<Option<IntMat>>> {
    generators
        .maps()
        .iter()
        .enumerate()
        .map(|(index, g)| match g.unimodular_inverse() {
            Some(inv) => Ok(Some(inv)),
            None if required => {
                Err(Error::NotUnimodular { index, det: g.det_bareiss().to_string() })
            }
            None => Ok(None),
        })
        .collect()
}

fn alphabet(n: usize, use_inverses: bool) -> Vec<Letter> {
    let mut letters = Vec::new();
    for generator in 0..n {
        letters.push(Letter { generator, inverse: false });
        if use_inverses {
            letters.push(Letter { generator, inverse: true });
        }
    }
    letters
}

/// Distinct group elements given by freely reduced words of length
/// `1..=max_len`, in length-then-lexicographic order of the first word
/// reaching each element.
pub fn enumerate_elements(
    generators: &EpiSet,
    max_len: usize,
    use_inverses: bool,
) -> Result<Vec<(Word, IntMat)>> {
    let inverses = inverses_for(generators, use_inverses)?;
    let letters = alphabet(generators.len(), use_inverses);
    let mut seen: HashSet<IntMat> = HashSet::new();
    seen.insert(IntMat::identity(generators.dim()));
    let mut out = Vec::new();
    let mut frontier: Vec<(Word, IntMat)> = vec![(Word(Vec::new()), IntMat::identity(generators.dim()))];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, m) in &frontier {
            for &letter in &letters {
                if word.0.last().is_some_and(|&last| last == letter.inverted()) {
                    continue;
                }
                let g = if letter.inverse {
                    inverses[letter.generator].as_ref().expect("checked above")
                } else {
                    &generators.maps()[letter.generator]
                };
                let prod = m * g;
                if seen.insert(prod.clone()) {
                    let mut w = word.0.clone();
                    w.push(letter);
                    next.push((Word(w), prod));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Looks for an infinite-order element with a root-of-unity eigenvalue
/// among words of length at most `max_len`. A hit refutes mixing of the
/// generated group; a clean report proves nothing.
pub fn group_mixing_scan(
    generators: &EpiSet,
    max_len: usize,
    use_inverses: bool,
) -> Result<GroupScanReport> {
    let d = generators.dim() as u64;
    let elements = enumerate_elements(generators, max_len, use_inverses)?;
    let examined = elements.len();
    for (word, m) in elements {
        if is_finite_order(&m)? {
            continue;
        }
        if has_root_of_unity_root(&m.charpoly().to_fraction(), d)? {
            return Ok(GroupScanReport::Refuted {
                word,
                matrix: m,
                reason: RefutationReason::RootOfUnityEigenvalue,
            });
        }
    }
    Ok(GroupScanReport::CleanUpTo { max_word_length: max_len, words_examined: examined })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitScan {
    /// The dual orbit closed up; ergodicity of the action is refuted.
    FiniteOrbit { orbit: Vec<IntVec> },
    ExceedsCap { explored: usize },
}

/// Breadth-first closure of `chi` under the duals of the generators (and
/// their inverses where unimodular).
pub fn dual_orbit_scan(generators: &EpiSet, chi: &[BigInt], cap: usize) -> Result<OrbitScan> {
    if chi.len() != generators.dim() {
        return Err(Error::DimensionMismatch { expected: generators.dim(), found: chi.len() });
    }
    if chi.iter().all(Zero::is_zero) {
        return Err(Error::ZeroCharacter);
    }
    let mut actions: Vec<IntMat> = generators.maps().iter().map(dual).collect();
    for g in generators.maps() {
        if let Some(inv) = g.unimodular_inverse() {
            actions.push(dual(&inv));
        }
    }
    let mut seen: HashSet<IntVec> = HashSet::new();
    let mut orbit = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(chi.to_vec());
    queue.push_back(chi.to_vec());
    while let Some(v) = queue.pop_front() {
        orbit.push(v.clone());
        if orbit.len() > cap {
            return Ok(OrbitScan::ExceedsCap { explored: orbit.len() });
        }
        for a in &actions {
            let w = a.mul_vec(&v);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    Ok(OrbitScan::FiniteOrbit { orbit })
}

/// `{δ^{-i} γ δ^i : i = 1..=count}`; every member shares the
/// characteristic polynomial of `γ`.
pub fn conjugate_family(gamma: &IntMat, delta: &IntMat, count: usize) -> Result<EpiSet> {
    if count == 0 {
        return Err(Error::NonPositive);
    }
    EpiSet::new(vec![gamma.clone(), delta.clone()])?;
    let delta_inv = delta
        .unimodular_inverse()
        .ok_or_else(|| Error::NotUnimodular { index: 1, det: delta.det_bareiss().to_string() })?;
    let target = gamma.charpoly();
    let mut members = Vec::with_capacity(count);
    let mut conj = gamma.clone();
    for _ in 0..count {
        conj = &(&delta_inv * &conj) * delta;
        assert_eq!(conj.charpoly(), target, "conjugation preserves the characteristic polynomial");
        members.push(conj.clone());
    }
    EpiSet::new(members)
}

/// Integer matrices preserving `diag(1, 1, -1)` with determinant one and
/// infinite order, whose columns have entries bounded by `bound`.
///
/// Columns are enumerated directly: the first two must have quadratic form
/// value `1`, the third `-1`, and all three must be pairwise orthogonal.
pub fn lorentz_generators(bound: i64) -> Vec<IntMat> {
    let form = |v: &[i64; 3], w: &[i64; 3]| v[0] * w[0] + v[1] * w[1] - v[2] * w[2];
    let mut vecs = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                vecs.push([a, b, c]);
            }
        }
    }
    let space: Vec<&[i64; 3]> = vecs.iter().filter(|v| form(v, v) == 1).collect();
    let time: Vec<&[i64; 3]> = vecs.iter().filter(|v| form(v, v) == -1).collect();
    let mut found = Vec::new();
    for c1 in &space {
        for c2 in &space {
            if form(c1, c2) != 0 {
                continue;
            }
            for c3 in &time {
                if form(c1, c3) != 0 || form(c2, c3) != 0 {
                    continue;
                }
                let rows: Vec<Vec<i64>> = (0..3).map(|i| vec![c1[i], c2[i], c3[i]]).collect();
                let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                let m = IntMat::from_i64(&refs);
                let j = IntMat::diagonal(&[1.into(), 1.into(), (-1).into()]);
                debug_assert_eq!(&(&m.transpose() * &j) * &m, j);
                if m.det_bareiss() == BigInt::from(1) && !is_finite_order(&m).unwrap_or(true) {
                    found.push(m);
                }
            }
        }
    }
    found
}
