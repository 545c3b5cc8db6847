#![allow(dead_code)]

use mixshape::oracle::random_epi_set;
use mixshape::{EpiSet, IntMat, IntVec};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn iv(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn mat(rows: &[&[i64]]) -> IntMat {
    IntMat::from_i64(rows)
}

pub fn fibonacci() -> IntMat {
    mat(&[&[1, 1], &[1, 0]])
}

/// `d ∈ 1..=max_d`, `s ∈ min_s..=max_s`, entries in `[-3, 3]`.
pub fn random_family(rng: &mut ChaCha8Rng, max_d: usize, min_s: usize, max_s: usize) -> EpiSet {
    let d = rng.gen_range(1..=max_d);
    let s = rng.gen_range(min_s..=max_s);
    random_epi_set(rng, d, s, 3)
}

/// `F ∪ {id}`
pub fn with_identity(f: &EpiSet) -> EpiSet {
    let mut maps = f.maps().to_vec();
    maps.push(IntMat::identity(f.dim()));
    EpiSet::new(maps).unwrap()
}

/// Product of random elementary matrices: a random element of `SL(d, Z)`.
pub fn random_unimodular(rng: &mut ChaCha8Rng, d: usize, steps: usize) -> IntMat {
    let mut m = IntMat::identity(d);
    if d < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let mut e = IntMat::identity(d);
        e[(i, j)] = BigInt::from(rng.gen_range(-2..=2));
        m = &m * &e;
    }
    m
}

/// `±M^{a_i}` for one random nonsingular `M`.
pub fn random_commuting_family(rng: &mut ChaCha8Rng, d: usize, s: usize) -> EpiSet {
    let base = random_epi_set(rng, d, 1, 3).into_maps().remove(0);
    let maps = (0..s)
        .map(|_| {
            let p = base.pow(rng.gen_range(0..=3));
            if rng.gen_bool(0.5) {
                p
            } else {
                p.scale(&BigInt::from(-1))
            }
        })
        .collect();
    EpiSet::new(maps).unwrap()
}
