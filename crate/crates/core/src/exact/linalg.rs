//! Exact kernels, Hermite normal forms and lattice saturation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::{IntMat, IntVec, RatMat, RatVec};

/// Divides out the content and makes the first nonzero entry positive.
pub fn primitive(v: &[BigInt]) -> IntVec {
    let content = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if content.is_zero() {
        return v.to_vec();
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
    let c = if neg { -content } else { content };
    v.iter().map(|x| x / &c).collect()
}

/// Scales a rational vector by the lcm of its denominators.
pub fn clear_denominators(v: &[BigRational]) -> IntVec {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect()
}

fn divide_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Integer row operations bringing `rows` into a reduced echelon shape
/// whose rows are integer multiples of the rational RREF rows.
/// Returns the pivot columns.
fn integer_rref(rows: &mut Vec<IntVec>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // Smallest nonzero entry as pivot keeps numbers down.
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
        let Some(p) = best else { continue };
        rows.swap(r, p);
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let g = rows[r][c].gcd(&rows[i][c]);
            let fp = &rows[i][c] / &g;
            let fi = &rows[r][c] / &g;
            let (pivot_row, other) = if i < r {
                let (lo, hi) = rows.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = rows.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (x, y) in other.iter_mut().zip(pivot_row.iter()) {
                *x = &*x * &fi - y * &fp;
            }
            divide_content(other);
        }
        divide_content(&mut rows[r]);
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right null space of an integer matrix.
///
/// One vector per free column in ascending order, each primitive with its
/// first nonzero entry positive. The result depends only on the null space,
/// not on the particular matrix defining it.
pub fn integer_kernel(m: &IntMat) -> Vec<IntVec> {
    kernel_of_rows(m.to_rows(), m.cols())
}

pub(crate) fn kernel_of_rows(mut rows: Vec<IntVec>, ncols: usize) -> Vec<IntVec> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let pivots = integer_rref(&mut rows, ncols);
    let lcm = pivots
        .iter()
        .enumerate()
        .fold(BigInt::one(), |acc, (r, &c)| acc.lcm(&rows[r][c]));
    let mut basis = Vec::new();
    let mut next_pivot = 0;
    for f in 0..ncols {
        if next_pivot < pivots.len() && pivots[next_pivot] == f {
            next_pivot += 1;
            continue;
        }
        let mut v = vec![BigInt::zero(); ncols];
        v[f] = lcm.clone();
        for (r, &c) in pivots.iter().enumerate() {
            // pivot * x_c + a * x_f = 0
            v[c] = -(&rows[r][f] * &lcm) / &rows[r][c];
        }
        basis.push(primitive(&v));
    }
    basis
}

/// Right null space over the rationals, as primitive integer vectors in
/// reduced-echelon order.
pub fn rational_kernel(m: &RatMat) -> Vec<IntVec> {
    let rows = m.to_rows().iter().map(|r| clear_denominators(r)).collect();
    kernel_of_rows(rows, m.cols())
}

/// Rank of an integer matrix.
pub fn rank(m: &IntMat) -> usize {
    m.cols() - integer_kernel(m).len()
}

/// Canonical basis of the rational span of `vectors` (ambient dimension
/// `dim`): the kernel-style basis of the span's annihilator.
pub fn canonical_span_basis(vectors: &[IntVec], dim: usize) -> Vec<IntVec> {
    let annihilator = kernel_of_rows(vectors.to_vec(), dim);
    kernel_of_rows(annihilator, dim)
}

/// Row-style Hermite normal form; zero rows dropped.
///
/// Pivots are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hermite_normal_form(rows: &[IntVec]) -> Vec<IntVec> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut a: Vec<IntVec> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        // Euclid down the column until a single nonzero entry remains.
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by(|&&x, &&y| a[x][c].abs().cmp(&a[y][c].abs())).unwrap();
            a.swap(r, p);
            if nz.len() == 1 {
                break;
            }
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pr = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pr.iter()) {
                    *x = &*x - &q * y;
                }
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pr = a[r].clone();
        for row in a.iter_mut().take(r) {
            let q = row[c].div_floor(&pr[c]);
            if q.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(pr.iter()) {
                *x = &*x - &q * y;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Integer basis of `{x in Z^n : m x = 0}` as a lattice (not just a
/// rational basis), in Hermite normal form.
pub fn integer_kernel_lattice(m: &IntMat) -> Vec<IntVec> {
    let (r, n) = (m.rows(), m.cols());
    // Row-reduce [m^T | I]; rows whose left block vanishes span the kernel
    // lattice because the row operations are unimodular.
    let aug: Vec<IntVec> = (0..n)
        .map(|j| {
            let mut row: IntVec = m.column(j);
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let reduced = hnf_full_rows(aug);
    let kernel: Vec<IntVec> = reduced
        .into_iter()
        .filter(|row| row[..r].iter().all(Zero::is_zero))
        .map(|row| row[r..].to_vec())
        .collect();
    hermite_normal_form(&kernel)
}

// Same as `hermite_normal_form` but keeps zero rows, which matter for the
// augmented-identity trick.
fn hnf_full_rows(rows: Vec<IntVec>) -> Vec<IntVec> {
    let mut h = hermite_normal_form(&rows);
    let n = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    // Every row of the augmented matrix is independent (identity block), so
    // no row is ever dropped; guard anyway.
    while h.len() < n {
        h.push(vec![BigInt::zero(); width]);
    }
    h
}

/// Basis of `span_Q(basis) ∩ Z^d` in Hermite normal form.
pub fn lattice_saturate(basis: &[RatVec]) -> Result<Vec<IntVec>> {
    let Some(first) = basis.first() else {
        return Ok(Vec::new());
    };
    let dim = first.len();
    if basis.iter().any(|v| v.len() != dim) {
        return Err(Error::ShapeMismatch("basis vectors of unequal length".into()));
    }
    let ints: Vec<IntVec> = basis.iter().map(|v| clear_denominators(v)).collect();
    let annihilator = kernel_of_rows(ints.clone(), dim);
    if dim - annihilator.len() != basis.len() {
        return Err(Error::DependentVectors);
    }
    if annihilator.is_empty() {
        return Ok((0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect());
    }
    let e = Matrix::from_rows(annihilator).expect("rectangular");
    Ok(integer_kernel_lattice(&e))
}

/// Extends a primitive integer vector to a unimodular matrix whose first
/// column is that vector.
pub fn complete_to_unimodular(v: &[BigInt]) -> Result<IntMat> {
    let d = v.len();
    let content = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !content.is_one() {
        return Err(Error::InvalidParameter("vector is not primitive".into()));
    }
    // Track W with W v = e_1 through unimodular row operations on [v | I].
    let mut rows: Vec<IntVec> = (0..d)
        .map(|i| {
            let mut r = vec![v[i].clone()];
            r.extend((0..d).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    rows = hnf_full_rows(rows);
    debug_assert!(rows[0][0].is_one());
    let w = Matrix::from_rows(rows.into_iter().map(|r| r[1..].to_vec()).collect())?;
    let u = w.unimodular_inverse().ok_or(Error::InvalidParameter("completion failed".into()))?;
    debug_assert_eq!(u.column(0), v.to_vec());
    Ok(u)
}
