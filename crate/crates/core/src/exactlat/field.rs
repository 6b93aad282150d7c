//! Row reduction over prime fields and over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use super::primes::Prime;

/// Coefficient field for rank and kernel computations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Base {
    Rationals,
    Prime(Prime),
}

impl std::fmt::Display for Base {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Base::Rationals => write!(f, "Q"),
            Base::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Rank of `m` over the given field.
pub fn rank_over(m: &IntegerMatrix, base: &Base) -> usize {
    match base {
        Base::Rationals => rational_rank(m),
        Base::Prime(p) => mod_p_rank(m, p),
    }
}

/// Kernel basis over the given field as integer vectors: primitive
/// denominator-free vectors over `Q`, entries in `[0, p)` over `F_p`.
pub fn kernel_over(m: &IntegerMatrix, base: &Base) -> Vec<Vec<BigInt>> {
    match base {
        Base::Prime(p) => mod_p_kernel(m, p),
        Base::Rationals => rational_kernel(m)
            .into_iter()
            .map(|v| {
                let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
                let mut w: Vec<BigInt> = v
                    .iter()
                    .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                    .collect();
                primitive(&mut w);
                w
            })
            .collect(),
    }
}

trait ModArith {
    type E: Clone + PartialEq;
    fn reduce(&self, v: &BigInt) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub_mul(&self, a: &Self::E, b: &Self::E, c: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn lift(&self, a: &Self::E) -> BigInt;
}

struct Word(u64);

impl ModArith for Word {
    type E = u64;
    fn reduce(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.0)).to_u64().unwrap()
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub_mul(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        let p = self.0 as u128;
        let prod = (*b as u128 * *c as u128) % p;
        ((*a as u128 + p - prod) % p) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        let e = BigInt::from(*a).extended_gcd(&BigInt::from(self.0));
        e.x.mod_floor(&BigInt::from(self.0)).to_u64().unwrap()
    }
    fn lift(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }
}

struct Wide(BigInt);

impl ModArith for Wide {
    type E = BigInt;
    fn reduce(&self, v: &BigInt) -> BigInt {
        v.mod_floor(&self.0)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn sub_mul(&self, a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
        (a - b * c).mod_floor(&self.0)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.0)
    }
    fn inv(&self, a: &BigInt) -> BigInt {
        a.extended_gcd(&self.0).x.mod_floor(&self.0)
    }
    fn lift(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

/// Reduced row echelon form; returns pivot columns.
fn rref_generic<A: ModArith>(ar: &A, rows: &mut [Vec<A::E>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !ar.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ar.inv(&rows[r][c]);
        for v in rows[r].iter_mut() {
            if !ar.is_zero(v) {
                *v = ar.mul(v, &inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || ar.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (k, pv) in pivot_row.iter().enumerate().skip(c) {
                if !ar.is_zero(pv) {
                    row[k] = ar.sub_mul(&row[k], &f, pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn load<A: ModArith>(ar: &A, m: &IntegerMatrix) -> Vec<Vec<A::E>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| ar.reduce(v)).collect())
        .collect()
}

fn kernel_generic<A: ModArith>(ar: &A, m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let mut rows = load(ar, m);
    let pivots = rref_generic(ar, &mut rows, m.cols());
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let neg_one = ar.reduce(&BigInt::from(-1));
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigInt::zero(); m.cols()];
            v[fc] = BigInt::one();
            for (r, &pc) in pivots.iter().enumerate() {
                let e = &rows[r][fc];
                if !ar.is_zero(e) {
                    v[pc] = ar.lift(&ar.mul(e, &neg_one));
                }
            }
            v
        })
        .collect()
}

fn solve_generic<A: ModArith>(ar: &A, m: &IntegerMatrix, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    let aug = m.hstack(&IntegerMatrix::from_columns(m.rows(), &[rhs.to_vec()]));
    let mut rows = load(ar, &aug);
    let pivots = rref_generic(ar, &mut rows, aug.cols());
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![BigInt::zero(); m.cols()];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = ar.lift(&rows[r][m.cols()]);
    }
    Some(x)
}

fn with_arith<R>(p: &Prime, word: impl FnOnce(&Word) -> R, wide: impl FnOnce(&Wide) -> R) -> R {
    match p.as_u64() {
        Some(v) if v < (1 << 63) => word(&Word(v)),
        _ => wide(&Wide(p.value().clone())),
    }
}

pub fn mod_p_rank(m: &IntegerMatrix, p: &Prime) -> usize {
    with_arith(
        p,
        |a| rref_generic(a, &mut load(a, m), m.cols()).len(),
        |a| rref_generic(a, &mut load(a, m), m.cols()).len(),
    )
}

/// Basis of the right kernel of `m` over `F_p`, entries in `[0, p)`.
pub fn mod_p_kernel(m: &IntegerMatrix, p: &Prime) -> Vec<Vec<BigInt>> {
    with_arith(p, |a| kernel_generic(a, m), |a| kernel_generic(a, m))
}

/// Some solution of `m x = rhs` over `F_p`, if one exists.
pub fn mod_p_solve(m: &IntegerMatrix, rhs: &[BigInt], p: &Prime) -> Option<Vec<BigInt>> {
    with_arith(p, |a| solve_generic(a, m, rhs), |a| solve_generic(a, m, rhs))
}

/// Row echelon basis of the row space of `m` over `F_p` (nonzero rows only)
/// together with the pivot columns.
pub fn mod_p_row_basis(m: &IntegerMatrix, p: &Prime) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    fn go<A: ModArith>(a: &A, m: &IntegerMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let mut rows = load(a, m);
        let piv = rref_generic(a, &mut rows, m.cols());
        let basis = rows[..piv.len()]
            .iter()
            .map(|r| r.iter().map(|v| a.lift(v)).collect())
            .collect();
        (basis, piv)
    }
    with_arith(p, |a| go(a, m), |a| go(a, m))
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Rank over the rationals by fraction-free elimination, keeping each row
/// primitive so entries stay small on the structured matrices used here.
pub fn rational_rank(m: &IntegerMatrix) -> usize {
    rational_pivots(m).len()
}

/// Pivot columns of `m` over the given field: column `j` is listed iff it is
/// not in the span of the columns before it.
pub fn pivot_columns(m: &IntegerMatrix, base: &Base) -> Vec<usize> {
    match base {
        Base::Rationals => rational_pivots(m),
        Base::Prime(p) => mod_p_row_basis(m, p).1,
    }
}

fn rational_pivots(m: &IntegerMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    let mut rank = 0;
    for c in 0..m.cols() {
        if rank == rows.len() {
            break;
        }
        // smallest nonzero pivot keeps growth down
        let pick = (rank..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
        let Some(pr) = pick else { continue };
        rows.swap(rank, pr);
        pivots.push(c);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[c].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let g = pv.gcd(&row[c]);
            let a = &pv / &g;
            let b = &row[c] / &g;
            for k in c..row.len() {
                if pivot_row[k].is_zero() && row[k].is_zero() {
                    continue;
                }
                row[k] = &a * &row[k] - &b * &pivot_row[k];
            }
            primitive(row);
        }
        rank += 1;
    }
    pivots
}

/// Basis of the right kernel of `m` over `Q` (reduced echelon parametrization).
pub fn rational_kernel(m: &IntegerMatrix) -> Vec<Vec<BigRational>> {
    let mut rows: Vec<Vec<BigRational>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for k in c..prow.len() {
                    if !prow[k].is_zero() {
                        row[k] = &row[k] - &f * &prow[k];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..m.cols())
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![BigRational::zero(); m.cols()];
            v[fc] = BigRational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[ri][fc].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn rank_examples() {
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![1, 2]]);
        assert_eq!(rank_over(&m, &Base::Prime(p(2))), 1);
        assert_eq!(rank_over(&m, &Base::Rationals), 1);
        let d = IntegerMatrix::diagonal(&[2, 3]);
        assert_eq!(rank_over(&d, &Base::Prime(p(3))), 1);
        assert_eq!(rank_over(&d, &Base::Prime(p(5))), 2);
        assert_eq!(rank_over(&d, &Base::Rationals), 2);
    }

    #[test]
    fn mod_p_kernel_annihilates() {
        let m = IntegerMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let pr = p(7);
        let ker = mod_p_kernel(&m, &pr);
        assert_eq!(ker.len(), 3 - mod_p_rank(&m, &pr));
        for v in ker {
            for x in m.mul_vec(&v) {
                assert!((x % 7u32).is_zero());
            }
        }
    }

    #[test]
    fn wide_prime_path() {
        let big = Prime::new((BigInt::one() << 89) - 1).unwrap();
        let m = IntegerMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(mod_p_rank(&m, &big), 1);
        let x = mod_p_solve(&m, &[BigInt::from(3), BigInt::from(6)], &big).unwrap();
        assert_eq!((&x[0] + &x[1] * 2u32 - 3u32).mod_floor(big.value()), BigInt::zero());
    }

    #[test]
    fn rational_kernel_dimension() {
        let m = IntegerMatrix::from_rows(&[vec![6, 10, 15]]);
        assert_eq!(rational_kernel(&m).len(), 2);
        assert_eq!(rational_rank(&m), 1);
    }
}
