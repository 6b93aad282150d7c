//! Hermite and Smith normal forms, integer kernels.
//!
//! Hermite convention (used everywhere): column style. Basis vectors are the
//! columns; the matrix is lower echelon (pivot row strictly increases with the
//! column index), pivots are positive, and every entry to the left of a pivot
//! in its row lies in `[0, pivot)`. Equal lattices give identical matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntegerMatrix;
use super::primes::extended_gcd;

/// Column Hermite form `H = A U` with `U` unimodular. Returns `(H, U, rank)`;
/// the first `rank` columns of `H` are nonzero, the rest vanish.
pub fn column_hnf_with_transform(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, usize) {
    column_hnf_impl(a, true)
}

pub fn column_hnf(a: &IntegerMatrix) -> (IntegerMatrix, usize) {
    let (h, _, r) = column_hnf_impl(a, false);
    (h, r)
}

fn column_hnf_impl(a: &IntegerMatrix, track: bool) -> (IntegerMatrix, IntegerMatrix, usize) {
    let mut h = a.clone();
    let k = a.cols();
    let mut u = if track {
        IntegerMatrix::identity(k)
    } else {
        IntegerMatrix::zeros(0, k)
    };
    let mut c = 0;
    for i in 0..a.rows() {
        if c == k {
            break;
        }
        // gather the gcd of row i (columns c..) into column c
        for j in (c + 1)..k {
            if h[(i, j)].is_zero() {
                continue;
            }
            if h[(i, c)].is_zero() {
                h.swap_cols(c, j);
                if track {
                    u.swap_cols(c, j);
                }
                continue;
            }
            let x = h[(i, c)].clone();
            let y = h[(i, j)].clone();
            if (&y % &x).is_zero() {
                let q = -(&y / &x);
                h.add_col_multiple(j, c, &q);
                if track {
                    u.add_col_multiple(j, c, &q);
                }
                continue;
            }
            let (g, s, t) = extended_gcd(&x, &y);
            let xg = &x / &g;
            let yg = &y / &g;
            // [s, -yg; t, xg] has determinant 1
            h.combine_cols(c, j, &s, &t, &(-&yg), &xg);
            if track {
                u.combine_cols(c, j, &s, &t, &(-&yg), &xg);
            }
        }
        if h[(i, c)].is_zero() {
            continue;
        }
        if h[(i, c)].is_negative() {
            h.negate_col(c);
            if track {
                u.negate_col(c);
            }
        }
        let pivot = h[(i, c)].clone();
        for l in 0..c {
            let q = h[(i, l)].div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                h.add_col_multiple(l, c, &nq);
                if track {
                    u.add_col_multiple(l, c, &nq);
                }
            }
        }
        c += 1;
    }
    (h, u, c)
}

/// A sublattice of `Z^ambient` stored by its canonical column Hermite basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeBasis {
    ambient: usize,
    basis: IntegerMatrix,
}

impl LatticeBasis {
    /// Lattice spanned by the columns of `generators`.
    pub fn from_generators(generators: &IntegerMatrix) -> LatticeBasis {
        let (h, r) = column_hnf(generators);
        let idx: Vec<usize> = (0..r).collect();
        LatticeBasis {
            ambient: generators.rows(),
            basis: h.select_columns(&idx),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<BigInt>]) -> LatticeBasis {
        Self::from_generators(&IntegerMatrix::from_columns(ambient, vectors))
    }

    pub fn zero(ambient: usize) -> LatticeBasis {
        LatticeBasis {
            ambient,
            basis: IntegerMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> LatticeBasis {
        LatticeBasis {
            ambient,
            basis: IntegerMatrix::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    /// Membership by reduction against the echelon basis.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for col in 0..self.rank() {
            let r = self.pivot_row(col);
            if w[..r].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let p = &self.basis[(r, col)];
            if !(&w[r] % p).is_zero() {
                return false;
            }
            let q = &w[r] / p;
            if !q.is_zero() {
                for (i, wi) in w.iter_mut().enumerate().skip(r) {
                    *wi -= &q * &self.basis[(i, col)];
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    fn pivot_row(&self, col: usize) -> usize {
        (0..self.ambient)
            .find(|&i| !self.basis[(i, col)].is_zero())
            .expect("basis columns are nonzero")
    }

    /// `self` contains every vector of `other`.
    pub fn contains_lattice(&self, other: &LatticeBasis) -> bool {
        other.vectors().iter().all(|v| self.contains(v))
    }

    /// Saturated iff `Z^n / L` is torsion-free.
    pub fn is_saturated(&self) -> bool {
        smith_invariants(&self.basis).iter().all(One::is_one)
    }

    /// `(L tensor Q) cap Z^n`.
    pub fn saturation(&self) -> LatticeBasis {
        if self.rank() == 0 {
            return self.clone();
        }
        let normals = kernel_lattice(&self.basis.transpose());
        let a = IntegerMatrix::from_columns(self.ambient, &normals.vectors()).transpose();
        kernel_lattice(&a)
    }

    /// Absolute value of the index `[sat(L) : L]`, the product of invariant factors.
    pub fn index_in_saturation(&self) -> BigInt {
        smith_invariants(&self.basis).iter().product()
    }
}

/// Canonical basis of `{v in Z^cols : M v = 0}`. The result is saturated.
pub fn kernel_lattice(m: &IntegerMatrix) -> LatticeBasis {
    let (_, u, r) = column_hnf_with_transform(m);
    let idx: Vec<usize> = (r..m.cols()).collect();
    LatticeBasis::from_generators(&u.select_columns(&idx))
}

/// Nonzero invariant factors `d1 | d2 | ...` of `m` (positive).
pub fn smith_invariants(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                    if a[(i, j)].abs().is_one() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| a[(bi, bj)].abs().is_one()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut done = true;
            let p = a[(t, t)].clone();
            for i in (t + 1)..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&p);
                a.add_row_multiple(i, t, &(-q));
                if !a[(i, t)].is_zero() {
                    done = false;
                }
            }
            for j in (t + 1)..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&p);
                a.add_col_multiple(j, t, &(-q));
                if !a[(t, j)].is_zero() {
                    done = false;
                }
            }
            if !done {
                // move the smallest remainder in row/column t onto the diagonal
                let mut best = (t, t);
                for i in (t + 1)..rows {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in (t + 1)..cols {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = a[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => a.add_row_multiple(t, i, &BigInt::one()),
                None => break,
            }
        }
        diag.push(a[(t, t)].abs());
        t += 1;
    }
    diag
}

/// Gcd of the maximal nonvanishing minors (the product of the invariant
/// factors), via two Hermite reductions. `1` for the zero matrix.
pub fn determinantal_content(m: &IntegerMatrix) -> BigInt {
    let (h, r) = column_hnf(m);
    if r == 0 {
        return BigInt::one();
    }
    let idx: Vec<usize> = (0..r).collect();
    let (t, _) = column_hnf(&h.select_columns(&idx).transpose());
    (0..r).map(|i| t[(i, i)].clone()).product::<BigInt>().abs()
}

/// An integer solution of `m x = b`, if one exists.
pub fn solve_integer(m: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows());
    let (h, u, r) = column_hnf_with_transform(m);
    let mut rest = b.to_vec();
    let mut y = vec![BigInt::zero(); m.cols()];
    let mut row = 0;
    for (c, yc) in y.iter_mut().enumerate().take(r) {
        while h[(row, c)].is_zero() {
            if !rest[row].is_zero() {
                return None;
            }
            row += 1;
        }
        let (q, rem) = rest[row].div_rem(&h[(row, c)]);
        if !rem.is_zero() {
            return None;
        }
        for (i, ri) in rest.iter_mut().enumerate().skip(row) {
            *ri -= &q * &h[(i, c)];
        }
        *yc = q;
        row += 1;
    }
    if rest.iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(u.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_lattice(&IntegerMatrix::from_rows(&[vec![2, 4]]));
        assert_eq!(k.rank(), 1);
        // canonical sign: pivot (first nonzero) positive
        assert_eq!(k.vectors(), vec![ints(&[2, -1])]);
        assert_eq!(kernel_lattice(&IntegerMatrix::identity(2)).rank(), 0);
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_invariants(&IntegerMatrix::diagonal(&[2, 3])), ints(&[1, 6]));
        assert_eq!(smith_invariants(&IntegerMatrix::diagonal(&[2, 2])), ints(&[2, 2]));
        assert_eq!(
            smith_invariants(&IntegerMatrix::from_rows(&[vec![1, 2], vec![3, 4]])),
            ints(&[1, 2])
        );
        assert!(smith_invariants(&IntegerMatrix::zeros(2, 3)).is_empty());
    }

    #[test]
    fn smith_divisibility_chain() {
        let m = IntegerMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]);
        assert_eq!(smith_invariants(&m), ints(&[2, 2, 60]));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = IntegerMatrix::from_rows(&[vec![2, 0], vec![1, 3]]);
        let b = IntegerMatrix::from_rows(&[vec![2, 2], vec![1, 4]]);
        assert_eq!(LatticeBasis::from_generators(&a), LatticeBasis::from_generators(&b));
    }

    #[test]
    fn content_and_solve() {
        let m = IntegerMatrix::from_rows(&[vec![2, 4, 6], vec![0, 3, 9]]);
        assert_eq!(
            determinantal_content(&m),
            smith_invariants(&m).iter().product::<BigInt>()
        );
        let x = solve_integer(&m, &ints(&[2, 3])).unwrap();
        assert_eq!(m.mul_vec(&x), ints(&[2, 3]));
        assert!(solve_integer(&m, &ints(&[1, 0])).is_none());
        let tall = IntegerMatrix::from_rows(&[vec![1], vec![2]]);
        assert!(solve_integer(&tall, &ints(&[1, 3])).is_none());
        assert_eq!(solve_integer(&tall, &ints(&[3, 6])).unwrap(), ints(&[3]));
    }

    #[test]
    fn membership() {
        let l = LatticeBasis::from_vectors(2, &[ints(&[2, 0]), ints(&[0, 3])]);
        assert!(l.contains(&ints(&[4, -3])));
        assert!(!l.contains(&ints(&[1, 0])));
        assert!(!l.is_saturated());
        assert_eq!(l.index_in_saturation(), BigInt::from(6));
        assert_eq!(l.saturation(), LatticeBasis::full(2));
        let line = LatticeBasis::from_vectors(3, &[ints(&[2, 4, 6])]).saturation();
        assert_eq!(line.vectors(), vec![ints(&[1, 2, 3])]);
    }
}
