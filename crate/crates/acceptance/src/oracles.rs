//! Brute-force reference computations. None of these share an algorithm with
//! the library routine they check.

use arithsurf::exactlat::{rank_over, Base, IntegerMatrix};
use arithsurf::graded::GradedPresentation;
use num_bigint::BigInt;
use num_traits::Zero;

/// `h^0(E(d))` as `Hom(m^c, M)_d` for the full power ideal `m^c` at one fixed
/// level `c`: tuples `(w_0, ..., w_c)` of degree-`(d+c)` module elements with
/// `x1 w_k = x0 w_{k+1}`. Exact when the presentation map is injective.
pub fn h0_power_ideal(p: &GradedPresentation, base: &Base, d: i64) -> usize {
    let top = p.relations().twists().iter().map(|b| -b - 1).max().unwrap_or(d);
    let c = (top - d).max(0) + 2;
    let g = p.generators();
    let n = g.piece_dim(d + c);
    let n1 = g.piece_dim(d + c + 1);
    let phi_c = p.degree_piece(d + c);
    let phi_c1 = p.degree_piece(d + c + 1);
    let f1 = phi_c1.cols();
    let cu = c as usize;
    let x0 = g.multiplication_piece(d + c, 1, 0);
    let x1 = g.multiplication_piece(d + c, 0, 1);
    let mut s = IntegerMatrix::zeros(cu * n1, (cu + 1) * n + cu * f1);
    for k in 0..cu {
        s.set_block(k * n1, k * n, &x1);
        s.set_block(k * n1, (k + 1) * n, &x0.neg());
        s.set_block(k * n1, (cu + 1) * n + k * f1, &phi_c1);
    }
    let nullity = |m: &IntegerMatrix| m.cols() - rank_over(m, base);
    nullity(&s) - cu * nullity(&phi_c1) - (cu + 1) * rank_over(&phi_c, base)
}

/// `h^0(E(d))` from the long exact sequence of `0 -> F -> G -> E -> 0`,
/// with `H^1(O(t))` spanned by the Laurent monomials `x0^-i x1^-j`,
/// `i, j >= 1`, `i + j = -t`. Needs an injective presentation map.
pub fn h0_cech(p: &GradedPresentation, base: &Base, d: i64) -> usize {
    let phi = p.map();
    let h0 = |twists: &[i64]| -> i64 { twists.iter().map(|a| (a + d + 1).max(0)).sum() };
    let h1_basis = |t: i64| -> Vec<(i64, i64)> { (1..=(-t - 1)).map(|i| (i, -t - i)).collect() };
    let src: Vec<Vec<(i64, i64)>> = phi.source().twists().iter().map(|b| h1_basis(b + d)).collect();
    let tgt: Vec<Vec<(i64, i64)>> = phi.target().twists().iter().map(|a| h1_basis(a + d)).collect();
    let cols: usize = src.iter().map(Vec::len).sum();
    let rows: usize = tgt.iter().map(Vec::len).sum();
    let mut m = vec![vec![BigInt::zero(); cols]; rows];
    let mut col0 = 0;
    for (j, sb) in src.iter().enumerate() {
        let mut row0 = 0;
        for (i, tb) in tgt.iter().enumerate() {
            let f = phi.entry(i, j);
            for (c, &(u, v)) in sb.iter().enumerate() {
                for (k, coeff) in f.coeffs().iter().enumerate() {
                    let e0 = f.degree() - k as i64 - u;
                    let e1 = k as i64 - v;
                    if e0 < 0 && e1 < 0 {
                        let r = tb.iter().position(|&w| w == (-e0, -e1)).expect("monomial in basis");
                        m[row0 + r][col0 + c] += coeff;
                    }
                }
            }
            row0 += tb.len();
        }
        col0 += sb.len();
    }
    let kernel = if cols == 0 {
        0
    } else if rows == 0 {
        cols
    } else {
        cols - rank_over(&IntegerMatrix::from_rows(&m), base)
    };
    (h0(phi.target().twists()) - h0(phi.source().twists()) + kernel as i64) as usize
}

/// Splitting type `(a, b)`, `a <= b`, of a rank-2 bundle read off [`h0_cech`].
pub fn splitting_type_cech(p: &GradedPresentation, base: &Base) -> (i64, i64) {
    let phi = p.map();
    let e: i64 = phi.target().twists().iter().sum::<i64>() - phi.source().twists().iter().sum::<i64>();
    let amin = phi.target().twists().iter().copied().min().expect("generators");
    let mut t = -(e - amin) - 1;
    while h0_cech(p, base, t) == 0 {
        t += 1;
    }
    (e + t, -t)
}

/// Classes `d H - sum m_i E_i` with `C^2 = K.C = -1`, `|d| <= 3`, `|m_i| <= 2`.
pub fn minus_one_classes_brute(r: usize) -> Vec<(i64, Vec<i64>)> {
    let mut out = Vec::new();
    let total = 5usize.pow(r as u32);
    for d in -3..=3i64 {
        for code in 0..total {
            let mut c = code;
            let m: Vec<i64> = (0..r)
                .map(|_| {
                    let v = (c % 5) as i64 - 2;
                    c /= 5;
                    v
                })
                .collect();
            let sq = d * d - m.iter().map(|x| x * x).sum::<i64>();
            let kc = -3 * d + m.iter().sum::<i64>();
            if sq == -1 && kc == -1 {
                out.push((d, m));
            }
        }
    }
    out.sort();
    out
}
