//! Cohomology of presented sheaves on the projective line.
//!
//! `H^0(E(d))` is computed as `Hom((x0^e, x1^e), M)_d` for the presented
//! module `M`: pairs `(u, v)` of degree-`(d+e)` elements with
//! `x1^e u = x0^e v`. All dimensions are rank counts of integer matrices
//! over the chosen field, so the primes at which a computation over `Z`
//! could change are exactly the prime divisors of their determinantal
//! contents.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlat::{
    determinantal_content, kernel_lattice, kernel_over, pivot_columns, prime_divisors, rank_over, solve_integer, Base,
    IntegerMatrix, LatticeBasis, Prime,
};
use crate::graded::{BaseRing, GradedPresentation};

/// Twist from which the module agrees with the sections of its sheaf:
/// `max(max_j(-b_j) - 1, max_i(-a_i))` over relation twists `b_j` and
/// generator twists `a_i`.
pub fn regularity_bound(p: &GradedPresentation) -> i64 {
    let rel = p.relations().twists().iter().map(|b| -b - 1).max();
    let gen = p.generators().twists().iter().map(|a| -a).max();
    rel.into_iter().chain(gen).max().unwrap_or(0)
}

/// Twist-independent spread of a presentation, used in the level cap.
fn twist_span(p: &GradedPresentation) -> i64 {
    let lo = p.all_twists().min();
    let hi = p.all_twists().max();
    match (lo, hi) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    }
}

/// First level tried and the hard cap for the stabilization at twist `d`.
pub fn level_window(p: &GradedPresentation, d: i64) -> (i64, i64) {
    let e0 = (regularity_bound(p) - d).max(1);
    (e0, e0 + twist_span(p) + 4)
}

/// Rank counter that can record every matrix it ranks.
struct Ranks<'a> {
    base: &'a Base,
    seen: Option<&'a mut Vec<IntegerMatrix>>,
}

impl Ranks<'_> {
    fn rank(&mut self, m: &IntegerMatrix) -> usize {
        if let Some(seen) = self.seen.as_deref_mut() {
            if !seen.contains(m) {
                seen.push(m.clone());
            }
        }
        rank_over(m, self.base)
    }

    fn nullity(&mut self, m: &IntegerMatrix) -> usize {
        m.cols() - self.rank(m)
    }
}

/// `[x1^e | -x0^e | Phi_{d+2e}]` acting on `(u, v, w)`.
fn pair_system(p: &GradedPresentation, d: i64, e: i64) -> IntegerMatrix {
    let g = p.generators();
    let x1 = g.multiplication_piece(d + e, 0, e as u32);
    let x0 = g.multiplication_piece(d + e, e as u32, 0);
    x1.hstack(&x0.neg()).hstack(&p.degree_piece(d + 2 * e))
}

fn pair_dim(p: &GradedPresentation, ranks: &mut Ranks, d: i64, e: i64) -> usize {
    let big = pair_system(p, d, e);
    let phi2 = p.degree_piece(d + 2 * e);
    let phi1 = p.degree_piece(d + e);
    ranks.nullity(&big) - ranks.nullity(&phi2) - 2 * ranks.rank(&phi1)
}

/// Whether `(u, v) -> (x0 u, x1 v)` is injective from level `e` to `e + 1`.
fn transition_injective(p: &GradedPresentation, ranks: &mut Ranks, d: i64, e: i64) -> bool {
    let g = p.generators();
    let n = g.piece_dim(d + e);
    let x1e = g.multiplication_piece(d + e, 0, e as u32);
    let x0e = g.multiplication_piece(d + e, e as u32, 0).neg();
    let x0 = g.multiplication_piece(d + e, 1, 0);
    let x1 = g.multiplication_piece(d + e, 0, 1);
    let phi2 = p.degree_piece(d + 2 * e);
    let phi_next = p.degree_piece(d + e + 1);
    let phi1 = p.degree_piece(d + e);
    let h = [g.piece_dim(d + 2 * e), g.piece_dim(d + e + 1), g.piece_dim(d + e + 1)];
    let w = [n, n, phi2.cols(), phi_next.cols(), phi_next.cols()];
    let s = IntegerMatrix::from_blocks(
        &h,
        &w,
        &[
            vec![Some(&x1e), Some(&x0e), Some(&phi2), None, None],
            vec![Some(&x0), None, None, Some(&phi_next), None],
            vec![None, Some(&x1), None, None, Some(&phi_next)],
        ],
    );
    let trivial = ranks.nullity(&phi2) + 2 * ranks.nullity(&phi_next);
    ranks.nullity(&s) - trivial == 2 * ranks.rank(&phi1)
}

fn stable_level(
    p: &GradedPresentation,
    base: &Base,
    d: i64,
    seen: Option<&mut Vec<IntegerMatrix>>,
) -> Result<(i64, usize)> {
    let mut ranks = Ranks { base, seen };
    let (e0, cap) = level_window(p, d);
    let mut cur = pair_dim(p, &mut ranks, d, e0);
    for e in e0..cap {
        let next = pair_dim(p, &mut ranks, d, e + 1);
        if next == cur && transition_injective(p, &mut ranks, d, e) {
            return Ok((e, cur));
        }
        cur = next;
    }
    Err(Error::WindowExhausted { twist: d, cap })
}

/// Global sections of `E(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionSpace {
    pub twist: i64,
    pub dimension: usize,
    /// The level `e` of the representation below.
    pub level: i64,
    /// Columns are pairs `(u, v)` of generator coefficient vectors in degree
    /// `twist + level` with `x1^level u = x0^level v` in the module; `u` and
    /// `v` are the images of the section under `x0^level`, `x1^level`.
    pub basis: IntegerMatrix,
}

/// `h^0(E(d))` with a basis, over the field of the presentation (`Q` for `Z`,
/// where the dimension is the rank of the section lattice).
pub fn h0(p: &GradedPresentation, d: i64) -> Result<SectionSpace> {
    h0_over(p, &p.base().field(), d)
}

pub fn h0_over(p: &GradedPresentation, base: &Base, d: i64) -> Result<SectionSpace> {
    let (e, dim) = stable_level(p, base, d, None)?;
    let basis = pair_basis(p, base, d, e);
    debug_assert_eq!(basis.cols(), dim);
    Ok(SectionSpace {
        twist: d,
        dimension: dim,
        level: e,
        basis,
    })
}

/// Dimension only.
pub fn h0_dim(p: &GradedPresentation, d: i64) -> Result<usize> {
    Ok(stable_level(p, &p.base().field(), d, None)?.1)
}

pub fn h0_dim_over(p: &GradedPresentation, base: &Base, d: i64) -> Result<usize> {
    Ok(stable_level(p, base, d, None)?.1)
}

fn pair_basis(p: &GradedPresentation, base: &Base, d: i64, e: i64) -> IntegerMatrix {
    let n = p.generators().piece_dim(d + e);
    let kernel = kernel_over(&pair_system(p, d, e), base);
    let pairs: Vec<Vec<BigInt>> = kernel.into_iter().map(|v| v[..2 * n].to_vec()).collect();
    let phi1 = p.degree_piece(d + e);
    let rel = IntegerMatrix::block_diag(&[&phi1, &phi1]);
    let cand = IntegerMatrix::from_columns(2 * n, &pairs);
    let piv = pivot_columns(&rel.hstack(&cand), base);
    let keep: Vec<usize> = piv
        .into_iter()
        .filter(|&c| c >= rel.cols())
        .map(|c| c - rel.cols())
        .collect();
    cand.select_columns(&keep)
}

/// Every matrix whose rank enters the computation of `h^0(E(d))` over `Q`.
pub fn h0_matrices(p: &GradedPresentation, d: i64) -> Result<Vec<IntegerMatrix>> {
    let mut seen = Vec::new();
    stable_level(p, &Base::Rationals, d, Some(&mut seen))?;
    Ok(seen)
}

/// Primes dividing the determinantal content of some matrix in `mats`: the
/// only primes at which one of their ranks drops.
pub fn rank_drop_primes(mats: &[IntegerMatrix]) -> Vec<Prime> {
    let contents: Vec<BigInt> = mats.par_iter().map(determinantal_content).collect();
    let mut out: Vec<BigInt> = contents.iter().flat_map(prime_divisors).collect();
    out.sort();
    out.dedup();
    out.into_iter().map(|q| Prime::new(q).expect("prime divisor")).collect()
}

/// Primes at which `h^0(E(d))` for some `d` in `twists` may differ from its
/// value over `Q`.
pub fn h0_candidate_primes(p: &GradedPresentation, twists: &[i64]) -> Result<Vec<Prime>> {
    let mut mats = Vec::new();
    for &d in twists {
        for m in h0_matrices(&p.over_rationals(), d)? {
            if !mats.contains(&m) {
                mats.push(m);
            }
        }
    }
    Ok(rank_drop_primes(&mats))
}

/// Probe twist for rank and degree: `regularity_bound + 2`.
pub fn probe_twist(p: &GradedPresentation) -> i64 {
    regularity_bound(p) + 2
}

fn module_dim(p: &GradedPresentation, base: &Base, d: i64) -> i64 {
    let phi = p.degree_piece(d);
    (phi.rows() - rank_over(&phi, base)) as i64
}

/// `(rank, degree)` read off the Hilbert function at the probe twists.
pub fn sheaf_rank_degree(p: &GradedPresentation) -> Result<(usize, i64)> {
    sheaf_rank_degree_over(p, &p.base().field())
}

pub fn sheaf_rank_degree_over(p: &GradedPresentation, base: &Base) -> Result<(usize, i64)> {
    let d = probe_twist(p);
    let m: Vec<i64> = (0..3).map(|k| module_dim(p, base, d + k)).collect();
    let r = m[1] - m[0];
    let e = m[0] - r * (d + 1);
    if r < 0 || m[2] != r * (d + 3) + e {
        return Err(Error::NotLocallyFree(format!(
            "Hilbert function {m:?} at twists {d}.. is not linear"
        )));
    }
    Ok((r as usize, e))
}

/// `h^1(E(d)) = h^0(E(d)) - r(d+1) - e`.
pub fn h1(p: &GradedPresentation, d: i64) -> Result<usize> {
    let (r, e) = sheaf_rank_degree(p)?;
    let h = h0_dim(p, d)? as i64;
    let v = h - r as i64 * (d + 1) - e;
    if v < 0 {
        return Err(Error::NotLocallyFree(format!(
            "h0 = {h} at twist {d} is below the Euler characteristic"
        )));
    }
    Ok(v as usize)
}

/// Twist below which a torsion-free sheaf with this presentation has no
/// sections: `(r-1) min_i a_i - e - 1`.
pub fn vanishing_twist(p: &GradedPresentation, rank: usize, degree: i64) -> i64 {
    let amin = p.generators().min_twist().unwrap_or(0);
    (rank as i64 - 1).max(0) * amin - degree - 1
}

/// Result of a local-freeness check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFreeness {
    pub rank: usize,
    pub degree: i64,
    /// Primes whose fibers were checked individually.
    pub checked_primes: Vec<Prime>,
}

fn check_fiber(p: &GradedPresentation, base: &Base) -> Result<(usize, i64)> {
    let (r, e) = sheaf_rank_degree_over(p, base)?;
    if r == 0 && e != 0 {
        return Err(Error::NotLocallyFree(format!(
            "torsion sheaf of length {e} over {base}"
        )));
    }
    let low = vanishing_twist(p, r, e);
    let h = h0_dim_over(p, base, low)?;
    if h > 0 {
        return Err(Error::NotLocallyFree(format!(
            "h0 = {h} at twist {low} over {base}: torsion subsheaf"
        )));
    }
    Ok((r, e))
}

/// Checks that the presented sheaf is locally free. Over `Z` the generic
/// fiber and every fiber at a rank-drop prime of the matrices used are
/// checked, and all fibers must share rank and degree.
pub fn verify_locally_free(p: &GradedPresentation) -> Result<LocalFreeness> {
    let base = p.base().field();
    let (r, e) = check_fiber(p, &base)?;
    let mut checked = Vec::new();
    if *p.base() == BaseRing::Integers {
        let d = probe_twist(p);
        let mut mats: Vec<IntegerMatrix> = (0..3).map(|k| p.degree_piece(d + k)).collect();
        mats.extend(h0_matrices(&p.over_rationals(), vanishing_twist(p, r, e))?);
        for q in rank_drop_primes(&mats) {
            let fiber = p.reduce_mod(&q)?;
            let (rq, eq) = check_fiber(&fiber, &Base::Prime(q.clone()))?;
            if (rq, eq) != (r, e) {
                return Err(Error::NotLocallyFree(format!(
                    "fiber over {q} has rank {rq} and degree {eq}, generic fiber ({r}, {e})"
                )));
            }
            checked.push(q);
        }
    }
    Ok(LocalFreeness {
        rank: r,
        degree: e,
        checked_primes: checked,
    })
}

/// Saturated section lattices `H^0(E(d))` over `Z` for `d` in a window, all
/// embedded in the module piece `M_T` through `s -> x0^(T-d) s`, together with
/// the multiplication maps between consecutive twists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionLatticeFamily {
    pub d_min: i64,
    pub d_max: i64,
    /// The level `T`.
    pub level: i64,
    /// Rows give coordinates on `M_T = G_T / im Phi_T`.
    pub coordinates: IntegerMatrix,
    /// Right inverse of `coordinates`: lifts coordinates to generator vectors.
    pub lift: IntegerMatrix,
    pub lattices: Vec<LatticeBasis>,
    /// `x0_maps[k]` expresses `x0 * basis(d_min + k)` in `basis(d_min + k + 1)`.
    pub x0_maps: Vec<IntegerMatrix>,
    pub x1_maps: Vec<IntegerMatrix>,
}

impl SectionLatticeFamily {
    pub fn lattice(&self, d: i64) -> &LatticeBasis {
        &self.lattices[(d - self.d_min) as usize]
    }

    pub fn rank(&self, d: i64) -> usize {
        self.lattice(d).rank()
    }

    /// Generator vector in degree `T` of `x0^(T-d-k) x1^k s`, for the section
    /// `s` of `E(d)` with coordinates `coeffs` in the lattice basis at `d`.
    /// Needs `d_max = T`.
    pub fn monomial_multiple(&self, d: i64, coeffs: &[BigInt], k: i64) -> Vec<BigInt> {
        assert_eq!(self.d_max, self.level, "family must reach the level");
        let mut y = coeffs.to_vec();
        let mut t = d;
        for _ in 0..k {
            y = self.x1_maps[(t - self.d_min) as usize].mul_vec(&y);
            t += 1;
        }
        while t < self.level {
            y = self.x0_maps[(t - self.d_min) as usize].mul_vec(&y);
            t += 1;
        }
        let coords = self.lattice(self.level).basis().mul_vec(&y);
        self.lift.mul_vec(&coords)
    }
}

/// Section lattices over `Z` for `d` in `[d_min, d_max]`.
pub fn lattice_family(p: &GradedPresentation, d_min: i64, d_max: i64) -> Result<SectionLatticeFamily> {
    if *p.base() != BaseRing::Integers {
        return Err(Error::Malformed("lattice_family needs an integral presentation".into()));
    }
    if d_min > d_max {
        return Err(Error::Malformed(format!("empty window [{d_min}, {d_max}]")));
    }
    let t = regularity_bound(p).max(d_max);
    let g = p.generators();
    let n_t = g.piece_dim(t);
    let phi_t = p.degree_piece(t);
    if !determinantal_content(&phi_t).eq(&BigInt::from(1)) {
        return Err(Error::NotLocallyFree(format!("module has Z-torsion in degree {t}")));
    }
    let normals = kernel_lattice(&phi_t.transpose()).vectors();
    let coordinates = IntegerMatrix::from_columns(n_t, &normals).transpose();
    let ambient = coordinates.rows();
    let mut lift_cols = Vec::with_capacity(ambient);
    for i in 0..ambient {
        let mut unit = vec![BigInt::from(0); ambient];
        unit[i] = BigInt::from(1);
        lift_cols.push(solve_integer(&coordinates, &unit).expect("coordinates are surjective"));
    }
    let lift = IntegerMatrix::from_columns(n_t, &lift_cols);

    let mut lattices = Vec::new();
    for d in d_min..=d_max {
        if d == t {
            lattices.push(LatticeBasis::full(ambient));
            continue;
        }
        let e = t - d;
        let kernel = kernel_over(&pair_system(p, d, e), &Base::Rationals);
        let us: Vec<Vec<BigInt>> = kernel.iter().map(|v| coordinates.mul_vec(&v[..n_t])).collect();
        lattices.push(LatticeBasis::from_vectors(ambient, &us).saturation());
    }

    let unsupported = |d: i64| Error::NotLocallyFree(format!("multiplication out of H0(E({d})) fails"));
    let x0_t = g.multiplication_piece(t, 1, 0);
    let x1_t = g.multiplication_piece(t, 0, 1);
    let shift_system = x0_t.hstack(&p.degree_piece(t + 1));
    let mut x0_maps = Vec::new();
    let mut x1_maps = Vec::new();
    for d in d_min..d_max {
        let k = (d - d_min) as usize;
        let (src, dst) = (&lattices[k], &lattices[k + 1]);
        let mut c0 = Vec::new();
        let mut c1 = Vec::new();
        for y in src.vectors() {
            c0.push(solve_integer(dst.basis(), &y).ok_or_else(|| unsupported(d))?);
            let rhs = x1_t.mul_vec(&lift.mul_vec(&y));
            let z = solve_integer(&shift_system, &rhs).ok_or_else(|| unsupported(d))?;
            let u = coordinates.mul_vec(&z[..n_t]);
            c1.push(solve_integer(dst.basis(), &u).ok_or_else(|| unsupported(d))?);
        }
        x0_maps.push(IntegerMatrix::from_columns(dst.rank(), &c0));
        x1_maps.push(IntegerMatrix::from_columns(dst.rank(), &c1));
    }
    Ok(SectionLatticeFamily {
        d_min,
        d_max,
        level: t,
        coordinates,
        lift,
        lattices,
        x0_maps,
        x1_maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{Form, FreeGraded, GradedMap};

    fn hirzebruch(n: u32, f: &str) -> GradedPresentation {
        let phi = GradedMap::from_columns(
            FreeGraded::new(vec![-(n as i64)]),
            FreeGraded::new(vec![0, 0, 0]),
            vec![vec![
                Form::x0_pow(n),
                Form::x1_pow(n),
                Form::parse(f, Some(n as i64)).unwrap(),
            ]],
        )
        .unwrap();
        GradedPresentation::over_integers(phi)
    }

    #[test]
    fn line_bundles() {
        let o = GradedPresentation::split(&[0]);
        assert_eq!(h0(&o, 3).unwrap().dimension, 4);
        assert_eq!(h0(&o, -1).unwrap().dimension, 0);
        assert_eq!(sheaf_rank_degree(&o).unwrap(), (1, 0));
        for n in -1..4 {
            assert_eq!(h1(&GradedPresentation::split(&[n]), 0).unwrap(), 0);
        }
        assert_eq!(h1(&GradedPresentation::split(&[-2]), 0).unwrap(), 1);
        for n in 0..3 {
            assert_eq!(h1(&GradedPresentation::split(&[-n - 2]), 0).unwrap(), n as usize + 1);
        }
    }

    #[test]
    fn split_rank_two() {
        let p = GradedPresentation::split(&[-1, -4]);
        assert_eq!(h0(&p, 0).unwrap().dimension, 0);
        assert_eq!(
            sheaf_rank_degree(&GradedPresentation::split(&[0, -3])).unwrap(),
            (2, -3)
        );
    }

    #[test]
    fn hirzebruch_rank_degree() {
        for n in 1..4 {
            let p = hirzebruch(n, &format!("{}*x0^{}", 0, n));
            assert_eq!(sheaf_rank_degree(&p).unwrap(), (2, n as i64));
            let lf = verify_locally_free(&p).unwrap();
            assert_eq!((lf.rank, lf.degree), (2, n as i64));
        }
    }

    #[test]
    fn torsion_is_rejected() {
        let phi = GradedMap::new(
            FreeGraded::new(vec![-1]),
            FreeGraded::new(vec![0]),
            vec![vec![Form::x0_pow(1)]],
        )
        .unwrap();
        let p = GradedPresentation::over_integers(phi);
        assert_eq!(sheaf_rank_degree(&p).unwrap(), (0, 1));
        assert!(matches!(verify_locally_free(&p), Err(Error::NotLocallyFree(_))));
        // sections of a skyscraper in every twist
        for d in -3..3 {
            assert_eq!(h0(&p, d).unwrap().dimension, 1);
        }
    }

    #[test]
    fn ideal_sheaf_over_z_fails_at_a_prime() {
        // coker (x0, 2 x1): locally free generically, torsion in the fiber at 2
        let phi = GradedMap::new(
            FreeGraded::new(vec![-1]),
            FreeGraded::new(vec![0, 0]),
            vec![vec![Form::x0_pow(1)], vec![Form::monomial(2, 0, 1)]],
        )
        .unwrap();
        let p = GradedPresentation::over_integers(phi);
        assert_eq!(sheaf_rank_degree(&p).unwrap(), (1, 1));
        assert!(matches!(verify_locally_free(&p), Err(Error::NotLocallyFree(_))));
    }

    #[test]
    fn family_of_split_bundle() {
        let p = GradedPresentation::split(&[0, 0]);
        let fam = lattice_family(&p, 0, 1).unwrap();
        assert_eq!(fam.rank(0), 2);
        assert_eq!(fam.rank(1), 4);
        assert_eq!(crate::exactlat::rational_rank(&fam.x0_maps[0]), 2);
        assert_eq!(crate::exactlat::rational_rank(&fam.x1_maps[0]), 2);
    }

    #[test]
    fn family_matches_h0() {
        let p = hirzebruch(2, "3*x0*x1");
        let fam = lattice_family(&p, -3, 3).unwrap();
        for d in -3..=3 {
            assert_eq!(fam.rank(d), h0_dim(&p, d).unwrap(), "d={d}");
            assert!(fam.lattice(d).is_saturated());
        }
    }
}
