//! Integral point configurations in the projective plane over `Z`, general
//! position modulo every prime, and the Picard lattice of the blow-up.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlat::{
    column_hnf_with_transform, mod_p_rank, prime_divisors, rational_rank, smith_invariants, IntegerMatrix, Prime,
};

pub const MAX_POINTS: usize = 8;

/// Primitive integer triple with first nonzero coordinate positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint([BigInt; 3]);

impl ProjectivePoint {
    pub fn new(coords: [BigInt; 3]) -> Result<ProjectivePoint> {
        let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Err(Error::Malformed("the zero vector is not a projective point".into()));
        }
        let mut c = coords.map(|x| x / &g);
        if c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            c = c.map(|x| -x);
        }
        Ok(ProjectivePoint(c))
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<ProjectivePoint> {
        ProjectivePoint::new([a.into(), b.into(), c.into()])
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.0
    }

    /// Standard basis point `e_{i+1}`.
    pub fn basis(i: usize) -> ProjectivePoint {
        let mut c = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        c[i] = BigInt::one();
        ProjectivePoint(c)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for ProjectivePoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<ProjectivePoint> {
        let parts: Vec<&str> = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(':')
            .collect();
        if parts.len() != 3 {
            return Err(Error::Malformed(format!("point {s:?} must look like a:b:c")));
        }
        let mut c = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (slot, p) in c.iter_mut().zip(parts) {
            let p = p.trim();
            let p = p.strip_prefix('+').unwrap_or(p);
            *slot = p
                .parse()
                .map_err(|_| Error::Malformed(format!("bad coordinate {p:?} in {s:?}")))?;
        }
        ProjectivePoint::new(c)
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ProjectivePoint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered list of at most eight points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PointConfiguration(Vec<ProjectivePoint>);

impl<'de> Deserialize<'de> for PointConfiguration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<PointConfiguration, D::Error> {
        PointConfiguration::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl PointConfiguration {
    pub fn new(points: Vec<ProjectivePoint>) -> Result<PointConfiguration> {
        if points.len() > MAX_POINTS {
            return Err(Error::TooManyPoints(format!(
                "{} points exceed the cap of {MAX_POINTS}",
                points.len()
            )));
        }
        Ok(PointConfiguration(points))
    }

    pub fn parse(points: &[&str]) -> Result<PointConfiguration> {
        PointConfiguration::new(points.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn rows_matrix(points: &[&ProjectivePoint]) -> IntegerMatrix {
    IntegerMatrix::from_rows(&points.iter().map(|p| p.0.to_vec()).collect::<Vec<_>>())
}

fn veronese_row(p: &ProjectivePoint) -> Vec<BigInt> {
    let [x, y, z] = &p.0;
    vec![x * x, y * y, z * z, x * y, x * z, y * z]
}

/// `|det|` of a square matrix.
fn abs_det(m: &IntegerMatrix) -> BigInt {
    let inv = smith_invariants(m);
    if inv.len() < m.rows() {
        BigInt::zero()
    } else {
        inv.iter().product()
    }
}

fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn primes_of(n: &BigInt) -> Vec<Prime> {
    prime_divisors(n)
        .into_iter()
        .map(|p| Prime::new(p).expect("prime divisor"))
        .collect()
}

/// A subset of the configuration that fails general position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two points meeting modulo `primes`; `identical` when they agree over `Z`.
    Pair {
        points: [usize; 2],
        #[serde(with = "crate::exactlat::decimal")]
        minor_gcd: BigInt,
        primes: Vec<Prime>,
        identical: bool,
    },
    /// Three points collinear modulo `primes`, or over `Q` when the
    /// determinant is 0.
    Triple {
        points: [usize; 3],
        #[serde(with = "crate::exactlat::decimal")]
        determinant: BigInt,
        primes: Vec<Prime>,
    },
    /// Six points on a conic modulo `primes`, or over `Q` when the
    /// determinant is 0.
    Sextuple {
        points: [usize; 6],
        #[serde(with = "crate::exactlat::decimal")]
        determinant: BigInt,
        primes: Vec<Prime>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps = |v: &[Prime]| v.iter().map(Prime::to_string).collect::<Vec<_>>().join(",");
        match self {
            Witness::Pair {
                points,
                identical: true,
                ..
            } => {
                write!(f, "points {} and {} are identical", points[0], points[1])
            }
            Witness::Pair { points, primes, .. } => {
                write!(
                    f,
                    "points {} and {} collide modulo {}",
                    points[0],
                    points[1],
                    ps(primes)
                )
            }
            Witness::Triple {
                points, determinant, ..
            } if determinant.is_zero() => {
                write!(f, "points {points:?} are collinear")
            }
            Witness::Triple { points, primes, .. } => {
                write!(f, "points {points:?} are collinear modulo {}", ps(primes))
            }
            Witness::Sextuple {
                points, determinant, ..
            } if determinant.is_zero() => {
                write!(f, "points {points:?} lie on a conic")
            }
            Witness::Sextuple { points, primes, .. } => {
                write!(f, "points {points:?} lie on a conic modulo {}", ps(primes))
            }
        }
    }
}

impl Witness {
    /// Rechecks the witness directly: rank deficiency modulo each listed
    /// prime, or over `Q` for a zero determinant.
    pub fn reverify(&self, c: &PointConfiguration) -> bool {
        let pts = c.points();
        let (m, full, primes, zero) = match self {
            Witness::Pair {
                points,
                primes,
                identical,
                ..
            } => {
                if *identical {
                    return pts[points[0]] == pts[points[1]];
                }
                (rows_matrix(&[&pts[points[0]], &pts[points[1]]]), 2, primes, false)
            }
            Witness::Triple {
                points,
                determinant,
                primes,
            } => {
                let sel: Vec<&ProjectivePoint> = points.iter().map(|&i| &pts[i]).collect();
                (rows_matrix(&sel), 3, primes, determinant.is_zero())
            }
            Witness::Sextuple {
                points,
                determinant,
                primes,
            } => {
                let rows: Vec<Vec<BigInt>> = points.iter().map(|&i| veronese_row(&pts[i])).collect();
                (IntegerMatrix::from_rows(&rows), 6, primes, determinant.is_zero())
            }
        };
        if zero {
            return rational_rank(&m) < full;
        }
        !primes.is_empty() && rational_rank(&m) == full && primes.iter().all(|p| mod_p_rank(&m, p) < full)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { witness: Witness },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail { witness } => Some(witness),
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn pair_witness(c: &PointConfiguration, i: usize, j: usize) -> Option<Witness> {
    let (a, b) = (&c.0[i].0, &c.0[j].0);
    let minors = [
        &a[0] * &b[1] - &a[1] * &b[0],
        &a[0] * &b[2] - &a[2] * &b[0],
        &a[1] * &b[2] - &a[2] * &b[1],
    ];
    let g = minors.iter().fold(BigInt::zero(), |g, m| g.gcd(m));
    if g.is_one() {
        return None;
    }
    Some(Witness::Pair {
        points: [i, j],
        primes: if g.is_zero() { Vec::new() } else { primes_of(&g) },
        identical: g.is_zero(),
        minor_gcd: g,
    })
}

impl Witness {
    /// Smallest prime at which the subset degenerates; `None` when it
    /// degenerates over `Q` and hence at every prime.
    pub fn smallest_prime(&self) -> Option<&Prime> {
        match self {
            Witness::Pair { primes, .. } | Witness::Triple { primes, .. } | Witness::Sextuple { primes, .. } => {
                primes.first()
            }
        }
    }
}

/// Failure with the smallest offending prime, generic failures first, ties
/// in subset order.
fn pick(failures: impl Iterator<Item = Witness>) -> Verdict {
    let mut best: Option<Witness> = None;
    for w in failures {
        let better = match &best {
            None => true,
            Some(b) => match (w.smallest_prime(), b.smallest_prime()) {
                (None, Some(_)) => true,
                (Some(p), Some(q)) => p < q,
                _ => false,
            },
        };
        if better {
            best = Some(w);
        }
    }
    match best {
        None => Verdict::Pass,
        Some(witness) => Verdict::Fail { witness },
    }
}

/// Pairwise minors have unit gcd: no two points meet modulo any prime.
pub fn pairwise_distinct_everywhere(c: &PointConfiguration) -> Verdict {
    pick(
        subsets(c.len(), 2)
            .into_iter()
            .filter_map(|s| pair_witness(c, s[0], s[1])),
    )
}

/// Every triple has determinant `+-1`.
pub fn no_three_collinear_everywhere(c: &PointConfiguration) -> Verdict {
    pick(subsets(c.len(), 3).into_iter().filter_map(|s| {
        let m = [c.0[s[0]].0.clone(), c.0[s[1]].0.clone(), c.0[s[2]].0.clone()];
        let det = det3(&m);
        (!det.abs().is_one()).then(|| Witness::Triple {
            points: [s[0], s[1], s[2]],
            primes: if det.is_zero() { Vec::new() } else { primes_of(&det) },
            determinant: det,
        })
    }))
}

/// Every six points have a Veronese determinant `+-1`; vacuous below six.
pub fn no_six_on_conic_everywhere(c: &PointConfiguration) -> Verdict {
    pick(subsets(c.len(), 6).into_iter().filter_map(|s| {
        let rows: Vec<Vec<BigInt>> = s.iter().map(|&i| veronese_row(&c.0[i])).collect();
        let det = abs_det(&IntegerMatrix::from_rows(&rows));
        (!det.is_one()).then(|| Witness::Sextuple {
            points: [s[0], s[1], s[2], s[3], s[4], s[5]],
            primes: if det.is_zero() { Vec::new() } else { primes_of(&det) },
            determinant: det,
        })
    }))
}

/// Distinctness, then collinearity, then the conic condition; the first
/// failing check wins. Cubic conditions for eight points are not checked.
pub fn general_position(c: &PointConfiguration) -> Verdict {
    for check in [
        pairwise_distinct_everywhere,
        no_three_collinear_everywhere,
        no_six_on_conic_everywhere,
    ] {
        let v = check(c);
        if !v.passed() {
            return v;
        }
    }
    Verdict::Pass
}

/// A pair colliding or a triple collinear modulo 2; exists for any five
/// points since the projective plane over `F_2` has no 5-arc.
pub fn mod2_witness(c: &PointConfiguration) -> Option<Witness> {
    let two = Prime::new(2u32).expect("2 is prime");
    for s in subsets(c.len(), 2) {
        let m = rows_matrix(&[&c.0[s[0]], &c.0[s[1]]]);
        if mod_p_rank(&m, &two) < 2 {
            return Some(pair_witness(c, s[0], s[1]).expect("collision mod 2"));
        }
    }
    for s in subsets(c.len(), 3) {
        let m = [c.0[s[0]].0.clone(), c.0[s[1]].0.clone(), c.0[s[2]].0.clone()];
        let det = det3(&m);
        if det.is_even() {
            return Some(Witness::Triple {
                points: [s[0], s[1], s[2]],
                primes: if det.is_zero() { Vec::new() } else { primes_of(&det) },
                determinant: det,
            });
        }
    }
    None
}

type Mat3 = [[BigInt; 3]; 3];

fn mat3_from(m: &IntegerMatrix) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)].clone()))
}

fn mat3_identity() -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigInt::one() } else { BigInt::zero() }))
}

fn mat3_apply(m: &Mat3, v: &[BigInt; 3]) -> [BigInt; 3] {
    std::array::from_fn(|i| (0..3).map(|j| &m[i][j] * &v[j]).sum())
}

/// Inverse of a unimodular matrix via the adjugate.
fn mat3_inverse(m: &Mat3) -> Mat3 {
    let det = det3(m);
    assert!(det.abs().is_one(), "matrix is not unimodular");
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let r0: Vec<usize> = [0, 1, 2].into_iter().filter(|&r| r != j).collect();
            let cols: Vec<usize> = [0, 1, 2].into_iter().filter(|&c| c != i).collect();
            let minor = &m[r0[0]][cols[0]] * &m[r0[1]][cols[1]] - &m[r0[0]][cols[1]] * &m[r0[1]][cols[0]];
            let sign = if (i + j) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            sign * minor * &det
        })
    })
}

/// `matrix` sends each input point to the standard one at the same index;
/// `inverse` goes back. `signs` are the unit rescalings of the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Standardization {
    #[serde(with = "mat3_serde")]
    pub matrix: Mat3,
    #[serde(with = "mat3_serde")]
    pub inverse: Mat3,
    pub signs: [i8; 3],
    pub standard: PointConfiguration,
}

mod mat3_serde {
    use super::Mat3;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Mat3, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(BigInt::to_string).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat3, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
            return Err(serde::de::Error::custom("expected a 3x3 matrix"));
        }
        let mut out: Mat3 = super::mat3_identity();
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                out[i][j] = v.parse().map_err(serde::de::Error::custom)?;
            }
        }
        Ok(out)
    }
}

/// The standard configuration of `r <= 4` points: `e1, e2, e3, [1:1:1]`.
pub fn standard_configuration(r: usize) -> PointConfiguration {
    let mut pts: Vec<ProjectivePoint> = (0..r.min(3)).map(ProjectivePoint::basis).collect();
    if r == 4 {
        pts.push(ProjectivePoint::from_i64(1, 1, 1).expect("nonzero"));
    }
    PointConfiguration(pts)
}

/// Moves a configuration in general position to the standard one by an
/// element of `GL_3(Z)`.
pub fn standardize(c: &PointConfiguration) -> Result<Standardization> {
    let r = c.len();
    if r >= 5 {
        let w = mod2_witness(c).expect("five points in P^2(F_2) always degenerate");
        return Err(Error::TooManyPoints(format!("{r} points; modulo 2: {w}")));
    }
    if let Verdict::Fail { witness } = general_position(c) {
        return Err(Error::NotGeneralPosition(witness.to_string()));
    }
    // rows Z_i with unit maximal minors: Z U = [I | 0], so U^T Z_i = e_i
    let k = r.min(3);
    let mut to_std = if k == 0 {
        mat3_identity()
    } else {
        let m = rows_matrix(&c.0[..k].iter().collect::<Vec<_>>());
        let (h, u, rank) = column_hnf_with_transform(&m);
        debug_assert_eq!(rank, k);
        debug_assert!((0..k).all(|i| h[(i, i)].is_one()));
        mat3_from(&u.transpose())
    };
    let mut signs = [1i8; 3];
    if r == 4 {
        let w = mat3_apply(&to_std, &c.0[3].0);
        for i in 0..3 {
            if !w[i].abs().is_one() {
                return Err(Error::NotGeneralPosition(format!(
                    "fourth point maps to {}:{}:{} outside the torus",
                    w[0], w[1], w[2]
                )));
            }
            signs[i] = if w[i].is_negative() { -1 } else { 1 };
        }
        for (i, row) in to_std.iter_mut().enumerate() {
            for v in row.iter_mut() {
                *v *= signs[i];
            }
        }
    }
    let standard = standard_configuration(r);
    debug_assert!(c
        .0
        .iter()
        .zip(&standard.0)
        .all(|(p, s)| ProjectivePoint::new(mat3_apply(&to_std, &p.0)).as_ref() == Ok(s)));
    Ok(Standardization {
        inverse: mat3_inverse(&to_std),
        matrix: to_std,
        signs,
        standard,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `P2` or `blowup_P2_<r>pts`.
    pub model: String,
    pub points: usize,
    pub k_squared: i64,
    pub standardization: Standardization,
}

/// Del Pezzo surface obtained by blowing up the configuration.
pub fn classify(c: &PointConfiguration) -> Result<Classification> {
    let standardization = standardize(c)?;
    let r = c.len();
    Ok(Classification {
        model: if r == 0 {
            "P2".into()
        } else {
            format!("blowup_P2_{r}pts")
        },
        points: r,
        k_squared: 9 - r as i64,
        standardization,
    })
}

/// `d H - sum m_i E_i` in the Picard lattice of the blow-up at `r` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeClass {
    pub d: i64,
    pub m: Vec<i64>,
}

impl LatticeClass {
    pub fn new(d: i64, m: Vec<i64>) -> LatticeClass {
        LatticeClass { d, m }
    }

    /// `K = -3H + sum E_i`, written `(-3; -1, ..., -1)`.
    pub fn canonical(r: usize) -> LatticeClass {
        LatticeClass::new(-3, vec![-1; r])
    }

    pub fn exceptional(r: usize, i: usize) -> LatticeClass {
        let mut m = vec![0; r];
        m[i] = -1;
        LatticeClass::new(0, m)
    }

    pub fn dot(&self, other: &LatticeClass) -> i64 {
        assert_eq!(self.m.len(), other.m.len(), "classes on different blow-ups");
        self.d * other.d - self.m.iter().zip(&other.m).map(|(a, b)| a * b).sum::<i64>()
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.m.iter().map(i64::to_string).collect();
        write!(f, "({}; {})", self.d, m.join(","))
    }
}

/// All classes with `C^2 = K.C = -1`. Writing `s = sum m_i`, these satisfy
/// `s = 3d - 1` and `sum m_i^2 = d^2 + 1`, and Cauchy-Schwarz
/// `(3d - 1)^2 <= r (d^2 + 1)` bounds `d` for `r <= 8`.
pub fn minus_one_classes(r: usize) -> Result<Vec<LatticeClass>> {
    if r > MAX_POINTS {
        return Err(Error::TooManyPoints(format!("{r} exceeds the cap of {MAX_POINTS}")));
    }
    let mut out = Vec::new();
    let rr = r as i64;
    for d in -2..=8i64 {
        if (3 * d - 1).pow(2) > rr * (d * d + 1) {
            continue;
        }
        let norm = d * d + 1;
        let bound = (norm as f64).sqrt() as i64 + 1;
        let mut m = vec![0i64; r];
        fill(&mut m, 0, bound, norm, 3 * d - 1, d, &mut out);
    }
    out.sort();
    Ok(out)
}

fn fill(m: &mut Vec<i64>, i: usize, bound: i64, norm_left: i64, sum_left: i64, d: i64, out: &mut Vec<LatticeClass>) {
    if i == m.len() {
        if norm_left == 0 && sum_left == 0 {
            out.push(LatticeClass::new(d, m.clone()));
        }
        return;
    }
    let rest = (m.len() - i - 1) as i64;
    for v in -bound..=bound {
        let n = norm_left - v * v;
        if n < 0 {
            continue;
        }
        let s = sum_left - v;
        // remaining entries must reach sum s with squares summing to n
        if s * s > rest * n {
            continue;
        }
        m[i] = v;
        fill(m, i + 1, bound, n, s, d, out);
    }
    m[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: &[&str]) -> PointConfiguration {
        PointConfiguration::parse(p).unwrap()
    }

    #[test]
    fn canonical_points() {
        let p: ProjectivePoint = "-2:4:-6".parse().unwrap();
        assert_eq!(p.to_string(), "1:-2:3");
        assert_eq!("0:-3:0".parse::<ProjectivePoint>().unwrap().to_string(), "0:1:0");
        assert!("0:0:0".parse::<ProjectivePoint>().is_err());
        assert!("1:2".parse::<ProjectivePoint>().is_err());
        let c: PointConfiguration = serde_json::from_str(r#"["1:0:0", "+0:1:0"]"#).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"["1:0:0","0:1:0"]"#);
    }

    #[test]
    fn pairs() {
        let v = pairwise_distinct_everywhere(&cfg(&["0:0:1", "5:0:1"]));
        match v.witness().unwrap() {
            Witness::Pair { primes, minor_gcd, .. } => {
                assert_eq!(minor_gcd, &BigInt::from(5));
                assert_eq!(primes, &vec![Prime::new(5u32).unwrap()]);
            }
            w => panic!("{w:?}"),
        }
        assert!(pairwise_distinct_everywhere(&cfg(&["1:0:0", "0:1:0"])).passed());
        let c = cfg(&["1:2:3", "1:2:3"]);
        let v = pairwise_distinct_everywhere(&c);
        assert!(matches!(v.witness(), Some(Witness::Pair { identical: true, .. })));
        assert!(v.witness().unwrap().reverify(&c));
    }

    #[test]
    fn triples() {
        let c = cfg(&["0:0:1", "5:0:1", "0:1:0"]);
        let v = no_three_collinear_everywhere(&c);
        match v.witness().unwrap() {
            Witness::Triple {
                determinant, primes, ..
            } => {
                assert_eq!(determinant.abs(), BigInt::from(5));
                assert_eq!(primes, &vec![Prime::new(5u32).unwrap()]);
            }
            w => panic!("{w:?}"),
        }
        assert!(v.witness().unwrap().reverify(&c));
        assert!(no_three_collinear_everywhere(&cfg(&["1:0:0", "0:1:0", "0:0:1"])).passed());
        let c = cfg(&["1:0:0", "0:1:0", "1:1:0"]);
        let v = no_three_collinear_everywhere(&c);
        assert!(matches!(v.witness(), Some(Witness::Triple { determinant, .. }) if determinant.is_zero()));
        assert!(v.witness().unwrap().reverify(&c));
    }

    #[test]
    fn conics() {
        assert!(no_six_on_conic_everywhere(&cfg(&["1:0:0", "0:1:0"])).passed());
        // six points on x*y = z^2
        let c = cfg(&["1:1:1", "1:4:2", "4:1:2", "1:9:3", "9:1:3", "4:9:6"]);
        let v = no_six_on_conic_everywhere(&c);
        assert!(matches!(v.witness(), Some(Witness::Sextuple { determinant, .. }) if determinant.is_zero()));
        assert!(v.witness().unwrap().reverify(&c));
    }

    #[test]
    fn general_position_examples() {
        assert!(general_position(&cfg(&["1:0:0", "0:1:0", "0:0:1", "1:1:1"])).passed());
        let c = cfg(&["1:0:0", "0:1:0", "0:0:1", "2:3:5"]);
        match general_position(&c).witness().unwrap() {
            Witness::Triple {
                points,
                determinant,
                primes,
            } => {
                assert_eq!(points, &[1, 2, 3]);
                assert_eq!(determinant.abs(), BigInt::from(2));
                assert_eq!(primes, &vec![Prime::new(2u32).unwrap()]);
            }
            w => panic!("{w:?}"),
        }
        let c = cfg(&["1:0:0", "0:1:0", "0:0:1", "1:1:1", "1:-1:1"]);
        let v = general_position(&c);
        match v.witness().unwrap() {
            Witness::Pair { points, primes, .. } => {
                assert_eq!(points, &[3, 4]);
                assert_eq!(primes, &vec![Prime::new(2u32).unwrap()]);
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn standardization() {
        let c = cfg(&["1:0:0", "0:1:0", "0:0:1", "1:1:1"]);
        let s = standardize(&c).unwrap();
        assert_eq!(s.matrix, mat3_identity());
        assert_eq!(s.standard, c);

        let c = cfg(&["1:0:0", "1:1:0", "1:1:1", "1:-1:1"]);
        match standardize(&c) {
            Ok(s) => {
                assert_eq!(s.standard, standard_configuration(4));
                for (p, q) in c.points().iter().zip(s.standard.points()) {
                    assert_eq!(&ProjectivePoint::new(mat3_apply(&s.matrix, p.coords())).unwrap(), q);
                    assert_eq!(&ProjectivePoint::new(mat3_apply(&s.inverse, q.coords())).unwrap(), p);
                }
            }
            Err(Error::NotGeneralPosition(_)) => {
                assert!(!general_position(&c).passed());
            }
            Err(e) => panic!("{e}"),
        }

        let c = cfg(&["1:0:0", "0:1:0", "0:0:1", "1:1:1", "1:2:3"]);
        assert!(matches!(standardize(&c), Err(Error::TooManyPoints(msg)) if msg.contains("modulo 2")));
        let c = cfg(&["2:3:5", "1:1:2"]);
        let s = standardize(&c).unwrap();
        assert_eq!(s.standard, standard_configuration(2));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&cfg(&[])).unwrap().k_squared, 9);
        let k = classify(&cfg(&["1:0:0", "0:1:0", "0:0:1", "1:1:1"])).unwrap();
        assert_eq!((k.k_squared, k.model.as_str()), (5, "blowup_P2_4pts"));
        assert_eq!(classify(&cfg(&["1:0:0", "0:1:0"])).unwrap().k_squared, 7);
    }

    #[test]
    fn exceptional_curves() {
        let counts: Vec<usize> = (0..=8).map(|r| minus_one_classes(r).unwrap().len()).collect();
        assert_eq!(counts, vec![0, 1, 3, 6, 10, 16, 27, 56, 240]);
        let one = minus_one_classes(1).unwrap();
        assert_eq!(one, vec![LatticeClass::exceptional(1, 0)]);
        for c in minus_one_classes(6).unwrap() {
            assert_eq!(c.self_intersection(), -1);
            assert_eq!(c.dot(&LatticeClass::canonical(6)), -1);
        }
        assert_eq!(LatticeClass::canonical(4).self_intersection(), 5);
    }
}
