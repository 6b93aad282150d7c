//! Splitting types of bundles on the projective line over `Z`, jump primes,
//! normalization, and the parity and `2 h^0` identities.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohomology::{h0_candidate_primes, h0_dim, h0_dim_over, lattice_family, verify_locally_free, LocalFreeness};
use crate::error::{Error, Result};
use crate::exactlat::{primes::primes_up_to, Base, Prime};
use crate::graded::{Form, FreeGraded, GradedMap, GradedPresentation};

/// `O(a) + O(b)` with `a <= b`; serialized as `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    a: i64,
    b: i64,
}

impl SplittingType {
    pub fn new(x: i64, y: i64) -> SplittingType {
        SplittingType {
            a: x.min(y),
            b: x.max(y),
        }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `b - a`.
    pub fn type_number(&self) -> i64 {
        self.b - self.a
    }

    pub fn degree(&self) -> i64 {
        self.a + self.b
    }

    pub fn shifted(&self, t: i64) -> SplittingType {
        SplittingType::new(self.a + t, self.b + t)
    }

    /// `h^0(O(a+d) + O(b+d))`.
    pub fn h0(&self, d: i64) -> usize {
        ((self.a + d + 1).max(0) + (self.b + d + 1).max(0)) as usize
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl Serialize for SplittingType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(s)
    }
}

impl<'de> Deserialize<'de> for SplittingType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SplittingType, D::Error> {
        let [a, b] = <[i64; 2]>::deserialize(d)?;
        if a > b {
            return Err(serde::de::Error::custom("splitting type needs a <= b"));
        }
        Ok(SplittingType { a, b })
    }
}

/// Splitting types over `Q` and at the jump primes; every unlisted prime has
/// the generic type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingProfile {
    pub generic: SplittingType,
    pub jumps: BTreeMap<Prime, SplittingType>,
}

impl SplittingProfile {
    pub fn at(&self, p: &Prime) -> SplittingType {
        self.jumps.get(p).copied().unwrap_or(self.generic)
    }

    pub fn shifted(&self, t: i64) -> SplittingProfile {
        SplittingProfile {
            generic: self.generic.shifted(t),
            jumps: self.jumps.iter().map(|(p, s)| (p.clone(), s.shifted(t))).collect(),
        }
    }

    /// Generic type number and the type number at each jump prime.
    pub fn type_map(&self) -> (i64, BTreeMap<Prime, i64>) {
        (
            self.generic.type_number(),
            self.jumps.iter().map(|(p, s)| (p.clone(), s.type_number())).collect(),
        )
    }

    pub fn is_constant(&self) -> bool {
        self.jumps.is_empty()
    }
}

/// Where to restrict a bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Generic,
    Prime(Prime),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Generic => write!(f, "generic"),
            Point::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Default scan guard `2 + max |twist|`.
pub fn default_guard(p: &GradedPresentation) -> i64 {
    2 + p.all_twists().map(i64::abs).max().unwrap_or(0)
}

/// A locally free sheaf on the projective line over `Z`.
#[derive(Debug, Serialize, Deserialize)]
pub struct BundleHandle {
    presentation: GradedPresentation,
    rank: usize,
    degree: i64,
    guard: i64,
    #[serde(skip)]
    profile: OnceLock<SplittingProfile>,
}

impl Clone for BundleHandle {
    fn clone(&self) -> BundleHandle {
        let profile = OnceLock::new();
        if let Some(p) = self.profile.get() {
            let _ = profile.set(p.clone());
        }
        BundleHandle {
            presentation: self.presentation.clone(),
            rank: self.rank,
            degree: self.degree,
            guard: self.guard,
            profile,
        }
    }
}

impl PartialEq for BundleHandle {
    fn eq(&self, other: &BundleHandle) -> bool {
        self.presentation == other.presentation && self.guard == other.guard
    }
}

impl BundleHandle {
    /// Checks local freeness and caches rank and degree.
    pub fn new(presentation: GradedPresentation) -> Result<BundleHandle> {
        let lf = Self::check(&presentation)?;
        let guard = default_guard(&presentation);
        Ok(BundleHandle {
            presentation,
            rank: lf.rank,
            degree: lf.degree,
            guard,
            profile: OnceLock::new(),
        })
    }

    fn check(p: &GradedPresentation) -> Result<LocalFreeness> {
        if *p.base() != crate::graded::BaseRing::Integers {
            return Err(Error::Malformed("bundle handles need an integral presentation".into()));
        }
        verify_locally_free(p)
    }

    /// Replaces the scan guard (the CLI passes `ARITHSURF_WINDOW_GUARD` here).
    pub fn with_guard(mut self, guard: i64) -> BundleHandle {
        self.guard = guard;
        self.profile = OnceLock::new();
        self
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.presentation
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn guard(&self) -> i64 {
        self.guard
    }

    fn require_rank2(&self) -> Result<()> {
        if self.rank != 2 {
            return Err(Error::RankMismatch(self.rank as i64));
        }
        Ok(())
    }

    /// `E(t)`; the profile cache carries over shifted by `t`.
    pub fn twist(&self, t: i64) -> BundleHandle {
        let profile = OnceLock::new();
        if let Some(p) = self.profile.get() {
            let _ = profile.set(p.shifted(t));
        }
        BundleHandle {
            presentation: self.presentation.twist(t),
            rank: self.rank,
            degree: self.degree + self.rank as i64 * t,
            guard: self.guard,
            profile,
        }
    }

    fn fiber(&self, at: &Point) -> Result<(GradedPresentation, Base)> {
        Ok(match at {
            Point::Generic => (self.presentation.over_rationals(), Base::Rationals),
            Point::Prime(p) => (self.presentation.reduce_mod(p)?, Base::Prime(p.clone())),
        })
    }
}

/// Splitting type of the restriction to the generic fiber or to the fiber at `p`.
pub fn splitting_type(bundle: &BundleHandle, at: &Point) -> Result<SplittingType> {
    bundle.require_rank2()?;
    let (fiber, base) = bundle.fiber(at)?;
    let e = bundle.degree;
    let lo = -(e.abs() + bundle.guard);
    let hi = e.abs() + bundle.guard;
    let h = |d: i64| h0_dim_over(&fiber, &base, d);
    if h(lo)? > 0 {
        return Err(Error::ProfileInconsistent(format!(
            "sections already at twist {lo} over {base}; raise the guard"
        )));
    }
    if h(hi)? == 0 {
        return Err(Error::ProfileInconsistent(format!(
            "no sections up to twist {hi} over {base}"
        )));
    }
    // h0 is nondecreasing in the twist: find the first twist with sections
    let (mut l, mut r) = (lo, hi);
    while r - l > 1 {
        let mid = l + (r - l) / 2;
        if h(mid)? > 0 {
            r = mid;
        } else {
            l = mid;
        }
    }
    let b = -r;
    let a = e - b;
    if a > b {
        return Err(Error::ProfileInconsistent(format!(
            "first sections at twist {r} over {base} give a = {a} > b = {b}"
        )));
    }
    let st = SplittingType::new(a, b);
    let mut probes = vec![r + 1, -a, -a + 1, r + 2, -a + 2];
    probes.retain(|&d| d != r);
    probes.dedup();
    let mut seen = Vec::new();
    for d in probes {
        if seen.contains(&d) || seen.len() == 3 {
            continue;
        }
        seen.push(d);
        let got = h(d)?;
        if got != st.h0(d) {
            return Err(Error::ProfileInconsistent(format!(
                "h0 = {got} at twist {d} over {base}, type {st} predicts {}",
                st.h0(d)
            )));
        }
    }
    Ok(st)
}

/// Primes whose fiber may split differently from the generic fiber: the
/// rank-drop primes of the `h^0` computation at twist `-b_gen - 1`, where any
/// jump first produces extra sections.
pub fn jump_candidates(bundle: &BundleHandle, generic: SplittingType) -> Result<Vec<Prime>> {
    h0_candidate_primes(&bundle.presentation, &[-generic.b() - 1])
}

/// Generic splitting type and all jump primes, each verified by
/// `splitting_type` at that prime.
pub fn type_profile(bundle: &BundleHandle) -> Result<SplittingProfile> {
    if let Some(p) = bundle.profile.get() {
        return Ok(p.clone());
    }
    let generic = splitting_type(bundle, &Point::Generic)?;
    let candidates = jump_candidates(bundle, generic)?;
    let types: Vec<Result<(Prime, SplittingType)>> = candidates
        .into_par_iter()
        .map(|p| Ok((p.clone(), splitting_type(bundle, &Point::Prime(p))?)))
        .collect();
    let mut jumps = BTreeMap::new();
    for r in types {
        let (p, st) = r?;
        if st.degree() != generic.degree() {
            return Err(Error::ProfileInconsistent(format!("degree changes at {p}")));
        }
        if st != generic {
            jumps.insert(p, st);
        }
    }
    let profile = SplittingProfile { generic, jumps };
    let _ = bundle.profile.set(profile.clone());
    Ok(profile)
}

/// Audit of primes up to a bound that the candidate detection did not list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub bound: u64,
    pub checked: Vec<Prime>,
    /// Unlisted primes whose type differs from the generic type (empty unless
    /// the candidate detection is wrong).
    pub unexpected: BTreeMap<Prime, SplittingType>,
}

pub fn audit_primes(bundle: &BundleHandle, bound: u64) -> Result<AuditReport> {
    let profile = type_profile(bundle)?;
    let checked: Vec<Prime> = primes_up_to(bound)
        .into_iter()
        .map(|q| Prime::new(q).expect("sieved prime"))
        .filter(|q| !profile.jumps.contains_key(q))
        .collect();
    let types: Vec<Result<(Prime, SplittingType)>> = checked
        .par_iter()
        .map(|q| Ok((q.clone(), splitting_type(bundle, &Point::Prime(q.clone()))?)))
        .collect();
    let mut unexpected = BTreeMap::new();
    for r in types {
        let (q, st) = r?;
        if st != profile.generic {
            unexpected.insert(q, st);
        }
    }
    Ok(AuditReport {
        bound,
        checked,
        unexpected,
    })
}

/// Twist so that the generic splitting is `(-n-1, -1)`.
pub fn normalize(bundle: &BundleHandle) -> Result<BundleHandle> {
    let g = type_profile(bundle)?.generic;
    Ok(bundle.twist(-1 - g.b()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub generic_type: i64,
    /// `type_p - type_generic` at each jump prime.
    pub deltas: BTreeMap<Prime, i64>,
}

/// Every jump delta is even and positive.
pub fn check_parity(bundle: &BundleHandle) -> Result<ParityReport> {
    let profile = type_profile(bundle)?;
    let t = profile.generic.type_number();
    let mut deltas = BTreeMap::new();
    for (p, st) in &profile.jumps {
        let delta = st.type_number() - t;
        if delta <= 0 || delta % 2 != 0 {
            return Err(Error::ParityViolation {
                prime: p.value().clone(),
                delta,
            });
        }
        deltas.insert(p.clone(), delta);
    }
    Ok(ParityReport {
        generic_type: t,
        deltas,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub prime: Prime,
    pub delta: i64,
    pub h0: usize,
}

/// For the normalized bundle: `type_p - type_generic = 2 h^0(E_p)` at each jump.
pub fn check_type_h0(bundle: &BundleHandle) -> Result<Vec<IdentityEntry>> {
    let normalized = normalize(bundle)?;
    let profile = type_profile(&normalized)?;
    let t = profile.generic.type_number();
    let mut out = Vec::new();
    for (p, st) in &profile.jumps {
        let delta = st.type_number() - t;
        let h = h0_dim(&normalized.presentation.reduce_mod(p)?, 0)?;
        if delta != 2 * h as i64 {
            return Err(Error::IdentityViolation {
                prime: p.value().clone(),
                delta,
                twice_h0: 2 * h as i64,
            });
        }
        out.push(IdentityEntry {
            prime: p.clone(),
            delta,
            h0: h,
        });
    }
    Ok(out)
}

/// A sub-line-bundle `O(b) -> E` with line-bundle quotient `O(a)`; since
/// `H^1(O(b - a)) = 0` the bundle is `O(a) + O(b)` over `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCertificate {
    pub split: SplittingType,
    /// Level `T`: `section` is the generator vector of `x0^(T+b) s` in degree `T`.
    pub level: i64,
    #[serde(with = "crate::exactlat::decimal::vec")]
    pub section: Vec<BigInt>,
    /// Presentation of `E / s O(b)`.
    pub quotient: GradedPresentation,
}

/// Constructive splitting certificate for a bundle of constant type; `None`
/// when the profile has jumps or no witness is found.
pub fn try_split_certificate(bundle: &BundleHandle) -> Result<Option<SplitCertificate>> {
    bundle.require_rank2()?;
    let profile = type_profile(bundle)?;
    if !profile.is_constant() {
        return Ok(None);
    }
    let st = profile.generic;
    let d = -st.b();
    let p = &bundle.presentation;
    let top = crate::cohomology::regularity_bound(p).max(d);
    let fam = lattice_family(p, d, top)?;
    if fam.rank(d) == 0 {
        return Ok(None);
    }
    let t = fam.level;
    let c = t - d;
    let mut coeffs = vec![BigInt::from(0); fam.rank(d)];
    coeffs[0] = BigInt::from(1);
    let columns: Vec<Vec<BigInt>> = (0..=c).map(|k| fam.monomial_multiple(d, &coeffs, k)).collect();
    let gens = p.generators();
    let offsets = gens.piece_offsets(t);
    let new_cols: Vec<Vec<Form>> = columns
        .iter()
        .map(|u| {
            gens.twists()
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    let len = crate::graded::monomial_count(a + t);
                    Form::new(a + t, u[offsets[i]..offsets[i] + len].to_vec()).expect("block length")
                })
                .collect()
        })
        .collect();
    let extra = GradedMap::from_columns(FreeGraded::new(vec![-t; columns.len()]), gens.clone(), new_cols)?;
    let quotient = GradedPresentation::over_integers(p.map().hstack(&extra)?);
    match verify_locally_free(&quotient) {
        Ok(lf) if lf.rank == 1 && lf.degree == st.a() => Ok(Some(SplitCertificate {
            split: st,
            level: t,
            section: columns[0].clone(),
            quotient,
        })),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column_bundle(n: u32, f: &str) -> BundleHandle {
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
        BundleHandle::new(GradedPresentation::over_integers(phi)).unwrap()
    }

    #[test]
    fn split_types() {
        for n in 0..4 {
            let b = BundleHandle::new(GradedPresentation::split(&[0, -n])).unwrap();
            assert_eq!(splitting_type(&b, &Point::Generic).unwrap(), SplittingType::new(-n, 0));
            let prof = type_profile(&b).unwrap();
            assert!(prof.jumps.is_empty());
            assert!(check_parity(&b).unwrap().deltas.is_empty());
        }
    }

    #[test]
    fn five_x0x1_jumps_at_five() {
        let b = column_bundle(2, "5*x0*x1");
        assert_eq!(splitting_type(&b, &Point::Generic).unwrap(), SplittingType::new(1, 1));
        let p5 = Prime::new(5).unwrap();
        assert_eq!(
            splitting_type(&b, &Point::Prime(p5.clone())).unwrap(),
            SplittingType::new(0, 2)
        );
        let prof = type_profile(&b).unwrap();
        assert_eq!(prof.jumps.keys().cloned().collect::<Vec<_>>(), vec![p5]);
        let id = check_type_h0(&b).unwrap();
        assert_eq!((id[0].delta, id[0].h0), (2, 1));
    }

    #[test]
    fn profile_json() {
        let b = column_bundle(2, "6*x0*x1");
        let prof = type_profile(&b).unwrap();
        let s = serde_json::to_string(&prof).unwrap();
        assert_eq!(s, r#"{"generic":[1,1],"jumps":{"2":[0,2],"3":[0,2]}}"#);
        let back: SplittingProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, prof);
    }

    #[test]
    fn normalize_is_idempotent() {
        let b = BundleHandle::new(GradedPresentation::split(&[0, 2])).unwrap();
        let nb = normalize(&b).unwrap();
        assert_eq!(nb.presentation().generators().twists(), &[-3, -1]);
        let nn = normalize(&nb).unwrap();
        assert_eq!(nn.presentation(), nb.presentation());
    }

    #[test]
    fn certificate_for_constant_type() {
        let b = column_bundle(1, "0");
        let cert = try_split_certificate(&b).unwrap().expect("certificate");
        assert_eq!(cert.split, SplittingType::new(0, 1));
        assert!(try_split_certificate(&column_bundle(2, "5*x0*x1")).unwrap().is_none());
    }

    #[test]
    fn rank_checks() {
        let b = BundleHandle::new(GradedPresentation::split(&[0])).unwrap();
        assert_eq!(splitting_type(&b, &Point::Generic), Err(Error::RankMismatch(1)));
    }
}
