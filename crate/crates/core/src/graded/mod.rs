//! Binary forms, graded free modules over `Z[x0, x1]`, degree-compatible maps
//! and cokernel presentations of sheaves on the projective line.

mod form;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlat::{Base, IntegerMatrix, Prime};

pub use form::{monomial_basis, monomial_count, Form};

/// `S(a_1) + ... + S(a_r)`, the section module of `O(a_1) + ... + O(a_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FreeGraded {
    twists: Vec<i64>,
}

impl FreeGraded {
    pub fn new(twists: Vec<i64>) -> FreeGraded {
        FreeGraded { twists }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// Dimension of the degree-`d` piece.
    pub fn piece_dim(&self, d: i64) -> usize {
        self.twists.iter().map(|&a| monomial_count(a + d)).sum()
    }

    /// Start index of each generator's block inside the degree-`d` piece.
    pub fn piece_offsets(&self, d: i64) -> Vec<usize> {
        let mut acc = 0;
        self.twists
            .iter()
            .map(|&a| {
                let o = acc;
                acc += monomial_count(a + d);
                o
            })
            .collect()
    }

    pub fn shifted(&self, t: i64) -> FreeGraded {
        FreeGraded::new(self.twists.iter().map(|a| a + t).collect())
    }

    pub fn max_twist(&self) -> Option<i64> {
        self.twists.iter().copied().max()
    }

    pub fn min_twist(&self) -> Option<i64> {
        self.twists.iter().copied().min()
    }

    /// Matrix of multiplication by `x0^e0 x1^e1` from the degree-`d` piece to
    /// the degree `d + e0 + e1` piece.
    pub fn multiplication_piece(&self, d: i64, e0: u32, e1: u32) -> IntegerMatrix {
        let e = (e0 + e1) as i64;
        let src = self.piece_offsets(d);
        let dst = self.piece_offsets(d + e);
        let mut m = IntegerMatrix::zeros(self.piece_dim(d + e), self.piece_dim(d));
        for (k, &a) in self.twists.iter().enumerate() {
            for v in 0..monomial_count(a + d) {
                m[(dst[k] + v + e1 as usize, src[k] + v)] = BigInt::from(1);
            }
        }
        m
    }
}

/// A degree-zero map `source -> target`; entry `(i, j)` is a form of degree
/// `target[i] - source[j]` (the zero form when that is negative).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct GradedMap {
    source: FreeGraded,
    target: FreeGraded,
    entries: Vec<Vec<Form>>,
}

#[derive(Deserialize)]
struct RawMap {
    source: FreeGraded,
    target: FreeGraded,
    entries: Vec<Vec<Form>>,
}

impl TryFrom<RawMap> for GradedMap {
    type Error = Error;
    fn try_from(raw: RawMap) -> Result<GradedMap> {
        GradedMap::new(raw.source, raw.target, raw.entries)
    }
}

impl GradedMap {
    pub fn new(source: FreeGraded, target: FreeGraded, entries: Vec<Vec<Form>>) -> Result<GradedMap> {
        if entries.len() != target.rank() {
            return Err(Error::Malformed(format!(
                "map needs {} rows, got {}",
                target.rank(),
                entries.len()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != source.rank() {
                return Err(Error::Malformed(format!(
                    "row {i} needs {} entries, got {}",
                    source.rank(),
                    row.len()
                )));
            }
            for (j, f) in row.iter().enumerate() {
                let want = target.twists[i] - source.twists[j];
                let ok = f.degree() == want || (want < 0 && f.is_zero());
                if !ok {
                    return Err(Error::DegreeMismatch(format!(
                        "entry ({i},{j}) has degree {}, expected {want}",
                        f.degree()
                    )));
                }
            }
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, f)| {
                        let want = target.twists[i] - source.twists[j];
                        if want < 0 {
                            Form::zero(want)
                        } else {
                            f
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(GradedMap {
            source,
            target,
            entries,
        })
    }

    /// Map given by its columns: `columns[j][i]` is entry `(i, j)`.
    pub fn from_columns(source: FreeGraded, target: FreeGraded, columns: Vec<Vec<Form>>) -> Result<GradedMap> {
        let rows = target.rank();
        let mut entries: Vec<Vec<Form>> = vec![Vec::with_capacity(columns.len()); rows];
        for col in columns {
            if col.len() != rows {
                return Err(Error::Malformed(format!("column needs {rows} entries")));
            }
            for (i, f) in col.into_iter().enumerate() {
                entries[i].push(f);
            }
        }
        GradedMap::new(source, target, entries)
    }

    pub fn zero(source: FreeGraded, target: FreeGraded) -> GradedMap {
        let entries = target
            .twists
            .iter()
            .map(|a| source.twists.iter().map(|b| Form::zero(a - b)).collect())
            .collect();
        GradedMap {
            source,
            target,
            entries,
        }
    }

    pub fn identity(module: FreeGraded) -> GradedMap {
        let mut m = GradedMap::zero(module.clone(), module);
        for i in 0..m.source.rank() {
            m.entries[i][i] = Form::constant(1);
        }
        m
    }

    pub fn source(&self) -> &FreeGraded {
        &self.source
    }

    pub fn target(&self) -> &FreeGraded {
        &self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Form>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Form> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.target != self.source {
            return Err(Error::Malformed("maps are not composable".into()));
        }
        let mut out = GradedMap::zero(other.source.clone(), self.target.clone());
        for i in 0..self.target.rank() {
            for j in 0..other.source.rank() {
                let want = self.target.twists[i] - other.source.twists[j];
                if want < 0 {
                    continue;
                }
                let mut acc = Form::zero(want);
                for k in 0..self.source.rank() {
                    let a = &self.entries[i][k];
                    let b = &other.entries[k][j];
                    if a.degree() >= 0 && b.degree() >= 0 {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn map_forms(&self, f: impl Fn(&Form) -> Form) -> GradedMap {
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self.entries.iter().map(|row| row.iter().map(&f).collect()).collect(),
        }
    }

    pub fn shifted(&self, t: i64) -> GradedMap {
        GradedMap {
            source: self.source.shifted(t),
            target: self.target.shifted(t),
            entries: self.entries.clone(),
        }
    }

    /// Horizontal concatenation `[self | other]` over a common target.
    pub fn hstack(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.target != other.target {
            return Err(Error::Malformed("hstack needs a common target".into()));
        }
        let mut twists = self.source.twists.clone();
        twists.extend_from_slice(&other.source.twists);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Ok(GradedMap {
            source: FreeGraded::new(twists),
            target: self.target.clone(),
            entries,
        })
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.entries
            .iter()
            .flatten()
            .flat_map(|f| f.coeffs().iter())
            .map(|c| if c < &BigInt::zero() { -c } else { c.clone() })
            .max()
            .unwrap_or_default()
    }
}

/// Matrix of `phi` on degree-`d` pieces in the monomial bases.
pub fn degree_piece(phi: &GradedMap, d: i64) -> IntegerMatrix {
    let rows = phi.target.piece_dim(d);
    let cols = phi.source.piece_dim(d);
    let row_off = phi.target.piece_offsets(d);
    let col_off = phi.source.piece_offsets(d);
    let mut m = IntegerMatrix::zeros(rows, cols);
    for (j, &b) in phi.source.twists.iter().enumerate() {
        let n_src = monomial_count(b + d);
        if n_src == 0 {
            continue;
        }
        for (i, row) in phi.entries.iter().enumerate() {
            let f = &row[j];
            if f.degree() < 0 {
                continue;
            }
            for (t, c) in f.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for v in 0..n_src {
                    m[(row_off[i] + v + t, col_off[j] + v)] += c;
                }
            }
        }
    }
    m
}

/// Coefficient ring of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    Rationals,
    Prime(Prime),
}

impl BaseRing {
    /// Field used for dimension counts: `Z` counts lattice ranks, which agree with `Q`.
    pub fn field(&self) -> Base {
        match self {
            BaseRing::Integers | BaseRing::Rationals => Base::Rationals,
            BaseRing::Prime(p) => Base::Prime(p.clone()),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::Rationals => write!(f, "Q"),
            BaseRing::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for BaseRing {
    type Err = Error;
    fn from_str(s: &str) -> Result<BaseRing> {
        match s.trim() {
            "Z" | "ZZ" | "integers" => Ok(BaseRing::Integers),
            "Q" | "QQ" | "rationals" => Ok(BaseRing::Rationals),
            other => Ok(BaseRing::Prime(other.parse()?)),
        }
    }
}

impl Serialize for BaseRing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BaseRing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<BaseRing, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Sheaf `coker(Phi)` where `Phi: relations -> generators`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct GradedPresentation {
    base: BaseRing,
    map: GradedMap,
}

#[derive(Deserialize)]
struct RawPresentation {
    base: BaseRing,
    map: GradedMap,
}

impl TryFrom<RawPresentation> for GradedPresentation {
    type Error = Error;
    fn try_from(raw: RawPresentation) -> Result<GradedPresentation> {
        GradedPresentation::new(raw.base, raw.map)
    }
}

impl GradedPresentation {
    pub fn new(base: BaseRing, map: GradedMap) -> Result<GradedPresentation> {
        if let BaseRing::Prime(p) = &base {
            let ok = map
                .entries
                .iter()
                .flatten()
                .flat_map(|f| f.coeffs().iter())
                .all(|c| c >= &BigInt::zero() && c < p.value());
            if !ok {
                return Err(Error::Malformed(format!(
                    "coefficients of a presentation over F_{p} must lie in [0, {p})"
                )));
            }
        }
        Ok(GradedPresentation { base, map })
    }

    pub fn over_integers(map: GradedMap) -> GradedPresentation {
        GradedPresentation {
            base: BaseRing::Integers,
            map,
        }
    }

    /// `O(a_1) + ... + O(a_r)` with no relations.
    pub fn split(twists: &[i64]) -> GradedPresentation {
        let gens = FreeGraded::new(twists.to_vec());
        GradedPresentation::over_integers(GradedMap::zero(FreeGraded::new(Vec::new()), gens))
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn map(&self) -> &GradedMap {
        &self.map
    }

    pub fn generators(&self) -> &FreeGraded {
        &self.map.target
    }

    pub fn relations(&self) -> &FreeGraded {
        &self.map.source
    }

    pub fn degree_piece(&self, d: i64) -> IntegerMatrix {
        degree_piece(&self.map, d)
    }

    /// Same presentation read over `Q`.
    pub fn over_rationals(&self) -> GradedPresentation {
        GradedPresentation {
            base: BaseRing::Rationals,
            map: self.map.clone(),
        }
    }

    pub fn reduce_mod(&self, p: &Prime) -> Result<GradedPresentation> {
        match &self.base {
            BaseRing::Integers => {}
            BaseRing::Prime(q) if q == p => return Ok(self.clone()),
            other => {
                return Err(Error::Malformed(format!(
                    "reduce_mod needs an integral presentation, base is {other}"
                )))
            }
        }
        Ok(GradedPresentation {
            base: BaseRing::Prime(p.clone()),
            map: self.map.map_forms(|f| f.reduce_mod(p)),
        })
    }

    pub fn twist(&self, t: i64) -> GradedPresentation {
        GradedPresentation {
            base: self.base.clone(),
            map: self.map.shifted(t),
        }
    }

    /// All twists of generators and relations.
    pub fn all_twists(&self) -> impl Iterator<Item = i64> + '_ {
        self.generators()
            .twists()
            .iter()
            .chain(self.relations().twists())
            .copied()
    }

    /// Positive reduction of an integer coefficient for the base ring.
    pub fn normalize_coeff(&self, c: &BigInt) -> BigInt {
        match &self.base {
            BaseRing::Prime(p) => c.mod_floor(p.value()),
            _ => c.clone(),
        }
    }
}
