//! Elementary transformations of fiber type: kernels of surjections
//! `E -> i_* O(m)` onto a closed fiber of the projective line over `Z`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bundles::{splitting_type, type_profile, BundleHandle, Point, SplittingProfile, SplittingType};
use crate::error::{Error, Result};
use crate::exactlat::{mod_p_kernel, mod_p_solve, pivot_columns, primes::extended_gcd, Base, IntegerMatrix, Prime};
use crate::graded::{degree_piece, Form, FreeGraded, GradedMap, GradedPresentation};

/// A surjection from a bundle onto `O(m)` on the fiber over `p`, given by one
/// form over `F_p` per generator of the bundle's presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberQuotient {
    p: Prime,
    m: i64,
    forms: Vec<Form>,
}

#[derive(Serialize, Deserialize)]
struct RawQuotient {
    p: Prime,
    m: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<Form>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<Form>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    forms: Option<Vec<Form>>,
}

impl Serialize for FiberQuotient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = if self.forms.len() == 2 {
            RawQuotient {
                p: self.p.clone(),
                m: self.m,
                g: Some(self.forms[0].clone()),
                h: Some(self.forms[1].clone()),
                forms: None,
            }
        } else {
            RawQuotient {
                p: self.p.clone(),
                m: self.m,
                g: None,
                h: None,
                forms: Some(self.forms.clone()),
            }
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiberQuotient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<FiberQuotient, D::Error> {
        let raw = RawQuotient::deserialize(d)?;
        let forms = match (raw.g, raw.h, raw.forms) {
            (Some(g), Some(h), None) => vec![g, h],
            (None, None, Some(f)) => f,
            _ => {
                return Err(serde::de::Error::custom(
                    "a fiber quotient needs either \"g\" and \"h\" or \"forms\"",
                ))
            }
        };
        Ok(FiberQuotient::new(raw.p, raw.m, forms))
    }
}

impl FiberQuotient {
    /// Coefficients are reduced into `[0, p)`.
    pub fn new(p: Prime, m: i64, forms: Vec<Form>) -> FiberQuotient {
        let forms = forms.iter().map(|f| f.reduce_mod(&p)).collect();
        FiberQuotient { p, m, forms }
    }

    /// The `(g, h)` shape against a rank-2 split source.
    pub fn pair(p: Prime, m: i64, g: Form, h: Form) -> FiberQuotient {
        FiberQuotient::new(p, m, vec![g, h])
    }

    pub fn p(&self) -> &Prime {
        &self.p
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    /// Composite with a map `G' -> G` of generator modules.
    pub fn pull_back(&self, along: &GradedMap) -> Result<FiberQuotient> {
        let row = GradedMap::new(
            along.target().clone(),
            FreeGraded::new(vec![self.m]),
            vec![self.forms.clone()],
        )?;
        let composite = row.compose(along)?;
        Ok(FiberQuotient::new(
            self.p.clone(),
            self.m,
            composite.entries()[0].clone(),
        ))
    }

    fn as_row(&self, generators: &FreeGraded) -> Result<GradedMap> {
        GradedMap::new(
            generators.clone(),
            FreeGraded::new(vec![self.m]),
            vec![self.forms.clone()],
        )
    }
}

/// Center of a transformation: a fiber quotient, or a horizontal curve
/// (rejected).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformCenter {
    Fiber(FiberQuotient),
    Horizontal { equation: Form },
}

fn fit(f: Form, degree: i64) -> Form {
    if f.is_zero() {
        Form::zero(degree)
    } else {
        f
    }
}

/// Checks degrees, vanishing on the relations modulo `p`, and surjectivity on
/// the fiber. Returns the quotient with its zero forms retagged to the
/// expected degrees.
pub fn validate_quotient(bundle: &BundleHandle, q: &FiberQuotient) -> Result<FiberQuotient> {
    let pres = bundle.presentation();
    let gens = pres.generators();
    if q.forms.len() != gens.rank() {
        return Err(Error::DegreeMismatch(format!(
            "quotient has {} forms for {} generators",
            q.forms.len(),
            gens.rank()
        )));
    }
    if gens.twists().iter().all(|&a| q.m < a) {
        return Err(Error::DegreeMismatch(format!(
            "target twist {} is below every generator twist {:?}",
            q.m,
            gens.twists()
        )));
    }
    let mut forms = Vec::with_capacity(q.forms.len());
    for (f, &a) in q.forms.iter().zip(gens.twists()) {
        let want = q.m - a;
        if !f.is_zero() && f.degree() != want {
            return Err(Error::DegreeMismatch(format!(
                "form {f} on a generator of twist {a} must have degree {want}"
            )));
        }
        forms.push(fit(f.clone(), want));
    }
    let q = FiberQuotient::new(q.p.clone(), q.m, forms);
    let row = q.as_row(gens)?;
    let on_relations = row.compose(pres.map())?;
    if on_relations.entries()[0].iter().any(|f| !f.reduce_mod(&q.p).is_zero()) {
        return Err(Error::IncompatibleQuotient(q.p.value().clone()));
    }
    // An m-primary ideal generated in degrees <= t contains every form of
    // degree 2t - 1, so checking that one piece decides surjectivity.
    let top = q.forms.iter().filter(|f| !f.is_zero()).map(Form::degree).max();
    let t = match top {
        None => 0,
        Some(t) => (2 * t - 1).max(t),
    };
    let d = t - q.m;
    let piece = degree_piece(&row, d);
    let rank = crate::exactlat::mod_p_rank(&piece, &q.p);
    if rank < piece.rows() {
        return Err(Error::NotSurjective { degree: d });
    }
    Ok(q)
}

fn to_forms(module: &FreeGraded, d: i64, v: &[BigInt]) -> Vec<Form> {
    let offsets = module.piece_offsets(d);
    module
        .twists()
        .iter()
        .zip(offsets)
        .map(|(&a, o)| {
            let n = crate::graded::monomial_count(a + d);
            Form::new(a + d, v[o..o + n].to_vec()).expect("block length")
        })
        .collect()
}

fn to_vector(module: &FreeGraded, d: i64, forms: &[Form]) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(module.piece_dim(d));
    for (f, &a) in forms.iter().zip(module.twists()) {
        if a + d >= 0 {
            v.extend(f.coeffs().iter().cloned());
        }
    }
    v
}

/// Homogeneous basis of the kernel of the fiber map, a free module of rank
/// `r - 1` over `F_p[x0, x1]`, as `(degree, components)`.
fn kernel_basis(gens: &FreeGraded, q: &FiberQuotient) -> Result<Vec<(i64, Vec<Form>)>> {
    let need = gens.rank() - 1;
    let mut basis = Vec::new();
    if need == 0 {
        return Ok(basis);
    }
    let row = q.as_row(gens)?;
    let top_form = q.forms.iter().map(|f| f.degree().max(0)).max().unwrap_or(0);
    let start = -gens.max_twist().unwrap_or(0);
    let cap = start + 2 * top_form + 2 * (gens.max_twist().unwrap() - gens.min_twist().unwrap()) + 4;
    let base = Base::Prime(q.p.clone());
    let mut previous: Vec<Vec<BigInt>> = Vec::new();
    let mut d = start;
    while basis.len() < need {
        if d > cap {
            return Err(Error::WindowExhausted { twist: d, cap });
        }
        let kernel = mod_p_kernel(&degree_piece(&row, d), &q.p);
        let mut span: Vec<Vec<BigInt>> = Vec::new();
        if !previous.is_empty() {
            let x0 = gens.multiplication_piece(d - 1, 1, 0);
            let x1 = gens.multiplication_piece(d - 1, 0, 1);
            for v in &previous {
                span.push(x0.mul_vec(v));
                span.push(x1.mul_vec(v));
            }
        }
        if !kernel.is_empty() {
            let mut cols = span.clone();
            cols.extend(kernel.iter().cloned());
            let m = IntegerMatrix::from_columns(gens.piece_dim(d), &cols);
            for c in pivot_columns(&m, &base) {
                if c >= span.len() {
                    let v = &kernel[c - span.len()];
                    let forms = to_forms(gens, d, v)
                        .into_iter()
                        .map(|f| f.reduce_mod_symmetric(&q.p))
                        .collect();
                    basis.push((d, forms));
                }
            }
        }
        previous = kernel;
        d += 1;
    }
    if basis.len() > need {
        return Err(Error::NotSurjective { degree: d - 1 - q.m });
    }
    Ok(basis)
}

/// Output of a transformation together with the inclusion of generator
/// modules `G' -> G` realizing the kernel inside the source.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub bundle: BundleHandle,
    pub inclusion: GradedMap,
}

/// Kernel of `E -> i_* O(m)`.
pub fn apply(bundle: &BundleHandle, q: &FiberQuotient) -> Result<BundleHandle> {
    Ok(apply_many(bundle, std::slice::from_ref(q))?.bundle)
}

/// Kernel of `E -> sum_i i_* O(m_i)` for quotients at distinct primes.
pub fn apply_many(bundle: &BundleHandle, quotients: &[FiberQuotient]) -> Result<Transformed> {
    let (t, _) = transform(bundle, quotients, None)?;
    Ok(t)
}

struct Generator {
    twist: i64,
    inclusion: Vec<Form>,
    /// form of the induced quotient `E' -> E'/pE`, when requested
    residual: Option<Form>,
}

fn transform(
    bundle: &BundleHandle,
    quotients: &[FiberQuotient],
    residual_twist: Option<i64>,
) -> Result<(Transformed, Option<FiberQuotient>)> {
    let mut seen = BTreeSet::new();
    for q in quotients {
        if !seen.insert(q.p.clone()) {
            return Err(Error::DuplicatePrime(q.p.value().clone()));
        }
    }
    let quotients: Vec<FiberQuotient> = quotients
        .iter()
        .map(|q| validate_quotient(bundle, q))
        .collect::<Result<_>>()?;
    let pres = bundle.presentation();
    let gens = pres.generators().clone();
    let phi = pres.map();
    let r = gens.rank();
    let big_n: BigInt = quotients.iter().map(|q| q.p.value().clone()).product();

    let bases: Vec<Vec<(i64, Vec<Form>)>> = quotients
        .iter()
        .map(|q| kernel_basis(&gens, q))
        .collect::<Result<_>>()?;
    // cofactor N/p_i and its inverse modulo p_i
    let cofactors: Vec<(BigInt, BigInt)> = quotients
        .iter()
        .map(|q| {
            let c = &big_n / q.p.value();
            let (_, u, _) = extended_gcd(&c, q.p.value());
            (c, u.mod_floor(q.p.value()))
        })
        .collect();

    let mut twists: Vec<i64> = gens.twists().to_vec();
    let mut slots: Vec<Vec<usize>> = Vec::new();
    for basis in &bases {
        let mut s = Vec::new();
        for (deg, _) in basis {
            s.push(twists.len());
            twists.push(-deg);
        }
        slots.push(s);
    }

    // sigma_il = (N/p_i) s_il as elements of G
    let sigma: Vec<Vec<Vec<Form>>> = bases
        .iter()
        .zip(&cofactors)
        .map(|(basis, (c, _))| {
            basis
                .iter()
                .map(|(_, s)| s.iter().map(|f| f.scale(c)).collect())
                .collect()
        })
        .collect();

    let mut inclusion_cols: Vec<Vec<Form>> = (0..r)
        .map(|j| {
            (0..r)
                .map(|i| {
                    if i == j {
                        Form::constant(big_n.clone())
                    } else {
                        Form::zero(gens.twists()[i] - gens.twists()[j])
                    }
                })
                .collect()
        })
        .collect();
    inclusion_cols.extend(sigma.iter().flatten().cloned());

    let mut rel_twists: Vec<i64> = Vec::new();
    let mut columns: Vec<Vec<Form>> = Vec::new();
    // p_i sigma_il = N s_il
    for (i, basis) in bases.iter().enumerate() {
        for (l, (deg, s)) in basis.iter().enumerate() {
            let tw = -deg;
            let mut col: Vec<Form> = twists.iter().map(|&a| Form::zero(a - tw)).collect();
            for j in 0..r {
                col[j] = fit(s[j].neg(), gens.twists()[j] - tw);
            }
            col[slots[i][l]] = Form::constant(quotients[i].p.value().clone());
            rel_twists.push(tw);
            columns.push(col);
        }
    }
    // each old relation rewritten in the new generators
    for (k, &b) in phi.source().twists().iter().enumerate() {
        let phi_k = phi.column(k);
        let mut col: Vec<Form> = twists.iter().map(|&a| Form::zero(a - b)).collect();
        let mut rest: Vec<Form> = phi_k.clone();
        for (i, basis) in bases.iter().enumerate() {
            if basis.is_empty() {
                continue;
            }
            let q = &quotients[i];
            let s_module = FreeGraded::new(basis.iter().map(|(deg, _)| -deg).collect());
            let s_map = GradedMap::from_columns(
                s_module.clone(),
                gens.clone(),
                basis.iter().map(|(_, s)| s.clone()).collect(),
            )?;
            let target = to_vector(&gens, -b, &phi_k);
            let c = mod_p_solve(&degree_piece(&s_map, -b), &target, &q.p)
                .ok_or(Error::IncompatibleQuotient(q.p.value().clone()))?;
            let (_, u) = &cofactors[i];
            for (l, cl) in to_forms(&s_module, -b, &c).iter().enumerate() {
                let gamma = cl.scale(u).reduce_mod_symmetric(&q.p);
                for j in 0..r {
                    rest[j] = rest[j].add(&gamma.mul(&sigma[i][l][j]).neg());
                }
                col[slots[i][l]] = fit(gamma, twists[slots[i][l]] - b);
            }
        }
        for j in 0..r {
            let alpha = rest[j].div_exact(&big_n).expect("relation lies in the kernel lattice");
            col[j] = fit(alpha, gens.twists()[j] - b);
        }
        rel_twists.push(b);
        columns.push(col);
    }

    let residual = match residual_twist {
        None => None,
        Some(m_u) => Some(residual_row(&twists, r, &rel_twists, &columns, &quotients[0].p, m_u)?),
    };
    let generators: Vec<Generator> = twists
        .iter()
        .zip(inclusion_cols)
        .enumerate()
        .map(|(i, (&twist, inclusion))| Generator {
            twist,
            inclusion,
            residual: residual.as_ref().map(|u| u[i].clone()),
        })
        .collect();
    let (generators, rel_twists, columns) = prune(generators, rel_twists, columns);
    let new_gens = FreeGraded::new(generators.iter().map(|g| g.twist).collect());
    let map = GradedMap::from_columns(FreeGraded::new(rel_twists), new_gens.clone(), columns)?;
    let inclusion = GradedMap::from_columns(new_gens, gens, generators.iter().map(|g| g.inclusion.clone()).collect())?;
    let out = BundleHandle::new(GradedPresentation::over_integers(map))?;
    let guard = out.guard().max(bundle.guard());
    let out = out.with_guard(guard);
    let residual = match residual_twist {
        None => None,
        Some(m_u) => {
            let forms = generators.into_iter().map(|g| g.residual.unwrap()).collect();
            Some(validate_quotient(
                &out,
                &FiberQuotient::new(quotients[0].p.clone(), m_u, forms),
            )?)
        }
    };
    Ok((Transformed { bundle: out, inclusion }, residual))
}

/// Row `u` on the unpruned generators, zero on the `r` scaled generators
/// `p e_j`, with `u * relations = 0` mod `p` and target twist `m_u`. The
/// solution space is a line; it is the quotient `E' -> E'/pE`.
fn residual_row(
    twists: &[i64],
    r: usize,
    rel_twists: &[i64],
    columns: &[Vec<Form>],
    p: &Prime,
    m_u: i64,
) -> Result<Vec<Form>> {
    let syz: Vec<usize> = (r..twists.len()).collect();
    let source = FreeGraded::new(syz.iter().map(|&l| -twists[l]).collect());
    let target = FreeGraded::new(rel_twists.iter().map(|b| -b).collect());
    let entries = columns
        .iter()
        .map(|col| syz.iter().map(|&l| col[l].clone()).collect())
        .collect();
    let transpose = GradedMap::new(source.clone(), target, entries)?;
    let kernel = mod_p_kernel(&degree_piece(&transpose, m_u), p);
    if kernel.len() != 1 {
        return Err(Error::NotLocallyFree(format!(
            "E'/pE has {} independent maps to O({m_u})",
            kernel.len()
        )));
    }
    let w = to_forms(&source, m_u, &kernel[0]);
    let mut u: Vec<Form> = (0..r).map(|j| Form::zero(m_u - twists[j])).collect();
    u.extend(w);
    Ok(u)
}

/// Cancels generator/relation pairs joined by a unit entry and drops zero
/// relations.
fn prune(
    mut generators: Vec<Generator>,
    mut rel_twists: Vec<i64>,
    mut columns: Vec<Vec<Form>>,
) -> (Vec<Generator>, Vec<i64>, Vec<Vec<Form>>) {
    loop {
        let pivot = columns.iter().enumerate().find_map(|(k, col)| {
            col.iter()
                .enumerate()
                .find_map(|(j, f)| (f.degree() == 0 && f.coeff(0).abs().is_one()).then(|| (k, j, f.coeff(0).clone())))
        });
        let Some((k, j, unit)) = pivot else { break };
        let pivot_col = columns[k].clone();
        for (l, col) in columns.iter_mut().enumerate() {
            if l == k || col[j].is_zero() {
                continue;
            }
            let factor = col[j].scale(&unit);
            for (i, entry) in col.iter_mut().enumerate() {
                let delta = factor.mul(&pivot_col[i]).neg();
                *entry = fit(entry.add(&delta), generators[i].twist - rel_twists[l]);
            }
        }
        columns.remove(k);
        rel_twists.remove(k);
        for col in columns.iter_mut() {
            col.remove(j);
        }
        generators.remove(j);
    }
    let keep: Vec<usize> = (0..columns.len())
        .filter(|&k| columns[k].iter().any(|f| !f.is_zero()))
        .collect();
    let columns = keep.iter().map(|&k| columns[k].clone()).collect();
    let rel_twists = keep.iter().map(|&k| rel_twists[k]).collect();
    (generators, rel_twists, columns)
}

/// A requested jump: prime, `n_i >= 1`, and optionally the surjection `(g, h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpSpec {
    pub p: Prime,
    pub n: i64,
    #[serde(default)]
    pub surjection: Option<(Form, Form)>,
}

impl JumpSpec {
    pub fn new(p: Prime, n: i64) -> JumpSpec {
        JumpSpec { p, n, surjection: None }
    }
}

/// Rank-2 bundle of generic type `n` with type `n + 2 n_i` exactly at each
/// listed prime, built as the kernel of `O(-1) + O(-n-1) -> sum_i i_* O(n_i - 1)`.
pub fn prescribed_types(n: i64, jumps: &[JumpSpec]) -> Result<BundleHandle> {
    if n < 0 {
        return Err(Error::Malformed(format!("type {n} must be nonnegative")));
    }
    let mut seen = BTreeSet::new();
    let mut quotients = Vec::new();
    for j in jumps {
        if !seen.insert(j.p.clone()) {
            return Err(Error::DuplicatePrime(j.p.value().clone()));
        }
        if j.n < 1 {
            return Err(Error::Malformed(format!(
                "jump size {} at {} must be at least 1",
                j.n, j.p
            )));
        }
        let (g, h) = j
            .surjection
            .clone()
            .unwrap_or_else(|| (Form::x0_pow(j.n as u32), Form::x1_pow((j.n + n) as u32)));
        quotients.push(FiberQuotient::pair(j.p.clone(), j.n - 1, g, h));
    }
    let source = BundleHandle::new(GradedPresentation::split(&[-1, -n - 1]))?;
    Ok(apply_many(&source, &quotients)?.bundle)
}

/// Applies a center; horizontal centers are not supported.
pub fn apply_center(bundle: &BundleHandle, center: &TransformCenter) -> Result<BundleHandle> {
    match center {
        TransformCenter::Fiber(q) => apply(bundle, q),
        TransformCenter::Horizontal { equation } => Err(Error::UnsupportedCenter(format!(
            "horizontal curve {equation} (only fiber centers are implemented)"
        ))),
    }
}

/// A bundle together with its splitting profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleRecord {
    pub presentation: GradedPresentation,
    pub profile: SplittingProfile,
}

impl BundleRecord {
    fn of(b: &BundleHandle) -> Result<BundleRecord> {
        Ok(BundleRecord {
            presentation: b.presentation().clone(),
            profile: type_profile(b)?,
        })
    }
}

/// Section of a projectivized bundle over the fiber at `p`, given by a
/// quotient onto `O(m)`. `degree` is `m` minus the larger summand of the
/// fiber's splitting type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCenter {
    pub quotient: FiberQuotient,
    pub fiber_type: SplittingType,
    pub degree: i64,
}

/// Symbolic record of `Bl_V P(E) = Bl_U P(E')` for `E' = ker(E -> i_* O(m))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupFactorization {
    pub p: Prime,
    pub m: i64,
    pub source: BundleRecord,
    pub target: BundleRecord,
    #[serde(rename = "center_V")]
    pub center_v: SectionCenter,
    #[serde(rename = "center_U")]
    pub center_u: SectionCenter,
}

/// Builds the record; `center_U` is the quotient `E'|_p -> E'/pE` onto
/// `O(e - m)`, computed degreewise and checked surjective.
pub fn blowup_factorization(bundle: &BundleHandle, q: &FiberQuotient) -> Result<BlowupFactorization> {
    if bundle.rank() != 2 {
        return Err(Error::RankMismatch(bundle.rank() as i64));
    }
    let q = validate_quotient(bundle, q)?;
    let m_u = bundle.degree() - q.m;
    let (t, residual) = transform(bundle, std::slice::from_ref(&q), Some(m_u))?;
    let qu = residual.expect("residual quotient requested");
    let at = Point::Prime(q.p.clone());
    let fv = splitting_type(bundle, &at)?;
    let fu = splitting_type(&t.bundle, &at)?;
    Ok(BlowupFactorization {
        p: q.p.clone(),
        m: q.m,
        source: BundleRecord::of(bundle)?,
        target: BundleRecord::of(&t.bundle)?,
        center_v: SectionCenter {
            degree: q.m - fv.b(),
            quotient: q,
            fiber_type: fv,
        },
        center_u: SectionCenter {
            degree: m_u - fu.b(),
            quotient: qu,
            fiber_type: fu,
        },
    })
}
