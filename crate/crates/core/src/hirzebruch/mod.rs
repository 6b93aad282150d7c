//! Hirzebruch surfaces over `Z` as hypersurfaces
//! `x0^n y0 + x1^n y1 + f(x0, x1) y2 = 0` in `P^1 x P^2`, and the rank-2
//! bundles they are projectivizations of.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bundles::{try_split_certificate, type_profile, BundleHandle, SplitCertificate, SplittingProfile};
use crate::error::{Error, Result};
use crate::graded::{Form, FreeGraded, GradedMap, GradedPresentation};

/// `x0^n y0 + x1^n y1 + f y2` with `deg f = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    n: i64,
    f: Form,
}

impl NormalForm {
    pub fn new(n: i64, f: Form) -> Result<NormalForm> {
        if n < 0 {
            return Err(Error::Malformed(format!("normal form needs n >= 0, got {n}")));
        }
        if !f.is_zero() && f.degree() != n {
            return Err(Error::DegreeMismatch(format!("f = {f} must have degree {n}")));
        }
        let f = if f.is_zero() { Form::zero(n) } else { f };
        Ok(NormalForm { n, f })
    }

    /// `f` given in the form grammar, e.g. `5*x0*x1`.
    pub fn parse(n: i64, f: &str) -> Result<NormalForm> {
        NormalForm::new(n, Form::parse(f, Some(n))?)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn f(&self) -> &Form {
        &self.f
    }

    /// The coefficient forms of `y0, y1, y2`.
    pub fn coefficient_forms(&self) -> [Form; 3] {
        let n = self.n as u32;
        [Form::x0_pow(n), Form::x1_pow(n), self.f.clone()]
    }
}

/// Canonical equation; bidegree is `(n, 1)` in `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationRecord {
    pub equation: String,
    pub bidegree: (i64, i64),
    /// `x0^n`, `x1^n`, `f` never vanish together on a fiber.
    pub smooth: bool,
}

fn term(c: &BigInt, mono: &str, y: &str, first: bool) -> String {
    let sign = match (first, c.is_negative()) {
        (true, true) => "-".to_string(),
        (true, false) => String::new(),
        (false, true) => " - ".to_string(),
        (false, false) => " + ".to_string(),
    };
    let mag = c.abs();
    let mut factors = Vec::new();
    if mag != BigInt::from(1) {
        factors.push(mag.to_string());
    }
    if !mono.is_empty() {
        factors.push(mono.to_string());
    }
    factors.push(y.to_string());
    format!("{sign}{}", factors.join("*"))
}

pub fn equation(nf: &NormalForm) -> EquationRecord {
    let n = nf.n as u32;
    let one = BigInt::from(1);
    let mut s = term(&one, &Form::monomial_string(n, 0), "y0", true);
    s += &term(&one, &Form::monomial_string(0, n), "y1", false);
    let terms = nf.f.terms();
    if terms.len() == 1 {
        let (c, a, b) = &terms[0];
        s += &term(c, &Form::monomial_string(*a, *b), "y2", false);
    } else if terms.len() > 1 {
        s += &format!(" + ({})*y2", nf.f);
    }
    s += " = 0";
    EquationRecord {
        equation: s,
        bidegree: (nf.n, 1),
        smooth: true,
    }
}

/// Clears the `x0^n` and `x1^n` coefficients of `f` by `y0 -> y0 - c y2`,
/// `y1 -> y1 - c' y2`.
pub fn reduce_coefficients(nf: &NormalForm) -> NormalForm {
    let mut f = nf.f.clone();
    if nf.n == 0 {
        return NormalForm { n: 0, f: Form::zero(0) };
    }
    f.set_coeff(0, BigInt::zero());
    f.set_coeff(nf.n as usize, BigInt::zero());
    NormalForm { n: nf.n, f }
}

/// Cokernel of `O(-n) -> O^3` given by `(x0^n, x1^n, f)`; rank 2, degree `n`.
pub fn bundle_from_normal_form(nf: &NormalForm) -> Result<BundleHandle> {
    let phi = GradedMap::from_columns(
        FreeGraded::new(vec![-nf.n]),
        FreeGraded::new(vec![0, 0, 0]),
        vec![nf.coefficient_forms().to_vec()],
    )?;
    BundleHandle::new(GradedPresentation::over_integers(phi))
}

/// Splitting profile of the bundle; the type number at a point is the
/// Hirzebruch index of the fiber surface.
pub fn degree_profile(nf: &NormalForm) -> Result<SplittingProfile> {
    type_profile(&bundle_from_normal_form(nf)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Constancy {
    /// Explicit splitting of the bundle, so the surface is `F_n x Z` globally.
    Certificate { certificate: SplitCertificate },
    /// The profile has jumps; no certificate is attempted.
    NotConstant { profile: SplittingProfile },
    /// Constant profile but no witness section was found.
    Inconclusive { profile: SplittingProfile },
}

pub fn constancy_check(nf: &NormalForm) -> Result<Constancy> {
    let bundle = bundle_from_normal_form(nf)?;
    let profile = type_profile(&bundle)?;
    if !profile.is_constant() {
        return Ok(Constancy::NotConstant { profile });
    }
    Ok(match try_split_certificate(&bundle)? {
        Some(certificate) => Constancy::Certificate { certificate },
        None => Constancy::Inconclusive { profile },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::SplittingType;
    use crate::exactlat::Prime;

    fn nf(n: i64, f: &str) -> NormalForm {
        NormalForm::parse(n, f).unwrap()
    }

    #[test]
    fn equations() {
        assert_eq!(equation(&nf(1, "0")).equation, "x0*y0 + x1*y1 = 0");
        assert_eq!(
            equation(&nf(2, "5*x0*x1")).equation,
            "x0^2*y0 + x1^2*y1 + 5*x0*x1*y2 = 0"
        );
        assert_eq!(equation(&nf(0, "0")).equation, "y0 + y1 = 0");
        assert_eq!(equation(&nf(2, "-x0*x1")).equation, "x0^2*y0 + x1^2*y1 - x0*x1*y2 = 0");
        assert_eq!(equation(&nf(0, "3")).equation, "y0 + y1 + 3*y2 = 0");
        assert_eq!(
            equation(&nf(2, "x0^2 + x0*x1")).equation,
            "x0^2*y0 + x1^2*y1 + (x0^2 + x0*x1)*y2 = 0"
        );
        let rec = equation(&nf(3, "x0*x1^2"));
        assert_eq!(rec.bidegree, (3, 1));
        assert!(rec.smooth);
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce_coefficients(&nf(2, "3*x0^2 + x0*x1")), nf(2, "x0*x1"));
        assert_eq!(reduce_coefficients(&nf(2, "x0*x1")), nf(2, "x0*x1"));
        assert_eq!(reduce_coefficients(&nf(0, "7")), nf(0, "0"));
    }

    #[test]
    fn bundles_and_profiles() {
        let b = bundle_from_normal_form(&nf(1, "0")).unwrap();
        assert_eq!((b.rank(), b.degree()), (2, 1));
        let prof = degree_profile(&nf(1, "0")).unwrap();
        assert!(prof.is_constant());
        assert_eq!(prof.generic, SplittingType::new(0, 1));

        let prof = degree_profile(&nf(2, "5*x0*x1")).unwrap();
        assert_eq!(prof.generic, SplittingType::new(1, 1));
        assert_eq!(prof.jumps.len(), 1);
        assert_eq!(prof.at(&Prime::new(5u32).unwrap()), SplittingType::new(0, 2));

        let prof = degree_profile(&nf(2, "0")).unwrap();
        assert!(prof.is_constant());
        assert_eq!(prof.generic, SplittingType::new(0, 2));

        let (generic, jumps) = degree_profile(&nf(2, "6*x0*x1")).unwrap().type_map();
        assert_eq!(generic, 0);
        let jp: Vec<_> = jumps.into_iter().collect();
        assert_eq!(jp, vec![(Prime::new(2u32).unwrap(), 2), (Prime::new(3u32).unwrap(), 2)]);
    }

    #[test]
    fn constancy() {
        match constancy_check(&nf(1, "0")).unwrap() {
            Constancy::Certificate { certificate } => assert_eq!(certificate.split, SplittingType::new(0, 1)),
            other => panic!("expected a certificate, got {other:?}"),
        }
        assert!(matches!(
            constancy_check(&nf(2, "5*x0*x1")).unwrap(),
            Constancy::NotConstant { .. }
        ));
        for c in ["0", "1", "-4"] {
            assert!(matches!(
                constancy_check(&nf(0, c)).unwrap(),
                Constancy::Certificate { .. }
            ));
        }
    }

    #[test]
    fn rejects_bad_degree() {
        assert!(matches!(NormalForm::parse(2, "x0"), Err(Error::DegreeMismatch(_))));
        assert!(NormalForm::new(-1, Form::zero(-1)).is_err());
    }
}
