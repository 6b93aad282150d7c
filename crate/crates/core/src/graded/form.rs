use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlat::{decimal, Prime};

/// Monomials of degree `d` in decreasing `x0`-power, as `(x0 exponent, x1 exponent)`.
/// Empty for negative `d`.
pub fn monomial_basis(d: i64) -> Vec<(u32, u32)> {
    if d < 0 {
        return Vec::new();
    }
    (0..=d).map(|j| ((d - j) as u32, j as u32)).collect()
}

/// Number of monomials of degree `d`.
pub fn monomial_count(d: i64) -> usize {
    (d + 1).max(0) as usize
}

/// Binary form `sum_j c_j x0^(d-j) x1^j`. A negative degree is allowed only
/// for the zero form (the entry of a map between twists that admit no
/// nonzero morphism).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Form {
    degree: i64,
    #[serde(with = "decimal::vec")]
    coeffs: Vec<BigInt>,
}

impl Form {
    pub fn new(degree: i64, coeffs: Vec<BigInt>) -> Result<Form> {
        if coeffs.len() != monomial_count(degree) {
            return Err(Error::Malformed(format!(
                "form of degree {degree} needs {} coefficients, got {}",
                monomial_count(degree),
                coeffs.len()
            )));
        }
        Ok(Form { degree, coeffs })
    }

    pub fn from_coeffs<T: Into<BigInt>>(degree: i64, coeffs: Vec<T>) -> Form {
        Form::new(degree, coeffs.into_iter().map(Into::into).collect()).expect("coefficient count")
    }

    pub fn zero(degree: i64) -> Form {
        Form {
            degree,
            coeffs: vec![BigInt::zero(); monomial_count(degree)],
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Form {
        Form {
            degree: 0,
            coeffs: vec![c.into()],
        }
    }

    /// `c * x0^a * x1^b`
    pub fn monomial(c: impl Into<BigInt>, a: u32, b: u32) -> Form {
        let degree = (a + b) as i64;
        let mut f = Form::zero(degree);
        f.coeffs[b as usize] = c.into();
        f
    }

    pub fn x0_pow(n: u32) -> Form {
        Form::monomial(1, n, 0)
    }

    pub fn x1_pow(n: u32) -> Form {
        Form::monomial(1, 0, n)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x0^(d-j) x1^j`.
    pub fn coeff(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }

    pub fn set_coeff(&mut self, j: usize, v: BigInt) {
        self.coeffs[j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Form) -> Form {
        if self.is_zero() && self.degree != other.degree {
            return other.clone();
        }
        if other.is_zero() && self.degree != other.degree {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Form {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Form {
        self.scale(&BigInt::from(-1))
    }

    pub fn mul(&self, other: &Form) -> Form {
        let degree = self.degree + other.degree;
        if self.degree < 0 || other.degree < 0 {
            return Form::zero(degree);
        }
        let mut out = Form::zero(degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: &Prime) -> Form {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.mod_floor(p.value())).collect(),
        }
    }

    /// Coefficients reduced into the symmetric range `(-p/2, p/2]`.
    pub fn reduce_mod_symmetric(&self, p: &Prime) -> Form {
        let half = p.value() / 2u32;
        Form {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(p.value());
                    if r > half {
                        r - p.value()
                    } else {
                        r
                    }
                })
                .collect(),
        }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_exact(&self, c: &BigInt) -> Option<Form> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(Form {
            degree: self.degree,
            coeffs,
        })
    }

    /// Parses expressions such as `5*x0*x1`, `x0^2 - 3*x1^2 + x0*x1`, `0`.
    /// `degree` fixes the degree of a zero form and is checked otherwise.
    pub fn parse(src: &str, degree: Option<i64>) -> Result<Form> {
        let bad = |msg: &str| Error::Malformed(format!("cannot parse form {src:?}: {msg}"));
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));
        let mut parsed: Vec<(BigInt, u32, u32)> = Vec::new();
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(bad("dangling sign"));
            }
            let mut c = BigInt::one();
            let (mut a, mut b) = (0u32, 0u32);
            for factor in t.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((base, e)) => (base, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                match base {
                    "x0" => a += exp,
                    "x1" => b += exp,
                    num => {
                        let v: BigInt = num.parse().map_err(|_| bad("unknown factor"))?;
                        c *= num_traits::pow(v, exp as usize);
                    }
                }
            }
            if neg {
                c = -c;
            }
            parsed.push((c, a, b));
        }
        let nonzero: Vec<_> = parsed.iter().filter(|(c, _, _)| !c.is_zero()).collect();
        let deg = match (nonzero.first(), degree) {
            (Some((_, a, b)), _) => (a + b) as i64,
            (None, Some(d)) => d,
            (None, None) => 0,
        };
        if let Some(d) = degree {
            if d != deg {
                return Err(Error::DegreeMismatch(format!(
                    "form {src:?} has degree {deg}, expected {d}"
                )));
            }
        }
        let mut f = Form::zero(deg);
        for (c, a, b) in parsed {
            if c.is_zero() {
                continue;
            }
            if (a + b) as i64 != deg {
                return Err(bad("not homogeneous"));
            }
            f.coeffs[b as usize] += c;
        }
        Ok(f)
    }

    /// Monomial string in the fixed grammar, e.g. `x0^2*x1`; empty for degree 0.
    pub fn monomial_string(a: u32, b: u32) -> String {
        let mut parts = Vec::new();
        for (name, e) in [("x0", a), ("x1", b)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }

    /// Nonzero terms in decreasing x0-power as `(coefficient, x0 exp, x1 exp)`.
    pub fn terms(&self) -> Vec<(BigInt, u32, u32)> {
        if self.degree < 0 {
            return Vec::new();
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (c.clone(), (self.degree - j as i64) as u32, j as u32))
            .collect()
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, a, b)) in terms.iter().enumerate() {
            let mono = Form::monomial_string(*a, *b);
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (mag.is_one(), mono.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_bases() {
        assert_eq!(monomial_basis(2), vec![(2, 0), (1, 1), (0, 2)]);
        assert_eq!(monomial_basis(0), vec![(0, 0)]);
        assert!(monomial_basis(-3).is_empty());
        for d in -4..8 {
            assert_eq!(monomial_basis(d).len() as i64, (d + 1).max(0));
        }
    }

    #[test]
    fn parse_and_print() {
        let f = Form::parse("5*x0*x1", None).unwrap();
        assert_eq!(f, Form::from_coeffs(2, vec![0, 5, 0]));
        assert_eq!(f.to_string(), "5*x0*x1");
        let g = Form::parse("x0^2 - 3*x1^2 + x0*x1", None).unwrap();
        assert_eq!(g.coeffs(), &[1.into(), 1.into(), BigInt::from(-3)]);
        assert_eq!(g.to_string(), "x0^2 + x0*x1 - 3*x1^2");
        assert_eq!(Form::parse("0", Some(3)).unwrap(), Form::zero(3));
        assert!(Form::parse("x0 + x1^2", None).is_err());
        assert!(matches!(Form::parse("x0", Some(2)), Err(Error::DegreeMismatch(_))));
        assert_eq!(Form::parse("-x0", None).unwrap().to_string(), "-x0");
    }

    #[test]
    fn product() {
        let a = Form::parse("x0 + x1", None).unwrap();
        let b = Form::parse("x0 - x1", None).unwrap();
        assert_eq!(a.mul(&b), Form::parse("x0^2 - x1^2", None).unwrap());
    }

    #[test]
    fn json_shape() {
        let f = Form::from_coeffs(1, vec![2, -1]);
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"degree":1,"coeffs":["2","-1"]}"#
        );
    }
}
