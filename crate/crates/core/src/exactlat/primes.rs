//! Primality and factorization for the moduli that show up as invariant
//! factors. Deterministic Miller-Rabin below 2^64, fixed-witness
//! Miller-Rabin above; Pollard-Brent for splitting.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const EXTRA_WITNESSES: [u64; 8] = [41, 43, 47, 53, 59, 61, 67, 71];

/// A validated rational prime.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(BigInt);

impl Prime {
    pub fn new(p: impl Into<BigInt>) -> Result<Prime> {
        let p = p.into();
        if is_prime(&p) {
            Ok(Prime(p))
        } else {
            Err(Error::CompositeModulus(p))
        }
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    /// The prime as a machine word, when it fits.
    pub fn as_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Prime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Prime> {
        let v: BigInt = s
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("not an integer: {s:?}")))?;
        Prime::new(v)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Prime, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn mr_round_u64(n: u64, d: u64, s: u32, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    SMALL_PRIMES.iter().all(|&a| mr_round_u64(n, d, s, a))
}

fn is_prime_big(n: &BigInt) -> bool {
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    SMALL_PRIMES.iter().chain(EXTRA_WITNESSES.iter()).all(|&a| {
        let a = BigInt::from(a);
        if (&a % n).is_zero() {
            return true;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    })
}

/// Primality of a (nonnegative) integer.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => {
            for &p in SMALL_PRIMES.iter().chain(EXTRA_WITNESSES.iter()) {
                if (n % p).is_zero() {
                    return false;
                }
            }
            is_prime_big(n)
        }
    }
}

fn pollard_brent(n: &BigInt, seed: u64) -> Option<BigInt> {
    let one = BigInt::one();
    let c = BigInt::from(seed);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut y = BigInt::from(seed + 1);
    let m = 64usize;
    let mut g = one.clone();
    let mut r = 1usize;
    let mut q = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > 1 << 22 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if g > one {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split_into(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    for seed in 1u64.. {
        if let Some(d) = pollard_brent(&n, seed) {
            let other = &n / &d;
            split_into(d, out);
            split_into(other, out);
            return;
        }
    }
}

/// Distinct prime divisors of `|n|`, ascending. Zero and units have none.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        if (&n % p).is_zero() {
            out.push(bp.clone());
            while (&n % p).is_zero() {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut rest = Vec::new();
    split_into(n, &mut rest);
    out.extend(rest);
    out.sort();
    out.dedup();
    out
}

/// Primes in `[2, bound]` by a plain sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u64)
        .collect()
}

/// `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primality_matches_sieve() {
        let sieve = primes_up_to(2000);
        for n in 0..2000u64 {
            assert_eq!(is_prime(&BigInt::from(n)), sieve.contains(&n), "n={n}");
        }
    }

    #[test]
    fn large_primes_and_composites() {
        // 2^61 - 1 and 2^89 - 1 are Mersenne primes.
        let m61 = (BigInt::one() << 61) - 1;
        let m89 = (BigInt::one() << 89) - 1;
        assert!(is_prime(&m61));
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m61 * &m89)));
        // strong pseudoprime to bases 2..37 would need more than 64 bits; a Carmichael check:
        assert!(!is_prime(&BigInt::from(561u32)));
    }

    #[test]
    fn composite_modulus_error() {
        assert_eq!(Prime::new(15), Err(Error::CompositeModulus(BigInt::from(15))));
        assert!(Prime::new(13).is_ok());
        assert!("x".parse::<Prime>().is_err());
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_divisors(&BigInt::from(360)), vec![2.into(), 3.into(), 5.into()]);
        let p: BigInt = BigInt::from(1_000_003u64);
        let q: BigInt = BigInt::from(998_244_353u64);
        assert_eq!(prime_divisors(&(&p * &q * 4)), vec![2.into(), p, q]);
        assert!(prime_divisors(&BigInt::from(-1)).is_empty());
        assert!(prime_divisors(&BigInt::zero()).is_empty());
    }
}
