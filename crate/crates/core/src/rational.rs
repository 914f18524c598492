//! Helpers around `BigRational`: parsing, printing and a few integer
//! utilities shared by the bound computations.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"7"`, `"-3"` or `"p/q"`. Returns `None` on anything else,
/// including a zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = parse_int(p)?;
            let q: BigInt = parse_int(q)?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(parse_int(s)?)),
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical `p/q` text (or just `p` for integers); `BigRational`'s
/// `Display` already reduces and omits a unit denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn from_biguint(v: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Lowest common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn pow(base: &Rational, exp: u64) -> Rational {
    num_traits::pow::pow(base.clone(), exp as usize)
}

/// Decimal rendering truncated toward negative infinity, with exactly
/// `places` digits after the point.
pub fn format_decimal_floor(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow::pow(BigInt::from(10), places);
    let scaled = (r * Rational::from_integer(scale.clone())).floor().to_integer();
    let negative = scaled.is_negative();
    let (whole, frac) = scaled.abs().div_rem(&scale);
    // floor of a negative value rounds the magnitude up, so the sign goes
    // on the rounded magnitude as-is.
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac:0>places$}")
    }
}
