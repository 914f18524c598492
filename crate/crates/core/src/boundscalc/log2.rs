//! Rigorous enclosures of `log2` for positive rationals.
//!
//! The binary digits of `log2(m)` for `m ∈ [1, 2)` come from repeated
//! squaring: square, and if the result is `>= 2` emit a 1 and halve. Running
//! the recurrence once on a fixed-point value rounded down at every step and
//! once rounded up yields a lower and an upper bound.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::rational::{format_decimal_floor, Rational};

/// Closed interval `[lo, hi]` with rational endpoints enclosing a real
/// logarithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Log2Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Log2Interval {
    pub fn exact(v: Rational) -> Self {
        Log2Interval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// Lower endpoint, floored to `places` decimals.
    pub fn display_lo(&self, places: usize) -> String {
        format_decimal_floor(&self.lo, places)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            Log2Interval { lo: b, hi: a }
        } else {
            Log2Interval { lo: a, hi: b }
        }
    }
}

impl Add for &Log2Interval {
    type Output = Log2Interval;
    fn add(self, o: &Log2Interval) -> Log2Interval {
        Log2Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &Log2Interval {
    type Output = Log2Interval;
    fn sub(self, o: &Log2Interval) -> Log2Interval {
        Log2Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Neg for &Log2Interval {
    type Output = Log2Interval;
    fn neg(self) -> Log2Interval {
        Log2Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul<&Rational> for &Log2Interval {
    type Output = Log2Interval;
    fn mul(self, k: &Rational) -> Log2Interval {
        self.scale(k)
    }
}

/// Encloses `log2(x)` for `x > 0` in an interval of width at most
/// `2^-bits`. Exact powers of two give a degenerate interval.
pub fn log2_rational(x: &Rational, bits: u32) -> Log2Interval {
    assert!(x.is_positive(), "log2 of a nonpositive value");
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    let a = log2_integer(p, bits + 1);
    let b = log2_integer(q, bits + 1);
    &a - &b
}

/// Encloses `log2(v)` for a positive integer, width at most `2^-bits`.
pub fn log2_integer(v: &BigUint, bits: u32) -> Log2Interval {
    assert!(!v.is_zero(), "log2 of zero");
    let k = v.bits() - 1; // 2^k <= v < 2^{k+1}
    let whole = Rational::from_integer(BigInt::from(k));
    if v.count_ones() == 1 {
        return Log2Interval::exact(whole);
    }
    // mantissa m = v / 2^k in [1, 2), held as fixed point with `prec` bits
    let guard = 32;
    let prec = (bits + guard) as u64;
    let m_lo = fixed_floor(v, k, prec);
    let m_hi = &m_lo + 1u32;
    let frac_lo = frac_bits(m_lo, prec, bits + 1, false);
    let frac_hi = frac_bits(m_hi, prec, bits + 1, true);
    Log2Interval {
        lo: &whole + frac_lo,
        hi: &whole + frac_hi,
    }
}

/// `floor(v * 2^prec / 2^k)`.
fn fixed_floor(v: &BigUint, k: u64, prec: u64) -> BigUint {
    if prec >= k {
        v << (prec - k)
    } else {
        v >> (k - prec)
    }
}

/// First `digits` binary digits of `log2(m / 2^prec)`. Rounding down at each
/// squaring keeps the result a lower bound; rounding up and adding the tail
/// `2^-digits` gives an upper bound.
fn frac_bits(mut m: BigUint, prec: u64, digits: u32, upper: bool) -> Rational {
    let two = BigUint::one() << (prec + 1);
    let mut acc = BigUint::zero();
    for _ in 0..digits {
        let sq = &m * &m;
        let mut next = &sq >> prec;
        if upper && (&next << prec) != sq {
            next += 1u32;
        }
        acc <<= 1;
        if next >= two {
            acc += 1u32;
            // halve, keeping the rounding direction
            let odd = (&next & BigUint::one()) == BigUint::one();
            next >>= 1;
            if upper && odd {
                next += 1u32;
            }
        }
        m = next;
    }
    if upper {
        acc += 1u32;
    }
    Rational::new(BigInt::from(acc), BigInt::from(BigUint::one() << digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn approx(i: &Log2Interval) -> f64 {
        let m = i.midpoint();
        let n: f64 = m.numer().to_string().parse().unwrap();
        let d: f64 = m.denom().to_string().parse().unwrap();
        n / d
    }

    #[test]
    fn powers_of_two_are_exact() {
        assert_eq!(log2_rational(&int(8), 20), Log2Interval::exact(int(3)));
        assert_eq!(log2_rational(&ratio(1, 2), 20), Log2Interval::exact(int(-1)));
        assert_eq!(log2_rational(&int(1), 20), Log2Interval::exact(int(0)));
    }

    #[test]
    fn enclosures_are_tight_and_correct() {
        let bound = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
        for (p, q) in [(3, 1), (10, 1), (320, 1), (12, 1), (1, 3), (2, 3), (7, 5), (1_000_003, 999)] {
            let x = ratio(p, q);
            let iv = log2_rational(&x, 20);
            assert!(iv.width() <= bound, "{p}/{q}: width {}", iv.width());
            let reference = (p as f64 / q as f64).log2();
            assert!((approx(&iv) - reference).abs() < 1e-6, "{p}/{q}");
            // 2^lo <= x <= 2^hi checked through 2^(lo*2^k) style bounds is
            // expensive; f64 agreement plus ordering is enough here.
            assert!(iv.lo <= iv.hi);
        }
    }

    #[test]
    fn interval_contains_true_value_for_known_cases() {
        // log2(3) = 1.584962500721156...
        let iv = log2_integer(&BigUint::from(3u32), 40);
        let lo_ok = ratio(1_584_962_500, 1_000_000_000);
        let hi_ok = ratio(1_584_962_501, 1_000_000_000);
        assert!(iv.lo <= hi_ok && iv.hi >= lo_ok);
        assert!(iv.lo < ratio(15_849_625_008, 10_000_000_000));
        assert!(iv.hi > ratio(15_849_625_007, 10_000_000_000));
    }

    #[test]
    fn arithmetic() {
        let a = Log2Interval { lo: int(1), hi: int(2) };
        let b = Log2Interval { lo: int(3), hi: int(5) };
        assert_eq!(&a + &b, Log2Interval { lo: int(4), hi: int(7) });
        assert_eq!(&a - &b, Log2Interval { lo: int(-4), hi: int(-1) });
        assert_eq!(-&a, Log2Interval { lo: int(-2), hi: int(-1) });
        assert_eq!(&a * &int(-2), Log2Interval { lo: int(-4), hi: int(-2) });
    }
}
