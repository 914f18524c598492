//! Explicit bounds: coefficient heights, the diameter threshold under which
//! an expansion inherits the sign of `f(P)`, the subdivision depth that
//! reaches a threshold, and the minimum-value lower bound for integer
//! systems.
//!
//! Two height conventions coexist. [`normalized_height`] is
//! `L_f = max |C_β|` where `a_β = (d!/β!) C_β`; [`raw_height`] is the plain
//! `H = max |a_β|` used for integer systems. They are never mixed.

mod log2;

pub use log2::{log2_integer, log2_rational, Log2Interval};

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::expansion::monomial_slots;
use crate::polyring::{Form, RationalPoint};
use crate::rational::{factorial, from_biguint, Rational};

/// Precision of every `log2` enclosure reported in a [`BoundReport`].
pub const LOG2_BITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `|f(P)| / (d·d!·C(n+d-1,d)·L_f)`.
    SignPreservingDiameter,
    /// Same prefix, divided into a supplied lower bound on `|λ_f|`.
    DepthThreshold,
    /// Lower bound on the nonzero minimum of an integer form of degree `2d`.
    MinValueLowerBound,
    /// Combined diameter threshold for an integer system.
    ZeroDetectionDiameter,
}

impl BoundKind {
    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::SignPreservingDiameter => "sign_preserving_diameter",
            BoundKind::DepthThreshold => "depth_threshold",
            BoundKind::MinValueLowerBound => "min_value_lower_bound",
            BoundKind::ZeroDetectionDiameter => "zero_detection_diameter",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Authority {
    Exact,
    Log2,
}

/// A bound value carried exactly, in the log2 domain, or both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value_exact: Option<Rational>,
    pub value_log2: Option<Log2Interval>,
    pub authority: Authority,
    /// Echo of the inputs, in a fixed order.
    pub inputs: Vec<(String, String)>,
}

impl BoundReport {
    fn exact(kind: BoundKind, value: Rational, inputs: Vec<(String, String)>) -> Self {
        let value_log2 = value
            .is_positive()
            .then(|| log2_rational(&value, LOG2_BITS + 4));
        BoundReport {
            kind,
            value_exact: Some(value),
            value_log2,
            authority: Authority::Exact,
            inputs,
        }
    }

    fn log2(kind: BoundKind, value: Log2Interval, inputs: Vec<(String, String)>) -> Self {
        BoundReport {
            kind,
            value_exact: None,
            value_log2: Some(value),
            authority: Authority::Log2,
            inputs,
        }
    }

    pub fn threshold(&self) -> Threshold {
        match (self.authority, &self.value_exact, &self.value_log2) {
            (Authority::Exact, Some(v), _) => Threshold::Exact(v.clone()),
            (_, _, Some(l)) => Threshold::Log2(l.clone()),
            _ => unreachable!("a report always carries its authoritative value"),
        }
    }

    /// When both representations are present, the log2 enclosure must lie
    /// within `2^-20` of an independently computed `log2(value_exact)`.
    pub fn is_consistent(&self) -> bool {
        match (&self.value_exact, &self.value_log2) {
            (Some(v), Some(l)) if v.is_positive() => {
                let fresh = log2_rational(v, LOG2_BITS + 8);
                let tol = Rational::new(BigInt::one(), BigInt::from(1u64 << LOG2_BITS));
                (&fresh.lo - &l.lo).abs() <= tol && (&fresh.hi - &l.hi).abs() <= tol
            }
            (Some(v), None) => !v.is_positive(),
            (None, Some(_)) => self.authority == Authority::Log2,
            (Some(_), Some(_)) => false,
            (None, None) => false,
        }
    }

    pub fn input(&self, key: &str) -> Option<&str> {
        self.inputs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Labeled `key=value` lines, `value_log2` floored to 6 decimals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "bound={}", self.kind);
        let auth = match self.authority {
            Authority::Exact => "exact",
            Authority::Log2 => "log2",
        };
        let _ = writeln!(out, "authority={auth}");
        if let Some(v) = &self.value_exact {
            let _ = writeln!(out, "value={v}");
        }
        if let Some(l) = &self.value_log2 {
            let _ = writeln!(out, "value_log2={}", l.display_lo(6));
        }
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "input.{k}={v}");
        }
        out
    }
}

/// A positive threshold given exactly or as a log2 enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    Exact(Rational),
    Log2(Log2Interval),
}

/// `L_f = max_β |a_β · β! / d!|`.
pub fn normalized_height(f: &Form) -> Result<Rational> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let dfact = from_biguint(factorial(f.degree() as u64));
    Ok(f
        .terms()
        .map(|(m, c)| (c * Rational::from_integer(m.factorial()) / &dfact).abs())
        .max()
        .expect("nonzero form"))
}

/// `H = max_β |a_β|` over raw coefficients.
pub fn raw_height(f: &Form) -> Result<Rational> {
    f.terms()
        .map(|(_, c)| c.abs())
        .max()
        .ok_or(Error::ZeroForm)
}

/// `d!·L_f`, a uniform bound on `|D^α f|` over `Δ_n` for `|α| <= d`.
pub fn derivative_bound(f: &Form) -> Result<Rational> {
    Ok(normalized_height(f)? * from_biguint(factorial(f.degree() as u64)))
}

/// `d·d!·C(n+d-1, d)·L_f`.
fn sign_threshold_divisor(f: &Form) -> Result<Rational> {
    let lf = normalized_height(f)?;
    let d = f.degree();
    if d == 0 {
        return Err(Error::InvalidParameter(
            "degree 0 forms have no diameter threshold".into(),
        ));
    }
    Ok(Rational::from_integer(BigInt::from(d))
        * from_biguint(factorial(d as u64))
        * from_biguint(monomial_slots(f.n(), d))
        * lf)
}

fn echo(f: &Form) -> Result<Vec<(String, String)>> {
    Ok(vec![
        ("n".into(), f.n().to_string()),
        ("d".into(), f.degree().to_string()),
        ("L_f".into(), normalized_height(f)?.to_string()),
    ])
}

/// Diameter below which any sub-simplex containing `P` expands `f` to
/// coefficients that all carry the sign of `f(P)`. Zero when `f(P) = 0`.
pub fn theorem1_bound(f: &Form, p: &RationalPoint) -> Result<BoundReport> {
    if p.dim() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: p.dim(),
        });
    }
    if !p.on_simplex() {
        return Err(Error::InvalidParameter(format!("{p} is not on the simplex")));
    }
    let divisor = sign_threshold_divisor(f)?;
    let fp = f.evaluate(p)?.abs();
    let mut inputs = echo(f)?;
    inputs.push(("abs_f_at_point".into(), fp.to_string()));
    Ok(BoundReport::exact(
        BoundKind::SignPreservingDiameter,
        fp / divisor,
        inputs,
    ))
}

/// The same threshold driven by a supplied lower bound `b` on `|λ_f|`; the
/// minimum itself is never computed here.
pub fn depth_threshold(f: &Form, lambda_lower: &Rational) -> Result<BoundReport> {
    if !lambda_lower.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "lower bound on |λ_f| must be positive, got {lambda_lower}"
        )));
    }
    let divisor = sign_threshold_divisor(f)?;
    let mut inputs = echo(f)?;
    inputs.push(("lambda_lower".into(), lambda_lower.to_string()));
    Ok(BoundReport::exact(
        BoundKind::DepthThreshold,
        lambda_lower / divisor,
        inputs,
    ))
}

/// Smallest `N >= 1` with `((n-1)/n)^N < threshold`.
///
/// Exact thresholds are verified exactly at `N` and `N-1`. Log2
/// thresholds use the enclosure endpoints that can only raise `N`.
pub fn required_depth(n: usize, threshold: &Threshold) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if let Threshold::Exact(t) = threshold {
        if !t.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "threshold must be positive, got {t}"
            )));
        }
    }
    if n == 1 {
        // the ratio is 0
        return Ok(1);
    }
    let ratio = Rational::new(BigInt::from(n - 1), BigInt::from(n));
    let bits = 40 + 2 * (usize::BITS - n.leading_zeros());
    let log_ratio_hi = log2_rational(&ratio, bits).hi;
    debug_assert!(log_ratio_hi.is_negative());

    let log_t_lo = match threshold {
        Threshold::Exact(t) => log2_rational(t, bits).lo,
        Threshold::Log2(l) => l.lo.clone(),
    };
    let estimate = (&log_t_lo / &log_ratio_hi).floor().to_integer() + BigInt::one();
    let mut depth: u64 = if estimate < BigInt::one() {
        1
    } else {
        u64::try_from(estimate).map_err(|_| {
            Error::InvalidParameter("required depth does not fit in 64 bits".into())
        })?
    };

    if let Threshold::Exact(t) = threshold {
        let below = |k: u64| crate::rational::pow(&ratio, k) < *t;
        while !below(depth) {
            depth += 1;
        }
        while depth > 1 && below(depth - 1) {
            depth -= 1;
        }
    }
    Ok(depth)
}

/// `max(H, 4n + 2)`.
pub fn htilde(h: &Rational, n: usize) -> Rational {
    let floor = Rational::from_integer(BigInt::from(4 * n + 2));
    if h > &floor {
        h.clone()
    } else {
        floor
    }
}

/// `log2` of `(2^{4 - n/2} · H̃ · (2d)^n)^{-n·2^n·(2d)^n}`.
///
/// `two_d` is the (even) degree of the integer form. The exponent is
/// carried as an exact integer; `log2(H̃)` and `log2(2d)` are enclosed
/// tightly enough that the final interval is narrower than `2^-20`.
pub fn min_value_lower_bound(n: usize, two_d: u32, htilde: &Rational) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if two_d < 2 || !two_d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "degree must be even and at least 2, got {two_d}"
        )));
    }
    if htilde < &Rational::one() {
        return Err(Error::InvalidParameter(format!("H̃ must be >= 1, got {htilde}")));
    }
    let exponent: BigInt =
        BigInt::from(n) * (BigInt::one() << n) * num_traits::pow::pow(BigInt::from(two_d), n);
    let bits = LOG2_BITS + 8 + exponent.bits() as u32 + (usize::BITS - n.leading_zeros());

    let constant = Rational::from_integer(BigInt::from(4)) - Rational::new(BigInt::from(n), BigInt::from(2));
    let log_h = log2_rational(htilde, bits);
    let log_2d = log2_rational(&Rational::from_integer(BigInt::from(two_d)), bits);
    let inner = &(&Log2Interval::exact(constant) + &log_h)
        + &log_2d.scale(&Rational::from_integer(BigInt::from(n)));
    let value = inner.scale(&-Rational::from_integer(exponent.clone()));

    Ok(BoundReport::log2(
        BoundKind::MinValueLowerBound,
        value,
        vec![
            ("n".into(), n.to_string()),
            ("degree".into(), two_d.to_string()),
            ("H_tilde".into(), htilde.to_string()),
            ("exponent".into(), (-exponent).to_string()),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_form;
    use crate::rational::{int, ratio};

    fn approx(r: &Rational) -> f64 {
        let n: f64 = r.numer().to_string().parse().unwrap();
        let d: f64 = r.denom().to_string().parse().unwrap();
        n / d
    }

    #[test]
    fn heights() {
        let f = parse_form("2 1\n2 1 0\n1 0 1\n").unwrap();
        assert_eq!(normalized_height(&f).unwrap(), int(2));
        assert_eq!(derivative_bound(&f).unwrap(), int(2));
        for d in 1..6 {
            assert_eq!(normalized_height(&Form::coordinate_sum(3).power(d)).unwrap(), int(1));
        }
        let g = parse_form("2 2\n1 2 0\n1 0 2\n").unwrap();
        assert_eq!(normalized_height(&g).unwrap(), int(1));
        assert_eq!(derivative_bound(&g).unwrap(), int(2));
        assert_eq!(
            g.partial_derivative(&[2, 0]).unwrap().coefficient(&[0, 0]),
            int(2)
        );

        let sq = parse_form("2 2\n1 2 0\n-2 1 1\n1 0 2\n").unwrap();
        assert_eq!(raw_height(&sq).unwrap(), int(2));
        assert_eq!(raw_height(&Form::coordinate_sum(2).power(2)).unwrap(), int(2));
        assert_eq!(raw_height(&parse_form("1 3\n7 3\n").unwrap()).unwrap(), int(7));
        assert_eq!(raw_height(&Form::zero(2, 2)), Err(Error::ZeroForm));
        assert_eq!(normalized_height(&Form::zero(2, 2)), Err(Error::ZeroForm));
        assert_eq!(derivative_bound(&Form::zero(2, 2)), Err(Error::ZeroForm));
    }

    #[test]
    fn sign_preserving_diameter() {
        let half = RationalPoint::simplex_center(2);
        let f = parse_form("2 1\n2 1 0\n1 0 1\n").unwrap();
        let r = theorem1_bound(&f, &half).unwrap();
        assert_eq!(r.value_exact, Some(ratio(3, 8)));
        assert!(r.is_consistent());

        let g = parse_form("2 2\n1 2 0\n1 0 2\n").unwrap();
        assert_eq!(theorem1_bound(&g, &half).unwrap().value_exact, Some(ratio(1, 24)));

        let h = parse_form("2 1\n1 1 0\n-1 0 1\n").unwrap();
        let z = theorem1_bound(&h, &half).unwrap();
        assert_eq!(z.value_exact, Some(int(0)));
        assert!(z.value_log2.is_none());
        assert!(z.is_consistent());

        assert!(theorem1_bound(&Form::zero(2, 1), &half).is_err());
        assert!(theorem1_bound(&f, &RationalPoint::new(vec![int(1), int(1)])).is_err());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(required_depth(2, &Threshold::Exact(ratio(3, 8))).unwrap(), 2);
        assert_eq!(required_depth(2, &Threshold::Exact(int(1))).unwrap(), 1);
        assert_eq!(required_depth(2, &Threshold::Exact(int(5))).unwrap(), 1);
        assert_eq!(required_depth(1, &Threshold::Exact(ratio(1, 100))).unwrap(), 1);
        assert!(required_depth(2, &Threshold::Exact(int(0))).is_err());
        assert!(required_depth(2, &Threshold::Exact(int(-1))).is_err());

        let t = Log2Interval {
            lo: ratio(-269_886, 1000),
            hi: ratio(-269_885, 1000),
        };
        assert_eq!(required_depth(2, &Threshold::Log2(t)).unwrap(), 270);
    }

    #[test]
    fn depth_is_minimal_for_exact_thresholds() {
        for n in 2..6usize {
            for (p, q) in [(1, 2), (1, 3), (3, 8), (1, 100), (7, 9), (1, 1000)] {
                let t = ratio(p, q);
                let depth = required_depth(n, &Threshold::Exact(t.clone())).unwrap();
                let r = ratio(n as i64 - 1, n as i64);
                assert!(crate::rational::pow(&r, depth) < t);
                if depth > 1 {
                    assert!(crate::rational::pow(&r, depth - 1) >= t);
                }
            }
        }
    }

    #[test]
    fn htilde_examples() {
        assert_eq!(htilde(&int(2), 2), int(10));
        assert_eq!(htilde(&int(100), 2), int(100));
        assert_eq!(htilde(&int(10), 2), int(10));
    }

    #[test]
    fn min_value_bound() {
        let r = min_value_lower_bound(2, 2, &int(10)).unwrap();
        let l = r.value_log2.clone().unwrap();
        assert!(l.width() < ratio(1, 1 << 20));
        // 32 * log2(320) = 266.30169903...
        assert!((approx(&l.midpoint()) + 266.301_699).abs() < 1e-5);
        assert_eq!(r.input("exponent"), Some("-32"));

        let one = min_value_lower_bound(1, 4, &int(6)).unwrap();
        assert_eq!(one.input("exponent"), Some("-8"));

        let lower = min_value_lower_bound(2, 2, &int(11)).unwrap();
        assert!(lower.value_log2.unwrap().hi < l.lo);

        assert!(min_value_lower_bound(2, 3, &int(10)).is_err());
        assert!(min_value_lower_bound(0, 2, &int(10)).is_err());
        assert!(min_value_lower_bound(2, 2, &ratio(1, 2)).is_err());
    }

    #[test]
    fn report_text() {
        let f = parse_form("2 1\n2 1 0\n1 0 1\n").unwrap();
        let r = theorem1_bound(&f, &RationalPoint::simplex_center(2)).unwrap();
        let text = r.to_text();
        assert!(text.starts_with("bound=sign_preserving_diameter\nauthority=exact\nvalue=3/8\n"));
        assert!(text.contains("value_log2=-1.415038\n"), "{text}");
        assert!(text.contains("input.L_f=2\n"));
    }
}
