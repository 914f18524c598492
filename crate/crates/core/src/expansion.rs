//! Expansion of a form on a sub-simplex, `f([Λ]X)`, and classification of
//! the sign pattern of the resulting coefficients.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::{Form, Monomial};
use crate::rational::{binomial, common_denominator, Rational};
use crate::simplexgeo::SimplexMatrix;

/// Sign pattern of a coefficient vector taken over all `C(n+d-1, d)`
/// monomial slots of degree `d`; an absent monomial counts as a zero
/// coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignClass {
    AllPositive,
    AllNonnegative,
    AllNegative,
    AllNonpositive,
    Mixed,
    ZeroForm,
}

impl SignClass {
    pub fn tag(self) -> &'static str {
        match self {
            SignClass::AllPositive => "AllPositive",
            SignClass::AllNonnegative => "AllNonnegative",
            SignClass::AllNegative => "AllNegative",
            SignClass::AllNonpositive => "AllNonpositive",
            SignClass::Mixed => "Mixed",
            SignClass::ZeroForm => "ZeroForm",
        }
    }

    pub const ALL: [SignClass; 6] = [
        SignClass::AllPositive,
        SignClass::AllNonnegative,
        SignClass::AllNegative,
        SignClass::AllNonpositive,
        SignClass::Mixed,
        SignClass::ZeroForm,
    ];
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SignClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SignClass::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::MalformedCertificate(format!("unknown sign class {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(r: &Rational) -> Sign {
        if r.is_negative() {
            Sign::Negative
        } else if r.is_zero() {
            Sign::Zero
        } else {
            Sign::Positive
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Number of degree-`d` monomials in `n` variables.
pub fn monomial_slots(n: usize, d: u32) -> num_bigint::BigUint {
    binomial((n as u64 + d as u64).saturating_sub(1), d as u64)
}

pub fn sign_classify(f: &Form) -> SignClass {
    if f.is_zero() {
        return SignClass::ZeroForm;
    }
    let (mut pos, mut neg) = (false, false);
    for (_, c) in f.terms() {
        if c.is_positive() {
            pos = true;
        } else {
            neg = true;
        }
    }
    let full = num_bigint::BigUint::from(f.num_terms()) == monomial_slots(f.n(), f.degree());
    match (pos, neg, full) {
        (true, false, true) => SignClass::AllPositive,
        (true, false, false) => SignClass::AllNonnegative,
        (false, true, true) => SignClass::AllNegative,
        (false, true, false) => SignClass::AllNonpositive,
        _ => SignClass::Mixed,
    }
}

/// Exact composition `f(M X)`.
///
/// Denominators of `M` and of `f` are cleared first so the whole expansion
/// runs over integers, followed by one rescale of the result.
pub fn expand(f: &Form, m: &SimplexMatrix) -> Result<Form> {
    if f.n() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: m.n(),
        });
    }
    let n = f.n();
    let d = f.degree();
    if f.is_zero() {
        return Ok(Form::zero(n, d));
    }

    let mden = common_denominator(m.rows().flatten());
    let fden = common_denominator(f.terms().map(|(_, c)| c));
    let scaled_row = |i: usize| -> IntPoly {
        let mut p = IntPoly::default();
        for j in 0..n {
            let e = m.get(i, j);
            if !e.is_zero() {
                let v = e.numer() * (&mden / e.denom());
                p.insert(Monomial::var(n, j).exponents().to_vec(), v);
            }
        }
        p
    };
    let rows: Vec<IntPoly> = (0..n).map(scaled_row).collect();
    let mut powers = PowerCache::new(rows, n);

    let terms: Vec<(Vec<u32>, BigInt)> = f
        .terms()
        .map(|(mono, c)| {
            let v = c.numer() * (&fden / c.denom());
            (mono.exponents().to_vec(), v)
        })
        .collect();

    let mut acc = IntPoly::default();
    let prefix = IntPoly::one(n);
    expand_terms(&terms, 0, &prefix, &mut powers, &mut acc);

    let scale = fden * num_traits::pow::pow(mden, d as usize);
    let out = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| {
        (
            Monomial::new(e),
            Rational::new(c, scale.clone()),
        )
    });
    Ok(Form::from_map_unchecked(n, d, out))
}

/// Sign of `f(M (1, ..., 1)^T)`, which by homogeneity is the sign of `f`
/// at the barycenter of `Con(M)`.
pub fn cell_center_sign(f: &Form, m: &SimplexMatrix) -> Result<Sign> {
    if f.n() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: m.n(),
        });
    }
    let ones = vec![Rational::one(); m.n()];
    let x = m.apply(&ones)?;
    Ok(Sign::of(&f.evaluate_slice(&x)?))
}

type IntPoly = HashMap<Vec<u32>, BigInt>;

trait IntPolyExt {
    fn one(n: usize) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl IntPolyExt for IntPoly {
    fn one(n: usize) -> Self {
        let mut p = IntPoly::default();
        p.insert(vec![0; n], BigInt::one());
        p
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = IntPoly::with_capacity(self.len() * 2);
        for (ea, ca) in self {
            for (eb, cb) in other {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out
    }
}

struct PowerCache {
    rows: Vec<IntPoly>,
    cache: Vec<Vec<IntPoly>>,
}

impl PowerCache {
    fn new(rows: Vec<IntPoly>, n: usize) -> Self {
        PowerCache {
            cache: (0..rows.len()).map(|_| vec![IntPoly::one(n)]).collect(),
            rows,
        }
    }

    fn get(&mut self, i: usize, k: u32) -> &IntPoly {
        let k = k as usize;
        while self.cache[i].len() <= k {
            let next = self.cache[i].last().expect("seeded").mul(&self.rows[i]);
            self.cache[i].push(next);
        }
        &self.cache[i][k]
    }
}

/// Walks the terms grouped by leading exponents so shared prefixes
/// `L_1^{b_1} ··· L_k^{b_k}` are multiplied once. `terms` must be sorted
/// by exponent vector in the same order for every variable, which the
/// canonical form order guarantees.
fn expand_terms(
    terms: &[(Vec<u32>, BigInt)],
    var: usize,
    prefix: &IntPoly,
    powers: &mut PowerCache,
    acc: &mut IntPoly,
) {
    let n = powers.rows.len();
    if var + 1 == n {
        for (e, c) in terms {
            let p = prefix.mul(powers.get(var, e[var]));
            for (mono, v) in p {
                *acc.entry(mono).or_insert_with(BigInt::zero) += v * c;
            }
        }
        return;
    }
    let mut start = 0;
    while start < terms.len() {
        let b = terms[start].0[var];
        let end = start + terms[start..].iter().take_while(|t| t.0[var] == b).count();
        let next = if b == 0 {
            prefix.clone()
        } else {
            prefix.mul(powers.get(var, b))
        };
        expand_terms(&terms[start..end], var + 1, &next, powers, acc);
        start = end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_form, RationalPoint};
    use crate::rational::{int, ratio};
    use crate::simplexgeo::Permutation;

    #[test]
    fn coordinate_sum_is_invariant() {
        let s = Form::coordinate_sum(3);
        for p in Permutation::all(3) {
            let g = SimplexMatrix::barycentric(&p);
            assert_eq!(expand(&s, &g).unwrap(), s);
        }
    }

    #[test]
    fn quadratic_on_g2() {
        let f = parse_form("2 2\n1 2 0\n-1 1 1\n1 0 2\n").unwrap();
        let g2 = SimplexMatrix::barycentric_base(2);
        let e = expand(&f, &g2).unwrap();
        let expected = parse_form("2 2\n1 2 0\n1/2 1 1\n1/4 0 2\n").unwrap();
        assert_eq!(e, expected);
        assert_eq!(sign_classify(&e), SignClass::AllPositive);
    }

    #[test]
    fn classification() {
        let cases = [
            ("2 2\n1 2 0\n1 1 1\n", SignClass::AllNonnegative),
            ("2 2\n1 2 0\n-2 1 1\n1 0 2\n", SignClass::Mixed),
            ("2 2\n-1 2 0\n-2 1 1\n-1 0 2\n", SignClass::AllNegative),
            ("2 2\n-1 2 0\n", SignClass::AllNonpositive),
            ("2 2\n", SignClass::ZeroForm),
            ("3 0\n5 0 0 0\n", SignClass::AllPositive),
        ];
        for (text, class) in cases {
            assert_eq!(sign_classify(&parse_form(text).unwrap()), class, "{text}");
        }
    }

    #[test]
    fn tags_round_trip() {
        for c in SignClass::ALL {
            assert_eq!(c.tag().parse::<SignClass>().unwrap(), c);
        }
        assert!("Positive".parse::<SignClass>().is_err());
    }

    #[test]
    fn center_signs() {
        let g2 = SimplexMatrix::barycentric_base(2);
        let sum = Form::coordinate_sum(2);
        assert_eq!(cell_center_sign(&sum, &g2).unwrap(), Sign::Positive);
        let diff = parse_form("2 1\n1 1 0\n-1 0 1\n").unwrap();
        assert_eq!(cell_center_sign(&diff, &g2).unwrap(), Sign::Positive);
        let neg = sum.power(2).neg();
        assert_eq!(cell_center_sign(&neg, &g2).unwrap(), Sign::Negative);
        assert!(cell_center_sign(&sum, &SimplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn rational_coefficients_and_matrices() {
        let f = parse_form("3 3\n1/3 3 0 0\n-7/2 1 1 1\n2 0 1 2\n").unwrap();
        let p = RationalPoint::new(vec![ratio(1, 5), ratio(2, 5), ratio(2, 5)]);
        let m = SimplexMatrix::shrink_around(&p, &ratio(3, 7)).unwrap();
        let e = expand(&f, &m).unwrap();
        let x = [ratio(2, 3), int(-1), ratio(5, 11)];
        let mx = m.apply(&x).unwrap();
        assert_eq!(e.evaluate_slice(&x).unwrap(), f.evaluate_slice(&mx).unwrap());
        assert_eq!(e.degree(), 3);
    }

    #[test]
    fn dimension_mismatch() {
        let f = Form::coordinate_sum(2);
        assert!(expand(&f, &SimplexMatrix::identity(3)).is_err());
    }
}
