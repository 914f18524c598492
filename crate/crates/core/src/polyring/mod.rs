//! Sparse homogeneous polynomials ("forms") with exact rational
//! coefficients.
//!
//! A [`Form`] stores raw coefficients `a_β` of `Σ a_β X^β`, keyed by
//! exponent vector, with zero coefficients never stored. Every monomial
//! has total degree equal to the form's degree, and the zero form keeps its
//! `(n, d)` header so degree bookkeeping survives cancellation.
//!
//! Iteration order is graded lexicographic with `x1` largest, so
//! `x^2, xy, y^2` for two variables. Serialization relies on that order.

mod text;

pub use text::{parse_form, parse_system, serialize_form, serialize_system};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exponent vector `β ∈ ℕ^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `β!` as a big integer.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .map(|&e| BigInt::from(crate::rational::factorial(e as u64)))
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // Graded, then larger leading exponents first.
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Barycenter `(1/n, ..., 1/n)` of `Δ_n`.
    pub fn simplex_center(n: usize) -> Self {
        let c = Rational::new(BigInt::one(), BigInt::from(n));
        RationalPoint(vec![c; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        RationalPoint(v)
    }

    /// True iff all coordinates are nonnegative and they sum to exactly 1.
    pub fn on_simplex(&self) -> bool {
        !self.0.is_empty()
            && self.0.iter().all(|c| !c.is_negative())
            && self.0.iter().sum::<Rational>() == Rational::one()
    }

    pub fn scale(&self, t: &Rational) -> RationalPoint {
        RationalPoint(self.0.iter().map(|c| c * t).collect())
    }

    /// Parses comma-separated rationals, e.g. `1/2,1/2`.
    pub fn parse(s: &str) -> Option<RationalPoint> {
        s.split(',')
            .map(crate::rational::parse_rational)
            .collect::<Option<Vec<_>>>()
            .map(RationalPoint)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Homogeneous polynomial of degree `d` in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form {
    n: usize,
    d: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl Form {
    pub fn zero(n: usize, d: u32) -> Self {
        Form {
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    /// The constant form `c` of degree 0.
    pub fn constant(n: usize, c: Rational) -> Self {
        let mut f = Form::zero(n, 0);
        if !c.is_zero() {
            f.terms.insert(Monomial::one(n), c);
        }
        f
    }

    /// `Σ c_i x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut f = Form::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                f.terms.insert(Monomial::var(n, i), c.clone());
            }
        }
        f
    }

    pub fn variable(n: usize, i: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[i] = Rational::one();
        Form::linear(&coeffs)
    }

    /// `x_1 + ... + x_n`.
    pub fn coordinate_sum(n: usize) -> Self {
        Form::linear(&vec![Rational::one(); n])
    }

    /// Builds a form from `(exponents, coefficient)` pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(n: usize, d: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut f = Form::zero(n, d);
        for (exps, c) in terms {
            if exps.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: exps.len(),
                });
            }
            let m = Monomial(exps);
            if m.degree() != d {
                return Err(Error::DegreeMismatch {
                    expected: d,
                    found: m.degree(),
                });
            }
            f.accumulate(m, c);
        }
        Ok(f)
    }

    pub(crate) fn from_map_unchecked(
        n: usize,
        d: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Form { n, d, terms }
    }

    fn accumulate(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// True iff every raw coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn check_dim(&self, other_n: usize) -> Result<()> {
        if self.n != other_n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other_n,
            });
        }
        Ok(())
    }

    pub fn add(&self, g: &Form) -> Result<Form> {
        self.check_dim(g.n)?;
        if self.d != g.d {
            return Err(Error::DegreeMismatch {
                expected: self.d,
                found: g.d,
            });
        }
        let mut out = self.clone();
        for (m, c) in &g.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, g: &Form) -> Result<Form> {
        self.add(&g.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, t: &Rational) -> Form {
        if t.is_zero() {
            return Form::zero(self.n, self.d);
        }
        Form {
            n: self.n,
            d: self.d,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * t)).collect(),
        }
    }

    pub fn multiply(&self, g: &Form) -> Result<Form> {
        self.check_dim(g.n)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &g.terms {
                let c = ca * cb;
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += c;
            }
        }
        Ok(Form::from_map_unchecked(self.n, self.d + g.d, acc))
    }

    /// `f^k`; `f^0` is the constant 1 of degree 0.
    pub fn power(&self, k: u32) -> Form {
        let mut result = Form::constant(self.n, Rational::one());
        let mut base = self.clone();
        let mut e = k;
        // square-and-multiply; dimensions always agree here
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base).expect("same n");
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base).expect("same n");
            }
        }
        result
    }

    pub fn evaluate(&self, x: &RationalPoint) -> Result<Rational> {
        self.evaluate_slice(x.coords())
    }

    pub fn evaluate_slice(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        // powers[i][e] = x_i^e
        let powers: Vec<Vec<Rational>> = x
            .iter()
            .map(|xi| {
                let mut p = Vec::with_capacity(self.d as usize + 1);
                p.push(Rational::one());
                for e in 1..=self.d as usize {
                    let next = &p[e - 1] * xi;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Sum of all coefficients, i.e. `f(1, ..., 1)`.
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.values().sum()
    }

    /// `D^α f`. A multi-index of total order above the degree gives the
    /// zero form of degree 0.
    pub fn partial_derivative(&self, alpha: &[u32]) -> Result<Form> {
        self.check_dim(alpha.len())?;
        let order: u32 = alpha.iter().sum();
        if order > self.d {
            return Ok(Form::zero(self.n, 0));
        }
        let mut out = Form::zero(self.n, self.d - order);
        for (m, c) in &self.terms {
            if m.0.iter().zip(alpha).any(|(b, a)| b < a) {
                continue;
            }
            let mut coeff = c.clone();
            let mut exps = m.0.clone();
            for (e, &a) in exps.iter_mut().zip(alpha) {
                // falling factorial e (e-1) ... (e-a+1)
                for k in 0..a {
                    coeff *= Rational::from_integer(BigInt::from(*e - k));
                }
                *e -= a;
            }
            out.accumulate(Monomial(exps), coeff);
        }
        Ok(out)
    }

    /// `g(x) = f(x_{perm[0]}, ..., x_{perm[n-1]})`: variable `i` of `f` is
    /// replaced by variable `perm[i]`.
    pub fn substitute_variables(&self, perm: &[usize]) -> Result<Form> {
        self.check_dim(perm.len())?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; self.n];
            for (i, &ei) in m.0.iter().enumerate() {
                e[perm[i]] += ei;
            }
            (Monomial(e), c.clone())
        });
        Ok(Form::from_map_unchecked(self.n, self.d, terms))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = m.degree() == 0;
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
                if !is_const {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
