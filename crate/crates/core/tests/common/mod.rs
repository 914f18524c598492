#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sds_core::rational::{int, ratio};
use sds_core::{Form, Rational, RationalPoint, SimplexMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Dense-ish random form with integer coefficients in `[-bound, bound]`,
/// never zero.
pub fn random_form(rng: &mut impl Rng, n: usize, d: u32, bound: i64) -> Form {
    loop {
        let terms: Vec<(Vec<u32>, Rational)> = exponents(n, d)
            .into_iter()
            .filter_map(|e| rng.gen_bool(0.7).then(|| (e, int(rng.gen_range(-bound..=bound)))))
            .collect();
        let f = Form::from_terms(n, d, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random form with rational coefficients `p/q`.
pub fn random_rational_form(rng: &mut impl Rng, n: usize, d: u32) -> Form {
    loop {
        let terms: Vec<(Vec<u32>, Rational)> = exponents(n, d)
            .into_iter()
            .filter_map(|e| {
                rng.gen_bool(0.7)
                    .then(|| (e, ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))))
            })
            .collect();
        let f = Form::from_terms(n, d, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random rational point of the simplex; coordinates may be zero.
pub fn simplex_point(rng: &mut impl Rng, n: usize) -> RationalPoint {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=20)).collect();
        let s: i64 = w.iter().sum();
        if s > 0 {
            return RationalPoint::new(w.into_iter().map(|v| ratio(v, s)).collect());
        }
    }
}

/// Random point with every coordinate positive.
pub fn interior_point(rng: &mut impl Rng, n: usize) -> RationalPoint {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
    let s: i64 = w.iter().sum();
    RationalPoint::new(w.into_iter().map(|v| ratio(v, s)).collect())
}

/// Random vector of small signed rationals, for identities off the simplex.
pub fn rational_vector(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| ratio(rng.gen_range(-12..=12), rng.gen_range(1..=7))).collect()
}

/// Random invertible column-stochastic matrix.
pub fn simplex_matrix(rng: &mut impl Rng, n: usize) -> SimplexMatrix {
    loop {
        let cols: Vec<RationalPoint> = (0..n).map(|_| simplex_point(rng, n)).collect();
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c.coords()[i].clone()).collect())
            .collect();
        if let Ok(m) = SimplexMatrix::new(rows) {
            return m;
        }
    }
}

/// `(n-1)/n` raised to `m`.
pub fn decay(n: usize, m: usize) -> Rational {
    sds_core::rational::pow(&ratio(n as i64 - 1, n as i64), m as u64)
}
