//! Built-in golden suite run by `sds self-test`.

use num_traits::Zero;

use crate::boundscalc::{
    derivative_bound, min_value_lower_bound, required_depth, theorem1_bound, Threshold,
};
use crate::expansion::{expand, sign_classify, SignClass};
use crate::polyring::{parse_form, Form, RationalPoint};
use crate::rational::{int, ratio, Rational};
use crate::sdsengine::{replay_certificate, sds_search, Goal, SdsConfig, Verdict};
use crate::simplexgeo::{Permutation, SimplexMatrix};
use crate::zerodetect::{detect_zero, theorem2_threshold, SystemInput, ZeroVerdict};

/// Serialized Example 1 form shipped with the crate.
pub const EXAMPLE1_TEXT: &str = include_str!("../data/example1.poly");

fn lin(c: [i64; 3]) -> Form {
    Form::linear(&c.map(int))
}

fn product(factors: &[Form]) -> Form {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, g| acc.multiply(g).expect("ternary"))
}

/// `3^7 (y^4 z^4 (y+z)^4 (2x+y+z)^8 + x^4 z^4 (x+z)^4 (x+2y+z)^8
///  + x^4 y^4 (x+y)^4 (x+y+2z)^8) - 2^8 (x+y+z)^8 (x+y)^4 (x+z)^4 (y+z)^4`
pub fn example1_form() -> Form {
    let (x, y, z) = (lin([1, 0, 0]), lin([0, 1, 0]), lin([0, 0, 1]));
    let terms = [
        product(&[y.power(4), z.power(4), lin([0, 1, 1]).power(4), lin([2, 1, 1]).power(8)]),
        product(&[x.power(4), z.power(4), lin([1, 0, 1]).power(4), lin([1, 2, 1]).power(8)]),
        product(&[x.power(4), y.power(4), lin([1, 1, 0]).power(4), lin([1, 1, 2]).power(8)]),
    ];
    let positive = terms
        .iter()
        .skip(1)
        .fold(terms[0].clone(), |acc, t| acc.add(t).expect("same degree"))
        .scale(&int(2187));
    let negative = product(&[
        lin([1, 1, 1]).power(8),
        lin([1, 1, 0]).power(4),
        lin([1, 0, 1]).power(4),
        lin([0, 1, 1]).power(4),
    ])
    .scale(&int(256));
    positive.sub(&negative).expect("same degree")
}

#[derive(Debug, Clone)]
pub struct GoldenItem {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

impl GoldenItem {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(text: &str) -> Form {
    parse_form(text).expect("golden literal")
}

fn item(name: &'static str, f: impl FnOnce() -> Result<(), String>) -> GoldenItem {
    GoldenItem { name, outcome: f() }
}

/// Runs every golden check against the given Example 1 file contents.
pub fn run_golden(example1_text: &str) -> Vec<GoldenItem> {
    let parsed = parse_form(example1_text);
    let mut items = vec![item("example1_file", || match &parsed {
        Ok(f) => check(*f == example1_form(), || "file differs from the product form".into()),
        Err(e) => Err(e.to_string()),
    })];
    let f = parsed.unwrap_or_else(|_| example1_form());

    items.push(item("example1_vertex_zero", || {
        let v = f
            .evaluate(&RationalPoint::unit(3, 0))
            .map_err(|e| e.to_string())?;
        check(v.is_zero(), || format!("f(1,0,0) = {v}"))
    }));
    items.push(item("example1_barycentric_nonnegative", || {
        for sigma in Permutation::all(3) {
            let g = expand(&f, &SimplexMatrix::barycentric(&sigma)).map_err(|e| e.to_string())?;
            let class = sign_classify(&g);
            if class != SignClass::AllNonnegative {
                return Err(format!("sigma {sigma}: {class}"));
            }
        }
        Ok(())
    }));
    items.push(item("example1_certificate", || {
        let config = SdsConfig {
            max_depth: 1,
            goal: Goal::ProveNonnegative,
            ..SdsConfig::default()
        };
        let cert = sds_search(&f, &config).map_err(|e| e.to_string())?;
        check(
            cert.verdict == Verdict::Nonnegative && cert.leaves.len() == 6,
            || format!("{} with {} leaves", cert.verdict, cert.leaves.len()),
        )?;
        check(replay_certificate(&f, &cert).map_err(|e| e.to_string())?, || {
            "replay rejected".into()
        })
    }));

    items.push(item("bound_linear", || {
        let r = theorem1_bound(&q("2 1\n2 1 0\n1 0 1\n"), &RationalPoint::simplex_center(2))
            .map_err(|e| e.to_string())?;
        check(r.value_exact == Some(ratio(3, 8)), || format!("{:?}", r.value_exact))
    }));
    items.push(item("bound_quadratic", || {
        let r = theorem1_bound(&q("2 2\n1 2 0\n1 0 2\n"), &RationalPoint::simplex_center(2))
            .map_err(|e| e.to_string())?;
        check(r.value_exact == Some(ratio(1, 24)), || format!("{:?}", r.value_exact))
    }));
    items.push(item("bound_depth", || {
        let n = required_depth(2, &Threshold::Exact(ratio(3, 8))).map_err(|e| e.to_string())?;
        check(n == 2, || format!("depth {n}"))
    }));
    items.push(item("bound_min_value", || {
        let r = min_value_lower_bound(2, 2, &int(10)).map_err(|e| e.to_string())?;
        let l = r.value_log2.ok_or("missing log2 value")?;
        check(
            l.lo > ratio(-2663018, 10000) && l.hi < ratio(-2663016, 10000),
            || format!("log2 in [{}, {}]", l.lo, l.hi),
        )
    }));
    items.push(item("bound_zero_depth", || {
        let sys = SystemInput::new(vec![q("2 1\n1 1 0\n-1 0 1\n")]).map_err(|e| e.to_string())?;
        let b = theorem2_threshold(&sys).map_err(|e| e.to_string())?;
        check(b.theoretical_depth == 270, || format!("depth {}", b.theoretical_depth))?;
        let r = detect_zero(&sys, 1).map_err(|e| e.to_string())?;
        check(
            r.verdict == ZeroVerdict::ZeroFound
                && r.witness.map(|w| w.point) == Some(RationalPoint::simplex_center(2)),
            || format!("verdict {}", r.verdict.tag()),
        )
    }));

    items.push(item("derivative_bound_samples", || {
        let forms = [
            q("2 1\n2 1 0\n1 0 1\n"),
            q("2 2\n1 2 0\n1 0 2\n"),
            q("3 3\n1 3 0 0\n-2 1 1 1\n5 0 1 2\n"),
        ];
        let points = [
            RationalPoint::new(vec![ratio(1, 3), ratio(2, 3), int(0)]),
            RationalPoint::new(vec![ratio(1, 7), ratio(5, 7), ratio(1, 7)]),
        ];
        for f in &forms {
            let bound = derivative_bound(f).map_err(|e| e.to_string())?;
            for p in &points {
                let p = RationalPoint::new(p.coords()[..f.n()].to_vec());
                for alpha in exponent_vectors(f.n(), f.degree()) {
                    let v: Rational = f
                        .partial_derivative(&alpha)
                        .and_then(|g| g.evaluate(&p))
                        .map_err(|e| e.to_string())?;
                    if num_traits::Signed::abs(&v) > bound {
                        return Err(format!("|D^{alpha:?} f({p})| = {v} > {bound}"));
                    }
                }
            }
        }
        Ok(())
    }));
    items
}

/// All `α` with `|α| <= d`.
pub fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_suite_passes() {
        for it in run_golden(EXAMPLE1_TEXT) {
            assert!(it.passed(), "{}: {:?}", it.name, it.outcome);
        }
    }

    #[test]
    fn corrupted_file_is_named() {
        let bad = EXAMPLE1_TEXT.replacen("1931 ", "1932 ", 1);
        let items = run_golden(&bad);
        let failed: Vec<_> = items.iter().filter(|i| !i.passed()).map(|i| i.name).collect();
        assert!(failed.contains(&"example1_file"), "{failed:?}");
    }

    #[test]
    fn exponent_vector_count() {
        // C(n + d, d) vectors with |α| <= d
        assert_eq!(exponent_vectors(2, 3).len(), 10);
        assert_eq!(exponent_vectors(3, 2).len(), 10);
    }
}
