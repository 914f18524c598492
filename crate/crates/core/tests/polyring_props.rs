mod common;

use proptest::prelude::*;

use sds_core::polyring::{parse_form, parse_system, serialize_form, serialize_system};
use sds_core::rational::{pow, ratio};
use sds_core::{Form, Rational};

fn form_from(n: usize, d: u32, coeffs: &[(i64, i64)]) -> Form {
    let terms = common::exponents(n, d)
        .into_iter()
        .zip(coeffs)
        .map(|(e, &(p, q))| (e, ratio(p, q)));
    Form::from_terms(n, d, terms).unwrap()
}

fn slots(n: usize, d: u32) -> usize {
    common::exponents(n, d).len()
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=4), len)
}

fn form(n: usize, max_d: u32) -> impl Strategy<Value = Form> {
    (0..=max_d).prop_flat_map(move |d| coeffs(slots(n, d)).prop_map(move |c| form_from(n, d, &c)))
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=6), n)
        .prop_map(|v| v.into_iter().map(|(p, q)| ratio(p, q)).collect())
}

fn form_pair_and_point() -> impl Strategy<Value = (Form, Form, Vec<Rational>)> {
    (1usize..=3).prop_flat_map(|n| (form(n, 3), form(n, 3), point(n)))
}

fn multi_index(n: usize, max: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_evaluates_to_product((f, g, x) in form_pair_and_point()) {
        let fg = f.multiply(&g).unwrap();
        prop_assert_eq!(fg.degree(), f.degree() + g.degree());
        prop_assert_eq!(
            fg.evaluate_slice(&x).unwrap(),
            f.evaluate_slice(&x).unwrap() * g.evaluate_slice(&x).unwrap()
        );
    }

    #[test]
    fn sum_keeps_degree((f, _g, x) in form_pair_and_point(), k in -3i64..=3) {
        let h = f.add(&f.scale(&ratio(k, 1))).unwrap();
        prop_assert_eq!(h.degree(), f.degree());
        prop_assert_eq!(h.evaluate_slice(&x).unwrap(), f.evaluate_slice(&x).unwrap() * ratio(k + 1, 1));
    }

    #[test]
    fn power_degree_and_value((f, _g, x) in form_pair_and_point(), k in 0u32..=3) {
        let p = f.power(k);
        prop_assert_eq!(p.degree(), f.degree() * k);
        prop_assert_eq!(p.evaluate_slice(&x).unwrap(), pow(&f.evaluate_slice(&x).unwrap(), k as u64));
    }

    #[test]
    fn evaluation_is_homogeneous((f, _g, x) in form_pair_and_point(), tp in -7i64..=7, tq in 1i64..=5) {
        let t = ratio(tp, tq);
        let tx: Vec<Rational> = x.iter().map(|v| v * &t).collect();
        prop_assert_eq!(
            f.evaluate_slice(&tx).unwrap(),
            pow(&t, f.degree() as u64) * f.evaluate_slice(&x).unwrap()
        );
    }

    #[test]
    fn mixed_partials_compose(
        (f, a, b) in (1usize..=3).prop_flat_map(|n| (form(n, 4), multi_index(n, 2), multi_index(n, 2)))
    ) {
        let ab: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = f.partial_derivative(&a).unwrap().partial_derivative(&b).unwrap();
        let rhs = f.partial_derivative(&ab).unwrap();
        let ba = f.partial_derivative(&b).unwrap().partial_derivative(&a).unwrap();
        prop_assert!(lhs.is_zero() == rhs.is_zero());
        if !rhs.is_zero() {
            prop_assert_eq!(rhs.degree(), f.degree() - ab.iter().sum::<u32>());
            prop_assert_eq!(&lhs, &rhs);
        }
        prop_assert_eq!(lhs.is_zero(), ba.is_zero());
        if !lhs.is_zero() {
            prop_assert_eq!(lhs, ba);
        }
    }

    #[test]
    fn text_round_trip((f, g, _x) in form_pair_and_point()) {
        let text = serialize_form(&f);
        prop_assert_eq!(&parse_form(&text).unwrap(), &f);
        prop_assert_eq!(serialize_form(&parse_form(&text).unwrap()), text);
        let sys = vec![f, g];
        prop_assert_eq!(parse_system(&serialize_system(&sys)).unwrap(), sys);
    }
}
