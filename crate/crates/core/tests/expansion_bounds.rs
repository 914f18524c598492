mod common;

use num_traits::{Signed, Zero};
use rand::Rng;

use sds_core::boundscalc::{
    derivative_bound, normalized_height, required_depth, theorem1_bound, Authority, Threshold,
};
use sds_core::golden::exponent_vectors;
use sds_core::rational::{int, ratio};
use sds_core::{expand, sign_classify, Form, RationalPoint, SignClass, SimplexMatrix};

#[test]
fn expansion_matches_composition() {
    let mut rng = common::rng(21);
    for case in 0..100 {
        let n = rng.gen_range(2..=4);
        let d = rng.gen_range(1..=4);
        let f = common::random_rational_form(&mut rng, n, d);
        let m = common::simplex_matrix(&mut rng, n);
        let g = expand(&f, &m).unwrap();
        assert_eq!(g.degree(), f.degree(), "case {case}");
        for _ in 0..10 {
            let x = common::rational_vector(&mut rng, n);
            let mx = m.apply(&x).unwrap();
            assert_eq!(g.evaluate_slice(&x).unwrap(), f.evaluate_slice(&mx).unwrap(), "case {case}");
        }
    }
}

#[test]
fn expansion_is_functorial() {
    let mut rng = common::rng(22);
    for case in 0..50 {
        let n = rng.gen_range(2..=3);
        let d = rng.gen_range(1..=4);
        let f = common::random_rational_form(&mut rng, n, d);
        let m1 = common::simplex_matrix(&mut rng, n);
        let m2 = common::simplex_matrix(&mut rng, n);
        let lhs = expand(&f, &m1.multiply(&m2).unwrap()).unwrap();
        let rhs = expand(&expand(&f, &m1).unwrap(), &m2).unwrap();
        assert_eq!(lhs, rhs, "case {case}");
    }
}

#[test]
fn shrinking_preserves_the_sign_at_the_center() {
    let mut rng = common::rng(23);
    let mut checked = 0;
    while checked < 60 {
        let n = rng.gen_range(2..=4);
        let d = rng.gen_range(1..=4);
        let f = common::random_form(&mut rng, n, d, 9);
        let p = common::interior_point(&mut rng, n);
        let v = f.evaluate(&p).unwrap();
        if v.is_zero() {
            continue;
        }
        let bound = theorem1_bound(&f, &p).unwrap().value_exact.unwrap();
        // anywhere strictly below the bound, including just under it
        for eps in [&bound * ratio(1, 3), &bound * ratio(99, 100)] {
            let b = SimplexMatrix::shrink_around(&p, &eps).unwrap();
            let class = sign_classify(&expand(&f, &b).unwrap());
            let want = if v.is_positive() { SignClass::AllPositive } else { SignClass::AllNegative };
            assert_eq!(class, want, "f={f} p={p} eps={eps}");
        }
        checked += 1;
    }
}

#[test]
fn certified_cells_stay_certified_below() {
    // children of a uniformly signed cell keep the same or a stronger class
    let mut rng = common::rng(24);
    let mut seen = 0;
    while seen < 20 {
        let n = rng.gen_range(2..=3);
        let d = rng.gen_range(1..=3);
        let f = common::random_form(&mut rng, n, d, 9);
        let m = common::simplex_matrix(&mut rng, n);
        let g = expand(&f, &m).unwrap();
        let class = sign_classify(&g);
        let ok_children: &[SignClass] = match class {
            SignClass::AllPositive => &[SignClass::AllPositive],
            SignClass::AllNonnegative => &[SignClass::AllPositive, SignClass::AllNonnegative, SignClass::ZeroForm],
            SignClass::AllNegative => &[SignClass::AllNegative],
            SignClass::AllNonpositive => &[SignClass::AllNegative, SignClass::AllNonpositive, SignClass::ZeroForm],
            _ => continue,
        };
        for sigma in sds_core::Permutation::all(n) {
            let child = expand(&g, &SimplexMatrix::barycentric(&sigma)).unwrap();
            assert!(ok_children.contains(&sign_classify(&child)), "f={f}");
        }
        seen += 1;
    }
}

#[test]
fn derivatives_are_bounded_by_height() {
    let mut rng = common::rng(25);
    for case in 0..100 {
        let n = rng.gen_range(2..=4);
        let d = rng.gen_range(1..=4);
        let f = common::random_rational_form(&mut rng, n, d);
        let bound = derivative_bound(&f).unwrap();
        let alphas = exponent_vectors(n, d);
        let derivs: Vec<Form> = alphas.iter().map(|a| f.partial_derivative(a).unwrap()).collect();
        for _ in 0..20 {
            let x = common::simplex_point(&mut rng, n);
            for (a, g) in alphas.iter().zip(&derivs) {
                let v = g.evaluate(&x).unwrap();
                assert!(v.abs() <= bound, "case {case} alpha {a:?} x {x}");
            }
        }
    }
}

#[test]
fn theorem1_bound_is_linear_in_value_and_inverse_in_height() {
    let p = RationalPoint::new(vec![ratio(1, 4), ratio(3, 4)]);
    let f = Form::linear(&[int(2), int(1)]);
    let base = theorem1_bound(&f, &p).unwrap().value_exact.unwrap();
    // scaling f leaves the bound fixed: |f(P)| and L_f scale together
    let scaled = theorem1_bound(&f.scale(&int(7)), &p).unwrap().value_exact.unwrap();
    assert_eq!(scaled, base);
    // same height, doubled value at P
    let g = Form::linear(&[int(2), int(2)]);
    let lg = normalized_height(&g).unwrap();
    assert_eq!(lg, normalized_height(&f).unwrap());
    let vf = f.evaluate(&p).unwrap();
    let vg = g.evaluate(&p).unwrap();
    let bg = theorem1_bound(&g, &p).unwrap().value_exact.unwrap();
    assert_eq!(bg, &base * vg / &vf);
    // same value at P, larger height
    let h = Form::linear(&[int(4), ratio(1, 3)]);
    assert_eq!(h.evaluate(&p).unwrap(), vf);
    let bh = theorem1_bound(&h, &p).unwrap().value_exact.unwrap();
    assert_eq!(bh, &base * normalized_height(&f).unwrap() / normalized_height(&h).unwrap());
}

#[test]
fn required_depth_is_minimal() {
    let mut rng = common::rng(26);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let t = ratio(rng.gen_range(1..=1000), rng.gen_range(1..=100_000));
        // thresholds above 1 are met by N = 1 already
        let depth = required_depth(n, &Threshold::Exact(t.clone())).unwrap();
        if n == 1 {
            assert_eq!(depth, 1);
            continue;
        }
        assert!(common::decay(n, depth as usize) < t, "n={n} t={t}");
        // depth is a positive integer, so minimality is checked from 2 up
        assert!(depth >= 1);
        if depth > 1 {
            assert!(common::decay(n, depth as usize - 1) >= t, "n={n} t={t}");
        }
    }
}

#[test]
fn exact_and_log2_values_agree() {
    let mut rng = common::rng(27);
    for _ in 0..50 {
        let n = rng.gen_range(2..=3);
        let d = rng.gen_range(1..=3);
        let f = common::random_form(&mut rng, n, d, 9);
        let p = common::interior_point(&mut rng, n);
        if f.evaluate(&p).unwrap().is_zero() {
            continue;
        }
        let r = theorem1_bound(&f, &p).unwrap();
        assert_eq!(r.authority, Authority::Exact);
        assert!(r.is_consistent());
        let (v, l) = (r.value_exact.unwrap(), r.value_log2.unwrap());
        // 2^lo <= v <= 2^hi, checked on the integer parts
        let lo = l.lo.floor().to_integer();
        let hi = l.hi.ceil().to_integer();
        let two = int(2);
        let pow2 = |e: &num_bigint::BigInt| {
            let k: i64 = e.try_into().unwrap();
            if k >= 0 {
                sds_core::rational::pow(&two, k as u64)
            } else {
                sds_core::rational::pow(&two, (-k) as u64).recip()
            }
        };
        assert!(pow2(&lo) <= v && v <= pow2(&hi));
    }
}
