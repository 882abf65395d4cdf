mod common;

use common::{abs, f_sum, phi_sum, pw, r, ri, R};
use num_traits::{One, Zero};
use proptest::prelude::*;
use qmoments_core::hyper::*;
use qmoments_core::{QError, TruncationPolicy};

#[test]
fn phi_examples() {
    let q = r(1, 2);
    // an upper parameter 1 = q^0 kills every term after the first
    assert_eq!(phi(&[ri(1), r(3, 5)], &[r(1, 7)], &q, &r(2, 9)).unwrap(), ri(1));
    assert_eq!(phi(&[pw(&q, -1)], &[], &q, &r(1, 4)).unwrap(), r(1, 2));
    assert_eq!(phi(&[pw(&q, -2)], &[], &q, &r(1, 8)).unwrap(), r(3, 8));
    // q-binomial theorem: 1φ0(q^{-n};;q,z) = (z q^{-n}; q)_n
    for n in 0..6 {
        let z = r(1, 5);
        assert_eq!(phi(&[pw(&q, -n)], &[], &q, &z).unwrap(), common::poch(&(&z * pw(&q, -n)), &q, n as usize));
    }
}

#[test]
fn phi_errors() {
    let q = r(1, 3);
    assert_eq!(phi(&[r(1, 2)], &[], &q, &r(1, 4)), Err(QError::NonTerminating));
    // lower q^{-1} vanishes at index 1, before termination at 3
    assert!(matches!(
        phi(&[pw(&q, -3)], &[pw(&q, -1)], &q, &r(1, 4)),
        Err(QError::ZeroDenominator(_))
    ));
    // a vanishing lower factor beyond the termination index is unreachable
    assert!(phi(&[pw(&q, -1)], &[pw(&q, -3)], &q, &r(1, 4)).is_ok());
    let spec = HyperSeries::basic(vec![ri(2)], vec![], q.clone(), ri(3)).approximate(TruncationPolicy::default());
    assert!(matches!(eval_phi(&spec), Err(QError::Divergent(_))));
}

#[test]
fn classical_examples() {
    assert_eq!(hyp_f(&[ri(0), r(7, 3)], &[r(1, 2)], &ri(5)).unwrap(), ri(1));
    for n in 1..=8 {
        assert_eq!(hyp_f(&[ri(-1), ri(1 - n)], &[ri(2)], &ri(2)).unwrap(), ri(n));
    }
    for k in 0..4 {
        for a in 0..3 {
            assert_eq!(hyp_f(&[ri(0), ri(2 + k), ri(1 - 3)], &[ri(2), ri(2 + a)], &ri(1)).unwrap(), ri(1));
        }
    }
    assert_eq!(hyp_f(&[r(1, 2)], &[ri(1)], &ri(1)), Err(QError::NonTerminating));
}

#[test]
fn approximate_mode_brackets_known_sums() {
    // 1φ0(a;;q,z) = (az;q)_∞/(z;q)_∞; at a = 0 this is 1/(z;q)_∞
    let q = r(1, 2);
    let z = r(1, 3);
    let pol = TruncationPolicy::new(pw(&ri(10), -25), 4096).unwrap();
    let v = phi_approx(&[ri(0)], &[], &q, &z, &pol).unwrap();
    let prod = qmoments_core::qcalc::infinite_qpoch(&z, &q, &pol).unwrap().recip().unwrap();
    assert!(v.overlaps(&prod));
    assert!(v.bound <= pw(&ri(10), -24));
    // geometric series: 1φ0(q;;q,z) = 1/(1-z)
    let g = phi_approx(std::slice::from_ref(&q), &[], &q, &z, &pol).unwrap();
    assert!(g.contains(&(R::one() / (R::one() - &z))));
}

#[test]
fn heine_examples() {
    let q = r(1, 2);
    let res = heine_transform_residual(&pw(&q, 2), &pw(&q, 3), &q, &q, &r(1, 3), 40).unwrap();
    assert!(abs(&res.value) <= res.bound, "{res}");
    let b = r(1, 5);
    let res = heine_transform_residual(&r(1, 3), &b, &b, &q, &r(1, 4), 60).unwrap();
    assert!(abs(&res.value) <= res.bound);
    let res = heine_transform_residual(&r(1, 3), &r(2, 5), &r(1, 7), &q, &ri(0), 10).unwrap();
    assert!(res.value.is_zero());
}

#[test]
fn jackson_examples() {
    let q = r(1, 2);
    assert!(jackson_transform_residual(0, &r(1, 3), &r(2, 5), &q, &r(1, 7)).unwrap().value.is_zero());
    let res = jackson_transform_residual(1, &q, &pw(&q, 3), &q, &r(1, 5)).unwrap();
    assert!(abs(&res.value) <= res.bound);
    let q = r(1, 3);
    let res = jackson_transform_residual(2, &pw(&q, 2), &pw(&q, 4), &q, &r(1, 7)).unwrap();
    assert!(abs(&res.value) <= res.bound);
}

#[test]
fn termination_ignores_policy() {
    let q = r(2, 5);
    let up = vec![pw(&q, -4), r(3, 7), r(-1, 2)];
    let lo = vec![r(1, 9), r(5, 11)];
    let exact = phi(&up, &lo, &q, &r(3, 4)).unwrap();
    for pol in [TruncationPolicy::new(r(1, 10), 2).unwrap(), TruncationPolicy::default()] {
        let spec = HyperSeries::basic(up.clone(), lo.clone(), q.clone(), r(3, 4)).approximate(pol);
        assert_eq!(eval_phi(&spec).unwrap(), SeriesValue::Exact(exact.clone()));
    }
    assert_eq!(exact, phi_sum(&up, &lo, &q, &r(3, 4), 4));
}

#[test]
fn basic_series_degenerate_to_classical() {
    // 2φ1(q^{-n}, q^b; q^c; q, z) -> 2F1(-n, b; c; z) and
    // 1φ1(q^{-n}; q^c; q, (q-1) z) -> 1F1(-n; c; z)
    for (n, b, c, z) in [(2i64, 1i64, 3i64, r(1, 2)), (3, 2, 2, r(-2, 3)), (4, 1, 5, ri(2))] {
        let t2 = f_sum(&[ri(-n), ri(b)], &[ri(c)], &z, n as usize);
        let t1 = f_sum(&[ri(-n)], &[ri(c)], &z, n as usize);
        let mut prev: Option<(R, R)> = None;
        for m in 1..=5 {
            let q = R::one() - pw(&ri(10), -m);
            let v2 = phi(&[pw(&q, -n), pw(&q, b)], &[pw(&q, c)], &q, &z).unwrap();
            let v1 = phi(&[pw(&q, -n)], &[pw(&q, c)], &q, &((&q - R::one()) * &z)).unwrap();
            let e = (abs(&(v2 - &t2)), abs(&(v1 - &t1)));
            if let Some(p) = &prev {
                assert!(e.0 < p.0 && e.1 < p.1, "n={n} m={m}");
            }
            prev = Some(e);
        }
    }
}

fn small_q() -> impl Strategy<Value = R> {
    (1i64..9, 2i64..10).prop_filter_map("0<q<1", |(a, b)| (a < b).then(|| r(a, b)))
}

proptest! {
    #[test]
    fn terminating_phi_matches_brute_force(
        q in small_q(),
        n in 0i64..6,
        a in -5i64..6,
        b in 1i64..9,
        num in -6i64..7,
    ) {
        let up = vec![pw(&q, -n), r(a, 3)];
        let lo = vec![r(b, 11) + ri(2)];
        let z = r(num, 5);
        let v = phi(&up, &lo, &q, &z).unwrap();
        prop_assert_eq!(v, phi_sum(&up, &lo, &q, &z, n as usize));
        // r = 1, s = 1 exercises the (-1)^i q^{i(i-1)/2} factor
        let v = phi(&up[..1], &lo, &q, &z).unwrap();
        prop_assert_eq!(v, phi_sum(&up[..1], &lo, &q, &z, n as usize));
    }

    #[test]
    fn terminating_f_matches_brute_force(n in 0i64..7, a in -4i64..5, b in 1i64..6, num in -5i64..6) {
        let up = vec![ri(-n), r(a, 2)];
        let lo = vec![r(2 * b + 1, 2)];
        let z = r(num, 3);
        prop_assert_eq!(hyp_f(&up, &lo, &z).unwrap(), f_sum(&up, &lo, &z, n as usize));
    }
}
