mod common;

use common::{interpolate, pair_against, phi_sum, poch, pw, r, ri, R};
use num_traits::{One, Zero};
use proptest::prelude::*;
use qmoments_core::ensembles::*;
use qmoments_core::{ApproxValue, QError, TruncationPolicy};

fn pol() -> TruncationPolicy {
    TruncationPolicy::new(pw(&ri(10), -26), 4096).unwrap()
}

fn within_25(v: &ApproxValue, target: &R) -> bool {
    v.contains(target) && v.bound <= pw(&ri(10), -25)
}

#[test]
fn orthonormality_and_mass_for_both_measures() {
    for q in [r(1, 3), r(1, 2)] {
        let measures = [
            AtomicMeasure::q_gaussian(&q * &q).unwrap(),
            AtomicMeasure::q_laguerre(q.clone(), 0).unwrap(),
            AtomicMeasure::q_laguerre(&q * &q, 2).unwrap(),
        ];
        for m in &measures {
            assert!(within_25(&measure_mass(m, &pol()).unwrap(), &ri(1)), "{m:?}");
            for n in 0..=5 {
                let v = orthonormality_sum(m, n, &pol()).unwrap();
                assert!(within_25(&v, &ri(1)), "{m:?} n={n}: {v}");
            }
        }
    }
}

#[test]
fn one_point_function_has_unit_mass() {
    let q = r(1, 2);
    let fams = [
        OracleFamily::QHermite { nu: NuConvention::MeasureBase },
        OracleFamily::QLaguerre { alpha: 1, base: LaguerreBase::Squared },
    ];
    for fam in &fams {
        for n in 1..=6 {
            let v = onepoint_moment_oracle(fam, 0, n, &q, &pol()).unwrap();
            assert!(within_25(&v, &ri(1)), "{fam:?} N={n}: {v}");
        }
    }
}

#[test]
fn odd_gaussian_moments_are_exactly_zero() {
    for nu in [NuConvention::MeasureBase, NuConvention::Unsquared] {
        for k in [1, 3, 5] {
            let v = onepoint_moment_oracle(&OracleFamily::QHermite { nu }, k, 3, &r(3, 5), &pol()).unwrap();
            assert_eq!(v, ApproxValue::exact(ri(0)));
        }
    }
    assert!(matches!(
        onepoint_moment_oracle(&OracleFamily::QHermite { nu: NuConvention::MeasureBase }, 2, 0, &r(1, 2), &pol()),
        Err(QError::InvalidParameter(_))
    ));
}

#[test]
fn gaussian_even_moments_are_q_double_factorials() {
    // with ν² = 1/(1-Q), ∫ x^{2k} dg(x; Q) = Π_{i=1..k} (1 - Q^{2i-1})/(1 - Q)
    let q = r(1, 2);
    let big_q = &q * &q;
    let fam = OracleFamily::QHermite { nu: NuConvention::MeasureBase };
    for k in 1..=4i64 {
        let want = (1..=k).fold(R::one(), |acc, i| acc * (R::one() - pw(&big_q, 2 * i - 1)) / (R::one() - &big_q));
        let v = onepoint_moment_oracle(&fam, 2 * k as u64, 1, &q, &pol()).unwrap();
        assert!(v.contains(&want), "k={k}: {v} vs {want}");
    }
}

#[test]
fn laguerre_single_particle_moments_follow_the_q_gamma_shift() {
    // ∫_0^∞ x^{s-1}/(-x;p)_∞ d_p x gains a factor (1 - p^s)/p^s under s -> s+1
    for (p, alpha) in [(r(1, 2), 0u64), (r(1, 3), 2), (r(1, 4), 1)] {
        let fam = OracleFamily::QLaguerre { alpha, base: LaguerreBase::Plain };
        let a = alpha as i64;
        let mut want = R::one();
        for k in 1..=3i64 {
            want *= (R::one() - pw(&p, a + k)) / pw(&p, a + k);
            let v = onepoint_moment_oracle(&fam, k as u64, 1, &p, &pol()).unwrap();
            assert!(v.contains(&want), "p={p} α={alpha} k={k}: {v} vs {want}");
        }
    }
}

/// Discrete q-Hermite I, monic, evaluated straight from the recurrence.
fn monic_hermite(n: u64, t: &R, big_q: &R) -> R {
    let (mut prev, mut cur) = (R::one(), t.clone());
    if n == 0 {
        return prev;
    }
    for m in 1..n as i64 {
        let next = t * &cur - pw(big_q, m - 1) * (R::one() - pw(big_q, m)) * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[test]
fn hermite_squares_match_monic_recurrence() {
    for q in [r(1, 2), r(2, 3)] {
        let big_q = &q * &q;
        for n in 0..=6u64 {
            let norm = pw(&big_q, (n * n.saturating_sub(1) / 2) as i64) * poch(&big_q, &big_q, n as usize);
            for j in 0..=10 {
                for t in [pw(&big_q, j), -pw(&big_q, j)] {
                    let h = monic_hermite(n, &t, &big_q);
                    assert_eq!(q_hermite_sq(n, &t, &q).unwrap(), &h * &h / &norm, "n={n} t={t}");
                }
            }
        }
    }
    assert_eq!(q_hermite_sq(1, &ri(0), &r(1, 2)), Err(QError::ZeroPoint));
}

#[test]
fn hermite_square_against_series_by_hand() {
    // n = 2, t = q: 2φ1(Q^{-2}, 1/q; 0; Q, -Q q) summed directly
    let q = r(1, 2);
    let big_q = &q * &q;
    let s = phi_sum(&[pw(&big_q, -2), q.recip()], &[ri(0)], &big_q, &-(&big_q * &q), 2);
    let want = pw(&q, 2) / poch(&big_q, &big_q, 2) * &s * &s;
    assert_eq!(q_hermite_sq(2, &q, &q).unwrap(), want);
}

#[test]
fn laguerre_forms_agree_at_sampled_points() {
    let points: Vec<R> = (0..20).map(|i| r(3 * i - 17, 7 + i)).collect();
    for p in [r(1, 2), r(2, 5)] {
        for alpha in 0..=2 {
            for n in 0..=8 {
                for x in &points {
                    let v = q_laguerre_sq(n, x, alpha, &p).unwrap();
                    assert!(v >= R::zero());
                }
            }
        }
    }
}

#[test]
fn laguerre_square_by_hand() {
    // n = 1, α = 0, p = 1/2, x = 1: the 1φ1 display has two terms
    let p = r(1, 2);
    let s = phi_sum(&[p.recip()], std::slice::from_ref(&p), &p, &-(&p * &p), 1);
    let norm = poch(&p, &p, 1) * &p / poch(&p, &p, 1);
    assert_eq!(q_laguerre_sq(1, &ri(1), 0, &p).unwrap(), norm * &s * &s);
    assert_eq!(q_laguerre_sq(0, &r(5, 3), 2, &p).unwrap(), ri(1));
}

#[test]
fn weight_structure() {
    let big_q = r(1, 4);
    let g = AtomicMeasure::q_gaussian(big_q.clone()).unwrap();
    for j in 0..8 {
        let want = pw(&big_q, j) / (poch(&big_q, &big_q, j as usize) * poch(&-big_q.clone(), &big_q, j as usize));
        assert_eq!(g.relative_weight(j).unwrap(), want);
        assert!(measure_weight(&g, j, &pol()).unwrap().lower() > R::zero());
    }
    assert!(g.atom(-1).is_err());

    // the ratio recursion holds across the whole bilateral ladder
    for alpha in 0..3u64 {
        let p = r(1, 2);
        let m = AtomicMeasure::q_laguerre(p.clone(), alpha).unwrap();
        for n in -8..8i64 {
            let ratio = m.relative_weight(n + 1).unwrap() / m.relative_weight(n).unwrap();
            assert_eq!(ratio, pw(&p, alpha as i64 + 1) * (R::one() + pw(&p, n)), "α={alpha} n={n}");
        }
    }
}

#[test]
fn q_hahn_and_big_q_jacobi_examples() {
    let q = r(1, 2);
    let (a, b) = (r(1, 3), r(2, 5));
    assert_eq!(q_hahn(0, &r(7, 9), &a, &b, 3, &q).unwrap(), ri(1));
    // x-parameter 1 = q^0 makes every term after the first vanish
    assert_eq!(q_hahn(3, &ri(1), &a, &b, 4, &q).unwrap(), ri(1));
    let two_term = R::one()
        + (R::one() - q.recip()) * (R::one() - &a * &b * pw(&q, 2)) * (R::one() - q.recip()) * &q
            / ((R::one() - &a * &q) * (R::one() - pw(&q, -4)) * (R::one() - &q));
    assert_eq!(q_hahn(1, &q.recip(), &a, &b, 4, &q).unwrap(), two_term);
    assert!(matches!(q_hahn(5, &ri(1), &a, &b, 4, &q), Err(QError::DegreeOutOfRange { .. })));

    let c = r(3, 7);
    assert_eq!(big_q_jacobi(0, &r(4, 3), &a, &b, &c, &q).unwrap(), ri(1));
    for n in 1..5usize {
        let up = [pw(&q, -(n as i64)), &a * &b * pw(&q, n as i64 + 1), &a * &q];
        let lo = [&a * &q, &c * &q];
        assert_eq!(
            big_q_jacobi(n as u64, &(&a * &q), &a, &b, &c, &q).unwrap(),
            phi_sum(&up, &lo, &q, &q, n)
        );
    }
    let lo_zero = big_q_jacobi(2, &ri(0), &a, &b, &pw(&q, -2), &q);
    assert!(matches!(lo_zero, Err(QError::ZeroDenominator(_))));
}

#[test]
fn classical_families_are_orthogonal() {
    let odd_double = |m: usize| -> R {
        if m % 2 == 1 {
            R::zero()
        } else {
            (1..m as i64).step_by(2).fold(R::one(), |a, i| a * ri(i))
        }
    };
    let coeffs = |fam: &ClassicalFamily, n: u64| -> Vec<R> {
        let xs: Vec<R> = (0..=n as i64).map(|i| r(2 * i + 1, 3)).collect();
        let ys: Vec<R> = xs.iter().map(|x| classical_poly(fam, n, x).unwrap()).collect();
        interpolate(&xs, &ys)
    };

    let h = ClassicalFamily::Hermite;
    for m in 0..=6 {
        for n in 0..=6 {
            let v = pair_against(&coeffs(&h, m), &coeffs(&h, n), &odd_double);
            let want = if m == n { classical_norm_sq(&h, n).unwrap() } else { R::zero() };
            assert_eq!(v, want, "Hermite m={m} n={n}");
        }
    }
    for alpha in 0..=3i64 {
        let lag = ClassicalFamily::Laguerre { alpha: ri(alpha) };
        let gamma_moment = |j: usize| common::rising(&ri(alpha + 1), j);
        for m in 0..=5 {
            for n in 0..=5 {
                let v = pair_against(&coeffs(&lag, m), &coeffs(&lag, n), &gamma_moment);
                let want = if m == n { classical_norm_sq(&lag, n).unwrap() } else { R::zero() };
                assert_eq!(v, want, "Laguerre α={alpha} m={m} n={n}");
            }
        }
    }
}

fn binom(a: &R, k: i64) -> R {
    common::rising(&(a - ri(k) + ri(1)), k as usize) / common::fact(k as usize)
}

#[test]
fn discrete_hahn_families_are_orthogonal() {
    let big_n = 4i64;
    let (alpha, beta) = (ri(1), ri(2));
    let hahn = ClassicalFamily::Hahn { alpha: alpha.clone(), beta: beta.clone(), big_n: ri(big_n) };
    for m in 0..=big_n as u64 {
        for n in 0..m {
            let s = (0..=big_n).fold(R::zero(), |acc, x| {
                let w = binom(&(&alpha + ri(x)), x) * binom(&(&beta + ri(big_n - x)), big_n - x);
                acc + w * classical_poly(&hahn, m, &ri(x)).unwrap() * classical_poly(&hahn, n, &ri(x)).unwrap()
            });
            assert!(s.is_zero(), "Hahn m={m} n={n}");
        }
    }

    let (gamma, delta) = (ri(1), ri(1));
    let dual = ClassicalFamily::DualHahn { gamma: gamma.clone(), delta: delta.clone(), big_n: ri(big_n) };
    let gd1 = &gamma + &delta + ri(1);
    for m in 0..=big_n as u64 {
        for n in 0..m {
            let s = (0..=big_n).fold(R::zero(), |acc, x| {
                let xr = ri(x);
                let sign = if x % 2 == 0 { R::one() } else { -R::one() };
                let w = (ri(2) * &xr + &gd1) * common::rising(&(&gamma + ri(1)), x as usize)
                    * common::rising(&ri(-big_n), x as usize)
                    / (sign
                        * common::rising(&(&xr + &gd1), big_n as usize + 1)
                        * common::rising(&(&delta + ri(1)), x as usize)
                        * common::fact(x as usize));
                acc + w * classical_poly(&dual, m, &xr).unwrap() * classical_poly(&dual, n, &xr).unwrap()
            });
            assert!(s.is_zero(), "dual Hahn m={m} n={n}");
        }
    }
}

#[test]
fn fit_reports_the_per_point_exponents() {
    let q = r(1, 2);
    let pts = vec![
        RatioPoint { k: 1, n: 1, ratio: ApproxValue::exact(q.clone()) },
        RatioPoint { k: 1, n: 2, ratio: ApproxValue::exact(pw(&q, 3)) },
    ];
    let fit = fit_q_power_factor(&q, &pts);
    assert_eq!(fit.exponents, vec![(1, 1, Some(1)), (1, 2, Some(3))]);
    assert!(!fit.is_consistent());
    assert!(fit.describe().contains("(k=1,N=2):q^3"));
}

proptest! {
    #[test]
    fn laguerre_forms_agree_on_random_points(num in -40i64..40, den in 1i64..30, n in 0u64..=8, alpha in 0u64..3) {
        let x = r(num, den);
        let v = q_laguerre_sq(n, &x, alpha, &r(1, 3));
        prop_assert!(v.is_ok());
    }

    #[test]
    fn hermite_squares_are_nonnegative(j in 0i64..12, neg in any::<bool>(), n in 0u64..7) {
        let q = r(3, 5);
        let t = if neg { -pw(&(&q * &q), j) } else { pw(&(&q * &q), j) };
        prop_assert!(q_hermite_sq(n, &t, &q).unwrap() >= R::zero());
    }
}
