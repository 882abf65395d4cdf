//! Moments of the discrete q-Hermite ensemble.
//!
//! `M(k, N)` denotes the `2k`-th moment of the normalised one-point function
//! of the `N`-particle ensemble. With `Q = q²` and
//! `D_k = q^{k(1-k)} [2k-1]_{Q}!!` the routes implemented here are:
//!
//! * residues: `M = D_k (q^{-2Nk} res_top + Σ_a q^{2Na} res_a) / N`;
//! * two terminating `3φ2`s: `M = D_k (S_N - q^{-2Nk} S_0) / N`;
//! * the rational generating function in `λ`;
//! * negative-binomial randomisation, in closed form and as a q-Hahn
//!   polynomial, with its three-term recurrence in `k`.

use num_traits::{One, Signed, Zero};

use crate::error::{QError, QResult};
use crate::hyper::phi;
use crate::qarith::{q_double_factorial_odd, q_pochhammer};
use crate::qcalc::ApproxValue;
use crate::rational::{check_base, int, powi, Rational};
use crate::series;

fn require_order(k: u64) -> QResult<()> {
    if k == 0 {
        return Err(QError::InvalidOrder { got: 0, min: 1 });
    }
    Ok(())
}

fn require_particles(n: u64) -> QResult<()> {
    if n == 0 {
        return Err(QError::InvalidParameter("N must be at least 1".into()));
    }
    Ok(())
}

fn nonzero(x: Rational, what: &str) -> QResult<Rational> {
    if x.is_zero() {
        Err(QError::ZeroDenominator(what.into()))
    } else {
        Ok(x)
    }
}

/// `D_k = q^{k(1-k)} [2k-1]_{q²}!!`, the common prefactor of every route.
pub fn moment_prefactor(k: u64, q: &Rational) -> Rational {
    let ki = k as i64;
    powi(q, ki * (1 - ki)) * q_double_factorial_odd(k, &(q * q))
}

/// `S_N = q^k (-q²;q²)_k / ((q^{2k}-1)(q²;q²)_k)
///        · 3φ2(-q^{2k+2}, q^{2k}, q^{-2k}; -q², q^{2k+2}; q², q^{2N+2})`.
pub fn s_term(k: u64, n: u64, q: &Rational) -> QResult<Rational> {
    require_order(k)?;
    let q2 = q * q;
    let ki = k as i64;
    let pref = powi(q, ki) * q_pochhammer(&-q2.clone(), &q2, k)
        / ((powi(q, 2 * ki) - Rational::one()) * q_pochhammer(&q2, &q2, k));
    let s = phi(
        &[-powi(q, 2 * ki + 2), powi(q, 2 * ki), powi(q, -2 * ki)],
        &[-q2.clone(), powi(q, 2 * ki + 2)],
        &q2,
        &powi(q, 2 * n as i64 + 2),
    )?;
    Ok(pref * s)
}

/// The residue at `λ = q^{2k}`, straight from its product formula (before
/// the common factor `D_k`).
pub fn residue_top(k: u64, q: &Rational) -> Rational {
    let ki = k as i64;
    let one = Rational::one();
    let mut v = powi(q, ki);
    for n in 1..=ki {
        v *= powi(q, 2 * n) + powi(q, 2 * ki);
    }
    for n in 0..=ki {
        v /= &one - powi(q, 2 * n + 2 * ki);
    }
    v
}

/// The residue at `λ = q^{-2a}`, `0 <= a <= k` (before `D_k`).
pub fn residue_at(k: u64, a: u64, q: &Rational) -> Rational {
    let (ki, ai) = (k as i64, a as i64);
    let one = Rational::one();
    let mut v = powi(q, ki - 2 * ai - 2 * ki * ai);
    for n in 1..=ki {
        v *= &one + powi(q, 2 * n + 2 * ai);
    }
    let mut d = powi(q, -2 * ai) * (powi(q, 2 * ki + 2 * ai) - &one);
    for n in (0..=ki).filter(|&n| n != ai) {
        d *= &one - powi(q, 2 * n - 2 * ai);
    }
    v / d
}

/// `M(k, N)` from the residue expansion, with the top residue taken as `-S_0`.
pub fn m_qh_residue(k: u64, n: u64, q: &Rational) -> QResult<Rational> {
    require_order(k)?;
    require_particles(n)?;
    check_base(q)?;
    let ni = n as i64;
    let top = -s_term(k, 0, q)?;
    let mut acc = powi(q, -2 * ni * k as i64) * top;
    for a in 0..=k {
        acc += powi(q, 2 * ni * a as i64) * residue_at(k, a, q);
    }
    Ok(moment_prefactor(k, q) * acc / int(ni))
}

/// `M(k, N)` as the difference of two terminating `3φ2`s.
pub fn m_qh_hyper(k: u64, n: u64, q: &Rational) -> QResult<Rational> {
    require_order(k)?;
    require_particles(n)?;
    check_base(q)?;
    let s_n = s_term(k, n, q)?;
    let s_0 = s_term(k, 0, q)?;
    let v = s_n - powi(q, -2 * (n * k) as i64) * s_0;
    Ok(moment_prefactor(k, q) * v / int(n as i64))
}

/// Taylor coefficients `c_0..=c_{N_max}` in `λ` of
///
/// ```text
/// q^k λ Π_{i<k} (λ + q^{2i+2}) / ((q^{2k} - λ) Π_{i=0}^{k} (1 - λ q^{2i}))
/// ```
///
/// so that `c_N = N M(k, N) / D_k`.
pub fn m_qh_genfunc_coeffs(k: u64, q: &Rational, n_max: usize) -> QResult<Vec<Rational>> {
    require_order(k)?;
    check_base(q)?;
    let len = n_max + 1;
    let ki = k as i64;
    let mut num = vec![Rational::zero(), powi(q, ki)];
    for i in 0..ki {
        num = series::mul(&num, &[powi(q, 2 * i + 2), Rational::one()], len.max(2) + k as usize);
    }
    let mut den = vec![powi(q, 2 * ki), -Rational::one()];
    for i in 0..=ki {
        den = series::mul(&den, &[Rational::one(), -powi(q, 2 * i)], len + k as usize + 2);
    }
    series::div(&num, &den, len)
}

/// `Σ_N N M(k,N) λ^{N-1} (1-λ)²` in closed form, for `0 <= λ < 1`.
///
/// `k = 0` gives 1. The defining series only converges for `λ < q^{2k}`;
/// the closed form is returned for the whole stated range.
pub fn m_qh_randomized(k: u64, lambda: &Rational, q: &Rational) -> QResult<Rational> {
    if lambda.is_negative() || lambda >= &Rational::one() {
        return Err(QError::InvalidParameter("λ must lie in [0, 1)".into()));
    }
    m_qh_randomized_closed(k, lambda, q)
}

/// The randomised moment as a rational function of `λ`, evaluated anywhere
/// off its poles:
///
/// ```text
/// D_k q^{-k} (-q²;q²)_k (1-λ) / ((q²;q²)_k (1 - λq^{-2k}))
///     · 3φ2(-q^{2k+2}, q^{-2k}, λ; -q², λq²; q², q²)
/// ```
pub fn m_qh_randomized_closed(k: u64, lambda: &Rational, q: &Rational) -> QResult<Rational> {
    check_base(q)?;
    let q2 = q * q;
    let ki = k as i64;
    let one = Rational::one();
    let den = nonzero(
        q_pochhammer(&q2, &q2, k) * (&one - lambda * powi(q, -2 * ki)),
        "λ = q^{2k} is a pole of the randomised moment",
    )?;
    let pref = moment_prefactor(k, q) * powi(q, -ki) * q_pochhammer(&-q2.clone(), &q2, k) * (&one - lambda) / den;
    let s = phi(
        &[-powi(q, 2 * ki + 2), powi(q, -2 * ki), lambda.clone()],
        &[-q2.clone(), lambda * &q2],
        &q2,
        &q2,
    )?;
    Ok(pref * s)
}

/// The prefactor relating the randomised moment at `λ = q^{-2K-2}` to the
/// q-Hahn polynomial `Q_k(λ; -1, 1, K | q²)`.
fn qhahn_prefactor(k: u64, big_k: u64, q: &Rational) -> QResult<Rational> {
    let q2 = q * q;
    let ki = k as i64;
    let one = Rational::one();
    let lambda = powi(q, -2 * big_k as i64 - 2);
    let den = nonzero(
        q_pochhammer(&q2, &q2, k) * (&one - &lambda * powi(q, -2 * ki)),
        "q-Hahn prefactor",
    )?;
    Ok(moment_prefactor(k, q) * powi(q, -ki) * q_pochhammer(&-q2.clone(), &q2, k) * (&one - lambda) / den)
}

/// The randomised moment at `λ = q^{-2K-2}` through the q-Hahn polynomial
/// `Q_k(q^{-2K-2}; -1, 1, K | q²)`; `k = 0` gives the prefactor alone.
pub fn m_qh_randomized_qhahn(k: u64, big_k: u64, q: &Rational) -> QResult<Rational> {
    check_base(q)?;
    let q2 = q * q;
    let x = powi(q, -2 * big_k as i64 - 2);
    let poly = crate::ensembles::q_hahn(k, &x, &int(-1), &int(1), big_k, &q2)?;
    Ok(qhahn_prefactor(k, big_k, q)? * poly)
}

/// Recurrence coefficients `(a_n, c_n)` of `Q_n(x; α, β, K | Q)`:
/// `a_n Q_{n+1} - (a_n + c_n - (1 - x)) Q_n + c_n Q_{n-1} = 0`.
fn qhahn_ac(n: u64, alpha: &Rational, beta: &Rational, big_k: u64, big_q: &Rational) -> (Rational, Rational) {
    let (ni, ki) = (n as i64, big_k as i64);
    let one = Rational::one();
    let ab = alpha * beta;
    let a = (&one - powi(big_q, ni - ki)) * (&one - alpha * powi(big_q, ni + 1)) * (&one - &ab * powi(big_q, ni + 1))
        / ((&one - &ab * powi(big_q, 2 * ni + 1)) * (&one - &ab * powi(big_q, 2 * ni + 2)));
    let c = -(alpha * powi(big_q, ni - ki))
        * (&one - powi(big_q, ni))
        * (&one - &ab * powi(big_q, ni + ki + 1))
        * (&one - beta * powi(big_q, ni))
        / ((&one - &ab * powi(big_q, 2 * ni)) * (&one - &ab * powi(big_q, 2 * ni + 1)));
    (a, c)
}

/// `A_n M_{n+1} + B_n M_n - C_n M_{n-1}` for the q-Hahn randomised moments,
/// with `A_n = a_n`, `B_n = ((1-λ) - a_n - c_n) P_{n+1}/P_n`,
/// `C_n = -c_n P_{n+1}/P_{n-1}` and `P_n` the q-Hahn prefactor.
pub fn qhahn_recurrence_residual(n: u64, big_k: u64, q: &Rational) -> QResult<Rational> {
    check_base(q)?;
    if n == 0 || n + 1 > big_k {
        return Err(QError::DegreeOutOfRange { degree: n + 1, limit: big_k });
    }
    let q2 = q * q;
    let lambda = powi(q, -2 * big_k as i64 - 2);
    let (a, c) = qhahn_ac(n, &int(-1), &int(1), big_k, &q2);
    let p = |m| qhahn_prefactor(m, big_k, q);
    let (p_next, p_cur, p_prev) = (p(n + 1)?, p(n)?, p(n - 1)?);
    let big_b = (Rational::one() - &lambda - &a - &c) * &p_next / p_cur;
    let big_c = -(&c * &p_next / p_prev);
    let m = |d| m_qh_randomized_qhahn(d, big_k, q);
    Ok(&a * m(n + 1)? + big_b * m(n)? - big_c * m(n - 1)?)
}

/// `S_0 + res_top`, with `res_top` from its product formula; zero by the
/// q-Saalschütz summation.
pub fn saalschutz_residual(k: u64, q: &Rational) -> QResult<Rational> {
    require_order(k)?;
    check_base(q)?;
    Ok(s_term(k, 0, q)? + residue_top(k, q))
}

/// `|Σ_{N<=N_max} N M(k,N) λ^{N-1} (1-λ)² - closed form|`, with the
/// certified bound on the dropped terms as the bound. Needs
/// `0 <= λ < q^{2k}`.
pub fn randomized_series_residual(k: u64, lambda: &Rational, q: &Rational, n_max: u64) -> QResult<ApproxValue> {
    require_order(k)?;
    check_base(q)?;
    let ki = k as i64;
    let one = Rational::one();
    let ratio = lambda * powi(q, -2 * ki);
    if lambda.is_negative() || ratio >= one {
        return Err(QError::Divergent("the randomised series needs 0 <= λ < q^{2k}".into()));
    }
    let closed = m_qh_randomized(k, lambda, q)?;
    let w = (&one - lambda) * (&one - lambda);
    let mut partial = Rational::zero();
    for n in 1..=n_max {
        partial += int(n as i64) * m_qh_hyper(k, n, q)? * powi(lambda, n as i64 - 1) * &w;
    }

    // |N M(k,N)| <= D_k (B_S + q^{-2Nk} |S_0|), B_S bounding every |S_N|
    let q2 = q * q;
    let pref = (powi(q, ki) * q_pochhammer(&-q2.clone(), &q2, k)
        / ((powi(q, 2 * ki) - &one) * q_pochhammer(&q2, &q2, k)))
    .abs();
    let up = [-powi(q, 2 * ki + 2), powi(q, 2 * ki), powi(q, -2 * ki)];
    let lo = [-q2.clone(), powi(q, 2 * ki + 2)];
    let mut b_s = Rational::zero();
    let mut t = one.clone();
    for i in 0..=ki {
        // terms of the 3φ2 at argument 1; |z^i| <= 1 for every z = q^{2N+2}
        b_s += t.abs();
        let mut f = one.clone();
        for a in &up {
            f *= &one - a * powi(&q2, i);
        }
        for b in &lo {
            f /= &one - b * powi(&q2, i);
        }
        t *= f / (&one - powi(&q2, i + 1));
    }
    let b_s = pref * b_s;
    let s0 = s_term(k, 0, q)?.abs();
    let d = moment_prefactor(k, q).abs();
    let lm = powi(lambda, n_max as i64);
    let tail = d * &w * (&b_s * &lm / (&one - lambda) + s0 * powi(q, -2 * ki * (n_max as i64 + 1)) * &lm / (&one - ratio));
    Ok(ApproxValue::new((partial - closed).abs(), tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn first_moment_at_one_particle_is_q() {
        for q in [rat(1, 2), rat(1, 3), rat(9, 10)] {
            assert_eq!(m_qh_residue(1, 1, &q).unwrap(), q);
            assert_eq!(m_qh_hyper(1, 1, &q).unwrap(), q);
        }
    }

    #[test]
    fn zero_order_is_rejected() {
        assert_eq!(m_qh_hyper(0, 1, &rat(1, 2)), Err(QError::InvalidOrder { got: 0, min: 1 }));
        assert!(m_qh_residue(0, 3, &rat(1, 2)).is_err());
        assert!(m_qh_genfunc_coeffs(0, &rat(1, 2), 4).is_err());
    }

    #[test]
    fn randomized_zero_order_and_closure() {
        let q = rat(1, 2);
        assert_eq!(m_qh_randomized(0, &rat(1, 3), &q).unwrap(), int(1));
        for k in 1..4 {
            assert_eq!(m_qh_randomized(k, &int(0), &q).unwrap(), m_qh_hyper(k, 1, &q).unwrap());
        }
        assert!(m_qh_randomized(1, &rat(3, 2), &q).is_err());
        assert!(matches!(m_qh_randomized(1, &rat(1, 4), &q), Err(QError::ZeroDenominator(_))));
    }

    #[test]
    fn generating_function_low_orders() {
        let q = rat(1, 2);
        let c = m_qh_genfunc_coeffs(1, &q, 3).unwrap();
        assert_eq!(c[0], int(0));
        assert_eq!(c[1], q);
    }

    #[test]
    fn qhahn_degree_zero() {
        assert_eq!(m_qh_randomized_qhahn(0, 4, &rat(1, 2)).unwrap(), int(1));
        assert!(matches!(m_qh_randomized_qhahn(5, 4, &rat(1, 2)), Err(QError::DegreeOutOfRange { .. })));
    }
}
