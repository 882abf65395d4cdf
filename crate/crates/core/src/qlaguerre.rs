//! Moments of the discrete q-Laguerre ensemble with parameter `α ∈ ℕ`.
//!
//! `M_α(k, N)` is the `k`-th moment of the normalised one-point function.
//! The three finite-`N` routes (a terminating `3φ2`, the explicit hook sum,
//! and the Schur expansion through the partitions module) must agree
//! exactly. The negative-binomial randomisation `M_k(z)` is available both
//! as a convergent `2φ1` and as a Big q-Jacobi polynomial.

use num_traits::{One, Signed, Zero};

use crate::error::{QError, QResult};
use crate::hyper::{phi, phi_approx};
use crate::partitions::{power_sum_via_hooks, schur_expectation_qlag};
use crate::qarith::{q_factorial, q_integer, q_pochhammer};
use crate::qcalc::{ApproxValue, TruncationPolicy};
use crate::rational::{check_base, int, powi, Rational};

/// `α` and `q` of the ensemble.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QLagParams {
    pub alpha: u64,
    pub q: Rational,
}

impl QLagParams {
    pub fn new(alpha: u64, q: Rational) -> QResult<Self> {
        check_base(&q)?;
        Ok(QLagParams { alpha, q })
    }
}

fn require(k: u64, n: u64) -> QResult<()> {
    if k == 0 {
        return Err(QError::InvalidOrder { got: 0, min: 1 });
    }
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

/// ```text
/// M_α(k,N) = q^{k(2-2N-α)} / (N (1-q²)^k) · (q^{2N};q²)_k (q^{2N+2α};q²)_k / (q²;q²)_k
///          · 3φ2(q^{2-2k}, q^{2-2N}, q^{2-2N-2α}; q^{2-2N-2k}, q^{2-2N-2α-2k}; q², q^{-2k})
/// ```
///
/// The series stops at `min(k-1, N-1)`.
pub fn m_ql_hyper(k: u64, n: u64, p: &QLagParams) -> QResult<Rational> {
    require(k, n)?;
    let q = &p.q;
    let q2 = q * q;
    let (ki, ni, ai) = (k as i64, n as i64, p.alpha as i64);
    let pref = powi(q, ki * (2 - 2 * ni - ai))
        * q_pochhammer(&powi(&q2, ni), &q2, k)
        * q_pochhammer(&powi(&q2, ni + ai), &q2, k)
        / (int(ni) * powi(&(Rational::one() - &q2), ki) * q_pochhammer(&q2, &q2, k));
    let s = phi(
        &[powi(&q2, 1 - ki), powi(&q2, 1 - ni), powi(&q2, 1 - ni - ai)],
        &[powi(&q2, 1 - ni - ki), powi(&q2, 1 - ni - ai - ki)],
        &q2,
        &powi(q, -2 * ki),
    )?;
    Ok(pref * s)
}

/// The explicit alternating sum over hooks `l = 0..k-1`:
///
/// ```text
/// Σ_l (-1)^l q^{k(2-2N-α)+l(l+1)} (q^{2N-2l};q²)_k (q^{2N+2α-2l};q²)_k
///     / (N (1-q²)^k (1-q^{2k}) (q²;q²)_l (q²;q²)_{k-l-1})
/// ```
pub fn m_ql_hooksum(k: u64, n: u64, p: &QLagParams) -> QResult<Rational> {
    require(k, n)?;
    let q = &p.q;
    let q2 = q * q;
    let (ki, ni, ai) = (k as i64, n as i64, p.alpha as i64);
    let one = Rational::one();
    let mut sum = Rational::zero();
    for l in 0..ki {
        let sign = if l % 2 == 0 { one.clone() } else { -one.clone() };
        sum += sign * powi(q, l * (l + 1)) * q_pochhammer(&powi(&q2, ni - l), &q2, k)
            * q_pochhammer(&powi(&q2, ni + ai - l), &q2, k)
            / (q_pochhammer(&q2, &q2, l as u64) * q_pochhammer(&q2, &q2, (ki - l - 1) as u64));
    }
    let pref = powi(q, ki * (2 - 2 * ni - ai))
        / (int(ni) * powi(&(&one - &q2), ki) * (&one - powi(&q2, ki)));
    Ok(pref * sum)
}

/// `(1/N) Σ_l (-1)^l E[s_{(k-l,1^l)}]` with the Schur expectations computed
/// from hooks and contents.
pub fn m_ql_schur(k: u64, n: u64, p: &QLagParams) -> QResult<Rational> {
    require(k, n)?;
    let k32 = u32::try_from(k)
        .ok()
        .filter(|&k| k <= crate::partitions::MAX_SIZE)
        .ok_or_else(|| QError::InvalidParameter(format!("k = {k} exceeds the partition size limit")))?;
    let total = power_sum_via_hooks(k32, |lambda| schur_expectation_qlag(lambda, n, p.alpha, &p.q));
    Ok(total / int(n as i64))
}

/// `[k+α]_{q²}! / [α]_{q²}! · q^{-αk}`, which is also `M_α(k, 1)`.
fn base_factor(k: u64, p: &QLagParams) -> Rational {
    let q2 = &p.q * &p.q;
    q_factorial(k + p.alpha, &q2) / q_factorial(p.alpha, &q2) * powi(&p.q, -((p.alpha * k) as i64))
}

/// `(z; q^{-2})_k = Π_{j<k} (1 - z q^{-2j})`.
fn z_poch_down(z: &Rational, q2: &Rational, k: u64) -> Rational {
    q_pochhammer(z, &q2.recip(), k)
}

fn check_z_domain(k: u64, z: &Rational, q: &Rational) -> QResult<()> {
    if z.is_negative() {
        return Err(QError::InvalidParameter("z must be nonnegative".into()));
    }
    if z >= &powi(q, 2 * k as i64) {
        return Err(QError::Divergent("the randomised moment series needs z < q^{2k}".into()));
    }
    Ok(())
}

/// `Σ_N M_α(k,N) N z^{N-1} (1-z)²` through
///
/// ```text
/// [k+α]_{q²}!/[α]_{q²}! (z;q^{-2})_k q^{-αk} (1-z)
///     · 2φ1(q^{2k+2}, q^{2k+2+2α}; q^{2α+2}; q², z q^{-2k})
/// ```
///
/// for `0 <= z < q^{2k}`, summed with a certified tail.
pub fn m_ql_randomized_hyper(k: u64, z: &Rational, p: &QLagParams, policy: &TruncationPolicy) -> QResult<ApproxValue> {
    require(k, 1)?;
    check_z_domain(k, z, &p.q)?;
    let q2 = &p.q * &p.q;
    let (ki, ai) = (k as i64, p.alpha as i64);
    let pref = base_factor(k, p) * z_poch_down(z, &q2, k) * (Rational::one() - z);
    let s = phi_approx(
        &[powi(&q2, ki + 1), powi(&q2, ki + 1 + ai)],
        &[powi(&q2, ai + 1)],
        &q2,
        &(z * powi(&p.q, -2 * ki)),
        policy,
    )?;
    Ok(s.scale(&pref))
}

/// `B_k(0; q^{2α}, q^{-2α}, 1/z; q²) = 3φ2(q^{-2k}, q^{2k+2}, 0; q^{2α+2}, q²/z; q², q²)`.
pub fn big_q_jacobi_at_origin(k: u64, z: &Rational, p: &QLagParams) -> QResult<Rational> {
    if z.is_zero() {
        return Err(QError::ZeroDenominator("c = 1/z needs z != 0".into()));
    }
    let q2 = &p.q * &p.q;
    let a = powi(&q2, p.alpha as i64);
    crate::ensembles::big_q_jacobi(k, &Rational::zero(), &a, &a.recip(), &z.recip(), &q2)
}

/// The randomised moment as a Big q-Jacobi polynomial,
///
/// ```text
/// [k+α]!/[α]! · (z;q^{-2})_k / (zq²;q²)_k · q^{-αk} · B_k(0; q^{2α}, q^{-2α}, 1/z; q²),
/// ```
///
/// with `(z;q^{-2})_k` folded into each term of the `3φ2` so that the
/// removable singularities at `z = q^{2j}` (`j < k`) and at `z = 0` are
/// evaluated exactly. The remaining poles (`z = q^{2k}` and zeros of
/// `(zq²;q²)_k`) give `ZeroDenominator`.
pub fn m_ql_randomized_bigqjacobi(k: u64, z: &Rational, p: &QLagParams) -> QResult<Rational> {
    let (pref, regular, top) = folded_terms(k, z, p)?;
    if top.is_zero() {
        return Ok(pref * regular);
    }
    let q2 = &p.q * &p.q;
    let pole = nonzero(z - powi(&q2, k as i64), "z = q^{2k} is a pole")?;
    Ok(pref * (regular + top * z / pole))
}

/// `(z - q^{2k}) M_k(z)`, finite at the pole `z = q^{2k}`.
fn randomized_times_pole(k: u64, z: &Rational, p: &QLagParams) -> QResult<Rational> {
    let (pref, regular, top) = folded_terms(k, z, p)?;
    let q2 = &p.q * &p.q;
    Ok(pref * (regular * (z - powi(&q2, k as i64)) + top * z))
}

/// `M_k(z) = pref · (regular + top · z/(z - q^{2k}))`, with the removable
/// factors of `(z;q^{-2})_k` already cancelled.
fn folded_terms(k: u64, z: &Rational, p: &QLagParams) -> QResult<(Rational, Rational, Rational)> {
    let q2 = &p.q * &p.q;
    let (ki, ai) = (k as i64, p.alpha as i64);
    let one = Rational::one();
    let den = nonzero(q_pochhammer(&(z * &q2), &q2, k), "(zq²;q²)_k vanishes")?;
    let mut regular = Rational::zero();
    let mut top = Rational::zero();
    // t_i: the z-free part of the i-th term
    let mut t = one.clone();
    for i in 0..=ki {
        // (z;q^{-2})_k / (q²/z;q²)_i · z^i, factor by factor:
        //   j <= min(i, k-1), j >= 1:  (1 - z q^{-2j}) / (1 - q^{2j}/z) → -z q^{-2j}
        //   j = k <= i:                z / (z - q^{2k}), kept apart
        //   otherwise:                 (1 - z q^{-2j})
        let mut f = one.clone();
        for j in 0..ki {
            if j >= 1 && j <= i {
                f *= -(z * powi(&q2, -j));
            } else {
                f *= &one - z * powi(&q2, -j);
            }
        }
        if i == ki && ki >= 1 {
            top = &t * f;
        } else {
            regular += &t * f;
        }
        t *= (&one - powi(&q2, i - ki)) * (&one - powi(&q2, i + ki + 1)) * &q2
            / ((&one - powi(&q2, i + ai + 1)) * (&one - powi(&q2, i + 1)));
    }
    Ok((base_factor(k, p) / den, regular, top))
}

/// The same quantity in the literal form prefactor × polynomial; only
/// defined away from `z = 0` and `z = q^{2j}`.
pub fn m_ql_randomized_bigqjacobi_literal(k: u64, z: &Rational, p: &QLagParams) -> QResult<Rational> {
    let q2 = &p.q * &p.q;
    let den = nonzero(q_pochhammer(&(z * &q2), &q2, k), "(zq²;q²)_k vanishes")?;
    Ok(base_factor(k, p) * z_poch_down(z, &q2, k) / den * big_q_jacobi_at_origin(k, z, p)?)
}

/// Coefficients `(a_k, c_k)` of the Big q-Jacobi recurrence
/// `(x-1) B_k = a_k B_{k+1} - (a_k + c_k) B_k + c_k B_{k-1}`.
fn big_q_jacobi_ac(k: u64, a: &Rational, b: &Rational, c: &Rational, big_q: &Rational) -> (Rational, Rational) {
    let ki = k as i64;
    let one = Rational::one();
    let ab = a * b;
    let ak = (&one - a * powi(big_q, ki + 1)) * (&one - &ab * powi(big_q, ki + 1)) * (&one - c * powi(big_q, ki + 1))
        / ((&one - &ab * powi(big_q, 2 * ki + 1)) * (&one - &ab * powi(big_q, 2 * ki + 2)));
    let ck = -(a * c * powi(big_q, ki + 1))
        * (&one - powi(big_q, ki))
        * (&one - &ab / c * powi(big_q, ki))
        * (&one - b * powi(big_q, ki))
        / ((&one - &ab * powi(big_q, 2 * ki)) * (&one - &ab * powi(big_q, 2 * ki + 1)));
    (ak, ck)
}

/// `A_k M_{k+1} + D_k M_k - C_k M_{k-1}` with `M_0 = 1`, where at `x = 0`
/// `A_k = a_k`, `D_k = (1 - a_k - c_k) P_{k+1}/P_k`,
/// `C_k = -c_k P_{k+1}/P_{k-1}` and `P_k` is the Big q-Jacobi prefactor.
///
/// `a_k` carries the factor `1 - q^{2k+2}/z` and `P_{k+1}/P_k` the factor
/// `1 - z q^{-2k}`; each is cancelled against the pole of `M_{k+1}` and
/// `M_k` respectively, so the residual is exact at `z = q^{2k}` and
/// `z = q^{2k+2}` as well.
pub fn bigqjacobi_recurrence_residual(k: u64, z: &Rational, p: &QLagParams) -> QResult<Rational> {
    require(k, 1)?;
    if z.is_zero() {
        return Err(QError::ZeroDenominator("c = 1/z needs z != 0".into()));
    }
    let q2 = &p.q * &p.q;
    let (ki, ai) = (k as i64, p.alpha as i64);
    let one = Rational::one();
    let a = powi(&q2, ai);
    let (ak, ck) = big_q_jacobi_ac(k, &a, &a.recip(), &z.recip(), &q2);
    // a_k / (z - q^{2k+2}); here ab = q^{2α} q^{-2α} = 1
    let ab = &one;
    let ak_over_pole = (&one - &a * powi(&q2, ki + 1)) * (&one - ab * powi(&q2, ki + 1))
        / (z * (&one - ab * powi(&q2, 2 * ki + 1)) * (&one - ab * powi(&q2, 2 * ki + 2)));
    let qa = powi(&p.q, -ai);
    let next_den = nonzero(&one - z * powi(&q2, ki + 1), "(zq²;q²)_{k+1} vanishes")?;
    // P_{k+1}/P_k, and the same divided by (z - q^{2k})
    let r1 = q_integer(ki + ai + 1, &q2) * (&one - z * powi(&q2, -ki)) / &next_den * &qa;
    let r1_over_pole = -(q_integer(ki + ai + 1, &q2) * powi(&q2, -ki)) / &next_den * &qa;
    let r0 = q_integer(ki + ai, &q2) * (&one - z * powi(&q2, 1 - ki))
        / nonzero(&one - z * powi(&q2, ki), "(zq²;q²)_k vanishes")?
        * &qa;
    let d_over_pole = (&one - &ak - &ck) * r1_over_pole;
    let c = -(&ck * &r1 * r0);
    Ok(ak_over_pole * randomized_times_pole(k + 1, z, p)? + d_over_pole * randomized_times_pole(k, z, p)?
        - c * m_ql_randomized_bigqjacobi(k - 1, z, p)?)
}

/// `|Σ_{N<=N_max} N M_α(k,N) z^{N-1}(1-z)² - M_k(z)|` against the Big
/// q-Jacobi closed form, with the certified bound on the dropped terms.
///
/// Every `|N M_α(k,N)|` is at most `G q^{-2kN}` with
/// `G = q^{k(2-α)} / ((1-q²)^k (1-q^{2k})) Σ_l q^{l(l+1)} / ((q²;q²)_l (q²;q²)_{k-l-1})`,
/// because each shifted Pochhammer in the hook sum is either 0 or a product
/// of factors in `(0, 1)`.
pub fn randomized_series_residual(k: u64, z: &Rational, p: &QLagParams, n_max: u64) -> QResult<ApproxValue> {
    require(k, 1)?;
    check_z_domain(k, z, &p.q)?;
    let one = Rational::one();
    let q = &p.q;
    let q2 = q * q;
    let ki = k as i64;
    let w = (&one - z) * (&one - z);
    let mut partial = Rational::zero();
    for n in 1..=n_max {
        partial += int(n as i64) * m_ql_hyper(k, n, p)? * powi(z, n as i64 - 1) * &w;
    }
    if z.is_zero() {
        // only N = 1 survives on either side
        let closed = m_ql_randomized_bigqjacobi(k, z, p)?;
        return Ok(ApproxValue::exact((partial - closed).abs()));
    }
    let closed = m_ql_randomized_bigqjacobi(k, z, p)?;
    let mut g = Rational::zero();
    for l in 0..ki {
        g += powi(q, l * (l + 1)) / (q_pochhammer(&q2, &q2, l as u64) * q_pochhammer(&q2, &q2, (ki - l - 1) as u64));
    }
    g *= powi(q, ki * (2 - p.alpha as i64)) / (powi(&(&one - &q2), ki) * (&one - powi(&q2, ki)));
    let ratio = z * powi(q, -2 * ki);
    let tail = g * w * powi(q, -2 * ki * (n_max as i64 + 1)) * powi(z, n_max as i64) / (&one - ratio);
    Ok(ApproxValue::new((partial - closed).abs(), tail))
}
