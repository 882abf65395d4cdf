//! q-derivative, Jackson integrals and truncated infinite q-Pochhammer
//! products, each carrying a certified rational error bound.
//!
//! Nothing here guesses a tail. Every truncated sum is paired with a
//! caller-supplied majorant (an [`Envelope`] on the integrand, or a raw
//! tail certificate for [`ladder_sum`]), and refuses to answer without one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{QError, QResult};
use crate::rational::{check_base, format_rational, int, powi, Rational};

/// How far truncated sums and products may run and how small their
/// certified error has to get before they stop early.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub tolerance: Rational,
    pub max_index: u64,
}

impl TruncationPolicy {
    pub fn new(tolerance: Rational, max_index: u64) -> QResult<Self> {
        if !tolerance.is_positive() {
            return Err(QError::InvalidParameter("tolerance must be positive".into()));
        }
        if max_index == 0 {
            return Err(QError::InvalidParameter("max_index must be positive".into()));
        }
        Ok(TruncationPolicy { tolerance, max_index })
    }

    pub fn with_tolerance(&self, tolerance: Rational) -> QResult<Self> {
        Self::new(tolerance, self.max_index)
    }
}

impl Default for TruncationPolicy {
    /// Tolerance `10^-30`, at most 4096 terms.
    fn default() -> Self {
        TruncationPolicy {
            tolerance: powi(&Rational::from_integer(10.into()), -30),
            max_index: 4096,
        }
    }
}

/// A rational approximation together with an absolute error bound: the true
/// value lies in `[value - bound, value + bound]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxValue {
    pub value: Rational,
    pub bound: Rational,
}

impl ApproxValue {
    pub fn new(value: Rational, bound: Rational) -> Self {
        debug_assert!(!bound.is_negative());
        ApproxValue { value, bound }
    }

    pub fn exact(value: Rational) -> Self {
        ApproxValue { value, bound: Rational::zero() }
    }

    pub fn is_exact(&self) -> bool {
        self.bound.is_zero()
    }

    pub fn lower(&self) -> Rational {
        &self.value - &self.bound
    }

    pub fn upper(&self) -> Rational {
        &self.value + &self.bound
    }

    /// Whether `x` lies inside the certified interval.
    pub fn contains(&self, x: &Rational) -> bool {
        (&self.value - x).abs() <= self.bound
    }

    /// Whether the two intervals intersect, i.e. the values agree within
    /// the sum of their bounds.
    pub fn overlaps(&self, other: &ApproxValue) -> bool {
        (&self.value - &other.value).abs() <= &self.bound + &other.bound
    }

    pub fn scale(&self, c: &Rational) -> ApproxValue {
        ApproxValue::new(&self.value * c, &self.bound * c.abs())
    }

    /// `1/x`, defined when the interval excludes zero.
    pub fn recip(&self) -> QResult<ApproxValue> {
        let m = self.value.abs();
        if m <= self.bound {
            return Err(QError::ZeroDenominator(
                "reciprocal of an interval containing zero".into(),
            ));
        }
        // |1/v - 1/x| <= b / (|v| (|v| - b)) for |x - v| <= b
        let bound = &self.bound / (&m * (&m - &self.bound));
        Ok(ApproxValue::new(self.value.recip(), bound))
    }

    pub fn div(&self, other: &ApproxValue) -> QResult<ApproxValue> {
        Ok(self * &other.recip()?)
    }
}

impl fmt::Display for ApproxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", format_rational(&self.value), format_rational(&self.bound))
    }
}

impl Add for &ApproxValue {
    type Output = ApproxValue;
    fn add(self, o: &ApproxValue) -> ApproxValue {
        ApproxValue::new(&self.value + &o.value, &self.bound + &o.bound)
    }
}

impl Sub for &ApproxValue {
    type Output = ApproxValue;
    fn sub(self, o: &ApproxValue) -> ApproxValue {
        ApproxValue::new(&self.value - &o.value, &self.bound + &o.bound)
    }
}

impl Mul for &ApproxValue {
    type Output = ApproxValue;
    fn mul(self, o: &ApproxValue) -> ApproxValue {
        let bound = self.value.abs() * &o.bound + o.value.abs() * &self.bound + &self.bound * &o.bound;
        ApproxValue::new(&self.value * &o.value, bound)
    }
}

impl Neg for &ApproxValue {
    type Output = ApproxValue;
    fn neg(self) -> ApproxValue {
        ApproxValue::new(-&self.value, self.bound.clone())
    }
}

/// `D_q f(x) = (f(x) - f(qx)) / (x - qx)`.
pub fn q_derivative<F>(f: F, x: &Rational, q: &Rational) -> QResult<Rational>
where
    F: Fn(&Rational) -> Rational,
{
    if x.is_zero() {
        return Err(QError::ZeroPoint);
    }
    check_base(q)?;
    let qx = q * x;
    Ok((f(x) - f(&qx)) / (x - qx))
}

/// Majorant for an integrand on a one-sided geometric ladder of atoms
/// `x_n`, `n = 0, 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Envelope {
    /// `|f(x_n)| <= bound` for every `n`.
    Bounded(Rational),
    /// `|f(x_n)| <= constant * ratio^n` for every `n`.
    Geometric { constant: Rational, ratio: Rational },
}

/// Envelopes for both ends of the bilateral ladder `q^n`, `n` in ℤ: one for
/// `n >= 0` (atoms shrinking to zero, indexed by `n`) and one for `n = -m`,
/// `m >= 1` (atoms growing without bound, indexed by `m`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilateralEnvelope {
    pub toward_zero: Envelope,
    pub toward_infinity: Envelope,
}

/// Sums `Σ_{n>=0} term(n)` until the certified tail drops below the
/// policy tolerance or `max_index` terms have been taken.
///
/// `term` is called for `n = 0, 1, 2, ...` in order, so it may carry
/// running products. `tail_after(j, term_j)` must return a bound on
/// `Σ_{n>j} |term(n)|`, or `None` when it cannot certify one yet.
pub fn ladder_sum<T, B>(mut term: T, tail_after: B, policy: &TruncationPolicy) -> QResult<ApproxValue>
where
    T: FnMut(u64) -> Rational,
    B: Fn(u64, &Rational) -> Option<Rational>,
{
    let mut sum = Rational::zero();
    let mut last_tail = None;
    for n in 0..policy.max_index {
        let t = term(n);
        sum += &t;
        last_tail = tail_after(n, &t);
        if let Some(b) = &last_tail {
            if b <= &policy.tolerance {
                break;
            }
        }
    }
    match last_tail {
        Some(b) => Ok(ApproxValue::new(sum, b)),
        None => Err(QError::TailNotBounded(format!(
            "no tail certificate after {} terms",
            policy.max_index
        ))),
    }
}

/// Bound on `Σ_{n>j} (1-q) a q^n |f(x_n)|` given an envelope on `f`.
fn one_sided_tail(env: &Envelope, scale: &Rational, q: &Rational, j: u64) -> Option<Rational> {
    let e = j as i64 + 1;
    match env {
        // Σ_{n>j} (1-q) scale q^n M = scale M q^{j+1}
        Envelope::Bounded(m) => Some(scale * m.abs() * powi(q, e)),
        Envelope::Geometric { constant, ratio } => {
            let qr = q * ratio.abs();
            if qr >= Rational::one() {
                return None;
            }
            let one_minus_q = Rational::one() - q;
            Some(one_minus_q * scale * constant.abs() * powi(&qr, e) / (Rational::one() - qr))
        }
    }
}

/// `∫_0^a f(x) d_q x = Σ_{n>=0} (1-q) a q^n f(a q^n)`, truncated against the
/// envelope of `|f|` on the atoms `a q^n`.
pub fn jackson_integral_0a<F>(
    f: F,
    a: &Rational,
    q: &Rational,
    policy: &TruncationPolicy,
    envelope: Option<&Envelope>,
) -> QResult<ApproxValue>
where
    F: Fn(&Rational) -> Rational,
{
    check_base(q)?;
    if !a.is_positive() {
        return Err(QError::InvalidParameter("upper limit a must be positive".into()));
    }
    let env = envelope.ok_or_else(|| QError::TailNotBounded("no envelope supplied".into()))?;
    let w0 = (Rational::one() - q) * a;
    let mut atom = a.clone();
    let mut w = w0;
    ladder_sum(
        |_| {
            let t = &w * f(&atom);
            atom *= q;
            w *= q;
            t
        },
        |j, _| one_sided_tail(env, a, q, j),
        policy,
    )
}

/// `∫_{-a}^a f(x) d_q x`, using the reflection convention
/// `∫_{-a}^0 f(x) d_q x = ∫_0^a f(-x) d_q x`. The envelope must bound `|f|`
/// on both `a q^n` and `-a q^n`.
pub fn jackson_integral_symmetric<F>(
    f: F,
    a: &Rational,
    q: &Rational,
    policy: &TruncationPolicy,
    envelope: Option<&Envelope>,
) -> QResult<ApproxValue>
where
    F: Fn(&Rational) -> Rational,
{
    check_base(q)?;
    if !a.is_positive() {
        return Err(QError::InvalidParameter("upper limit a must be positive".into()));
    }
    let env = envelope.ok_or_else(|| QError::TailNotBounded("no envelope supplied".into()))?;
    let mut atom = a.clone();
    let mut w = (Rational::one() - q) * a;
    // both halves share one truncation index, so odd integrands cancel
    // term by term and come out exactly zero
    let half = ladder_sum(
        |_| {
            let t = &w * (f(&atom) + f(&-&atom));
            atom *= q;
            w *= q;
            t
        },
        |j, _| one_sided_tail(env, a, q, j).map(|b| b * int(2)),
        policy,
    )?;
    Ok(half)
}

/// `∫_0^∞ f(x) d_q x = Σ_{n∈ℤ} (1-q) q^n f(q^n)`, truncated in both
/// directions against the two envelopes.
pub fn jackson_integral_improper<F>(
    f: F,
    q: &Rational,
    policy: &TruncationPolicy,
    envelope: Option<&BilateralEnvelope>,
) -> QResult<ApproxValue>
where
    F: Fn(&Rational) -> Rational,
{
    check_base(q)?;
    let env = envelope.ok_or_else(|| QError::TailNotBounded("no envelope supplied".into()))?;
    let one = Rational::one();
    let zero_side = jackson_integral_0a(&f, &one, q, policy, Some(&env.toward_zero))?;

    // n = -m, m >= 1: term (1-q) q^{-m} f(q^{-m}); with |f(q^{-m})| <= C r^m
    // the terms are dominated by (1-q) C (r/q)^m.
    let (c, r) = match &env.toward_infinity {
        Envelope::Geometric { constant, ratio } => (constant.abs(), ratio.abs()),
        Envelope::Bounded(_) => {
            return Err(QError::TailNotBounded(
                "a merely bounded integrand is not summable toward infinity".into(),
            ))
        }
    };
    let rho = &r / q;
    if rho >= one {
        return Err(QError::TailNotBounded(
            "integrand does not decay fast enough toward infinity".into(),
        ));
    }
    let qinv = q.recip();
    let mut atom = qinv.clone();
    let mut w = (&one - q) * &qinv;
    let inf_side = ladder_sum(
        |_| {
            let t = &w * f(&atom);
            atom *= &qinv;
            w *= &qinv;
            t
        },
        // term index j corresponds to m = j + 1
        |j, _| {
            let m_next = j as i64 + 2;
            Some((&one - q) * &c * powi(&rho, m_next) / (&one - &rho))
        },
        policy,
    )?;
    Ok(&zero_side + &inf_side)
}

/// `(a;q)_∞` truncated after the factor with index `j`.
///
/// The remaining product `R = Π_{i>j} (1 - a q^i)` satisfies
/// `|R - 1| <= s/(1-s)` with `s = |a| q^{j+1}/(1-q)` whenever `s < 1`.
pub fn infinite_qpoch_truncated(a: &Rational, q: &Rational, j: u64) -> QResult<ApproxValue> {
    check_base(q)?;
    let mut p = Rational::one();
    let mut t = a.clone();
    for _ in 0..=j {
        p *= Rational::one() - &t;
        t *= q;
    }
    if p.is_zero() {
        return Ok(ApproxValue::exact(p));
    }
    let s = a.abs() * powi(q, j as i64 + 1) / (Rational::one() - q);
    if s >= Rational::one() {
        return Err(QError::TailNotBounded(format!(
            "(a;q)_∞ tail after {j} factors is not yet contracting"
        )));
    }
    let bound = p.abs() * &s / (Rational::one() - &s);
    Ok(ApproxValue::new(p, bound))
}

/// `(a;q)_∞ = Π_{i>=0} (1 - a q^i)` with a certified multiplicative tail
/// bound, using the fewest factors that meet the policy tolerance.
///
/// Partial products are kept exact while they are small. Once the
/// denominator outgrows a working precision tied to the tolerance, the
/// product is rounded down onto a dyadic grid and the accumulated rounding
/// error joins the tail in the returned bound.
pub fn infinite_qpoch(a: &Rational, q: &Rational, policy: &TruncationPolicy) -> QResult<ApproxValue> {
    check_base(q)?;
    if a.is_zero() {
        return Ok(ApproxValue::exact(Rational::one()));
    }
    let one = Rational::one();
    let one_minus_q = &one - q;
    let tol_bits = (policy.tolerance.denom().bits() + 1).saturating_sub(policy.tolerance.numer().bits());
    let grid_bits = tol_bits + 64;
    let mut p = one.clone();
    let mut err = Rational::zero();
    let mut t = a.clone();
    let mut last: Option<ApproxValue> = None;
    for _ in 0..policy.max_index {
        let factor = &one - &t;
        err = round_up(&(&err * factor.abs()), grid_bits);
        p *= factor;
        t *= q;
        if p.is_zero() && err.is_zero() {
            return Ok(ApproxValue::exact(p));
        }
        if p.denom().bits() > 4 * grid_bits {
            let rounded = round_down(&p, grid_bits);
            err += &p - &rounded;
            p = rounded;
        }
        // t is now a q^{j+1}
        let s = t.abs() / &one_minus_q;
        if s < one {
            let tail = (p.abs() + &err) * &s / (&one - &s);
            let bound = round_up(&(tail + &err), grid_bits);
            let done = bound <= policy.tolerance;
            last = Some(ApproxValue::new(p.clone(), bound));
            if done {
                break;
            }
        }
    }
    last.ok_or_else(|| {
        QError::TailNotBounded(format!(
            "|a| q^max_index is not small enough to bound (a;q)_∞ within {} factors",
            policy.max_index
        ))
    })
}

fn grid(bits: u64) -> num_bigint::BigInt {
    num_bigint::BigInt::one() << bits
}

fn round_down(x: &Rational, bits: u64) -> Rational {
    let d = grid(bits);
    Rational::new((x * Rational::from_integer(d.clone())).floor().to_integer(), d)
}

fn round_up(x: &Rational, bits: u64) -> Rational {
    if x.denom().bits() <= bits + 1 {
        return x.clone();
    }
    let d = grid(bits);
    Rational::new((x * Rational::from_integer(d.clone())).ceil().to_integer(), d)
}
