//! Classical `pFs` and basic `pφs` hypergeometric series.
//!
//! Terminating series are summed exactly. Non-terminating basic series can be
//! summed in approximate mode, which stops only once a rigorous majorant of
//! all remaining term ratios certifies the tail.
//!
//! The basic series follows the Gasper–Rahman normalisation:
//!
//! ```text
//! Σ_i (a_1..a_r; q)_i / (q, b_1..b_s; q)_i · ((-1)^i q^{i(i-1)/2})^{1+s-r} z^i
//! ```

use num_traits::{One, Signed, Zero};

use crate::error::{QError, QResult};
use crate::qarith::q_pochhammer;
use crate::qcalc::{infinite_qpoch, ApproxValue, TruncationPolicy};
use crate::rational::{check_base, powi, rat, Rational};

/// Largest `n` for which an upper parameter `q^{-n}` (or `-n`) is
/// recognised as terminating.
pub const DEFAULT_TERMINATION_BOUND: u64 = 512;

/// Consecutive small ratios required before a tail certificate is attempted.
const RATIO_STREAK: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesKind {
    Classical,
    Basic { q: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalMode {
    ExactTerminating,
    Approximate(TruncationPolicy),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperSeries {
    pub kind: SeriesKind,
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub argument: Rational,
    pub mode: EvalMode,
    pub termination_bound: u64,
}

impl HyperSeries {
    /// A basic series in exact-terminating mode.
    pub fn basic(upper: Vec<Rational>, lower: Vec<Rational>, q: Rational, z: Rational) -> Self {
        HyperSeries {
            kind: SeriesKind::Basic { q },
            upper,
            lower,
            argument: z,
            mode: EvalMode::ExactTerminating,
            termination_bound: DEFAULT_TERMINATION_BOUND,
        }
    }

    /// A classical series (always exact-terminating).
    pub fn classical(upper: Vec<Rational>, lower: Vec<Rational>, z: Rational) -> Self {
        HyperSeries {
            kind: SeriesKind::Classical,
            upper,
            lower,
            argument: z,
            mode: EvalMode::ExactTerminating,
            termination_bound: DEFAULT_TERMINATION_BOUND,
        }
    }

    pub fn approximate(mut self, policy: TruncationPolicy) -> Self {
        self.mode = EvalMode::Approximate(policy);
        self
    }
}

/// Result of [`eval_phi`]: exact in terminating mode, certified otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesValue {
    Exact(Rational),
    Approx(ApproxValue),
}

impl SeriesValue {
    pub fn into_approx(self) -> ApproxValue {
        match self {
            SeriesValue::Exact(v) => ApproxValue::exact(v),
            SeriesValue::Approx(a) => a,
        }
    }

    pub fn exact(self) -> Option<Rational> {
        match self {
            SeriesValue::Exact(v) => Some(v),
            SeriesValue::Approx(a) if a.is_exact() => Some(a.value),
            SeriesValue::Approx(_) => None,
        }
    }
}

/// If `a = q^{-n}` exactly for some `0 <= n <= bound`, returns `n`.
///
/// With `q = u/v` in lowest terms, `q^{-n} = v^n/u^n` is again in lowest
/// terms, so it suffices to compare numerator and denominator against
/// successive powers; the loop stops as soon as `v^n` overshoots.
pub fn qpow_neg_index(a: &Rational, q: &Rational, bound: u64) -> Option<u64> {
    if a.is_one() {
        return Some(0);
    }
    if !a.is_positive() || !q.is_positive() {
        return None;
    }
    let (u, v) = (q.numer(), q.denom());
    let mut pu = u.clone();
    let mut pv = v.clone();
    for n in 1..=bound {
        if &pv > a.numer() {
            return None;
        }
        if &pv == a.numer() && &pu == a.denom() {
            return Some(n);
        }
        pu *= u;
        pv *= v;
    }
    None
}

/// If `a = -n` for some integer `0 <= n <= bound`, returns `n`.
fn neg_int_index(a: &Rational, bound: u64) -> Option<u64> {
    if !a.is_integer() || a.is_positive() {
        return None;
    }
    let n: u64 = (-a.to_integer()).try_into().ok()?;
    (n <= bound).then_some(n)
}

fn termination_index(upper: &[Rational], idx: impl Fn(&Rational) -> Option<u64>) -> Option<u64> {
    upper.iter().filter_map(idx).min()
}

/// Rejects lower parameters whose Pochhammer vanishes strictly before the
/// termination index `n`.
fn check_lower(lower: &[Rational], n: u64, idx: impl Fn(&Rational) -> Option<u64>) -> QResult<()> {
    for b in lower {
        if let Some(m) = idx(b) {
            if m < n {
                return Err(QError::ZeroDenominator(format!(
                    "lower parameter vanishes at index {m}, before termination at {n}"
                )));
            }
        }
    }
    Ok(())
}

/// Exponent `1 + s - r` of the `(-1)^i q^{i(i-1)/2}` factor.
fn excess(r: usize, s: usize) -> i64 {
    1 + s as i64 - r as i64
}

/// `t_{i+1}/t_i` for the basic series, given `qi = q^i`.
fn basic_ratio(up: &[Rational], lo: &[Rational], q: &Rational, z: &Rational, e: i64, qi: &Rational) -> QResult<Rational> {
    let one = Rational::one();
    let mut num = z.clone();
    for a in up {
        num *= &one - a * qi;
    }
    let mut den = &one - qi * q;
    for b in lo {
        den *= &one - b * qi;
    }
    if den.is_zero() {
        return Err(QError::ZeroDenominator("lower Pochhammer factor vanishes".into()));
    }
    if e != 0 {
        num *= powi(&-qi.clone(), e);
    }
    Ok(num / den)
}

/// A bound, valid for every `j >= I`, on `|t_{j+1}/t_j|`, where `qi = q^I`.
///
/// Uses `|1 - a q^j| <= 1 + |a| q^I`, `|1 - b q^j| >= 1 - |b| q^I`,
/// `1/(1 - q^{j+1}) <= 1/(1 - q^{I+1})` and `q^{je} <= q^{Ie}` for `e >= 0`.
fn ratio_majorant(up: &[Rational], lo: &[Rational], q: &Rational, z: &Rational, e: i64, qi: &Rational) -> Option<Rational> {
    if e < 0 {
        return None;
    }
    let one = Rational::one();
    let mut num = z.abs() * powi(qi, e);
    for a in up {
        num *= &one + a.abs() * qi;
    }
    let mut den = &one - qi * q;
    for b in lo {
        let f = &one - b.abs() * qi;
        if !f.is_positive() {
            return None;
        }
        den *= f;
    }
    Some(num / den)
}

fn basic_q(spec: &HyperSeries) -> QResult<&Rational> {
    match &spec.kind {
        SeriesKind::Basic { q } => {
            check_base(q)?;
            Ok(q)
        }
        SeriesKind::Classical => Err(QError::InvalidParameter(
            "expected a basic series, got a classical one".into(),
        )),
    }
}

/// Exact sum of the first `n + 1` terms of a basic series.
fn basic_partial_sum(up: &[Rational], lo: &[Rational], q: &Rational, z: &Rational, n: u64) -> QResult<Rational> {
    let e = excess(up.len(), lo.len());
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut qi = Rational::one();
    for _ in 0..n {
        term *= basic_ratio(up, lo, q, z, e, &qi)?;
        if term.is_zero() {
            break;
        }
        sum += &term;
        qi *= q;
    }
    Ok(sum)
}

/// Evaluates a basic series according to its mode.
pub fn eval_phi(spec: &HyperSeries) -> QResult<SeriesValue> {
    let q = basic_q(spec)?;
    let bound = spec.termination_bound;
    let idx = |a: &Rational| qpow_neg_index(a, q, bound);
    let (up, lo, z) = (&spec.upper, &spec.lower, &spec.argument);

    if let Some(n) = termination_index(up, idx) {
        check_lower(lo, n, idx)?;
        return Ok(SeriesValue::Exact(basic_partial_sum(up, lo, q, z, n)?));
    }
    match &spec.mode {
        EvalMode::ExactTerminating => {
            if z.is_zero() {
                Ok(SeriesValue::Exact(Rational::one()))
            } else {
                Err(QError::NonTerminating)
            }
        }
        EvalMode::Approximate(policy) => approx_basic(up, lo, q, z, policy).map(SeriesValue::Approx),
    }
}

/// Convenience wrapper: exact value of a terminating basic series.
pub fn phi(upper: &[Rational], lower: &[Rational], q: &Rational, z: &Rational) -> QResult<Rational> {
    let spec = HyperSeries::basic(upper.to_vec(), lower.to_vec(), q.clone(), z.clone());
    Ok(eval_phi(&spec)?.exact().expect("exact mode yields exact values"))
}

/// Convenience wrapper: approximate-mode evaluation of a basic series.
pub fn phi_approx(
    upper: &[Rational],
    lower: &[Rational],
    q: &Rational,
    z: &Rational,
    policy: &TruncationPolicy,
) -> QResult<ApproxValue> {
    let spec = HyperSeries::basic(upper.to_vec(), lower.to_vec(), q.clone(), z.clone()).approximate(policy.clone());
    Ok(eval_phi(&spec)?.into_approx())
}

fn approx_basic(
    up: &[Rational],
    lo: &[Rational],
    q: &Rational,
    z: &Rational,
    policy: &TruncationPolicy,
) -> QResult<ApproxValue> {
    if z.is_zero() {
        return Ok(ApproxValue::exact(Rational::one()));
    }
    let e = excess(up.len(), lo.len());
    let one = Rational::one();
    if e < 0 {
        return Err(QError::Divergent("r > s + 1 with nonzero argument".into()));
    }
    if e == 0 && z.abs() >= one {
        return Err(QError::Divergent("term ratio tends to |z| >= 1".into()));
    }
    // observed-ratio guard; clamped below 1 so it stays meaningful near |z| = 1
    let za = z.abs();
    let guard = {
        let loose = &za * rat(9, 8);
        let mid = (&one + &za) / rat(2, 1);
        let g = if loose < mid { loose } else { mid };
        if g < rat(1, 2) { rat(1, 2) } else { g }
    };

    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut qi = Rational::one();
    let mut streak = 0u32;
    let mut best: Option<ApproxValue> = None;
    for i in 0..policy.max_index {
        sum += &term;
        let r = basic_ratio(up, lo, q, z, e, &qi)?;
        let next = &term * &r;
        qi *= q;
        if next.is_zero() {
            return Ok(ApproxValue::exact(sum));
        }
        if r.abs() < guard {
            streak += 1;
        } else {
            streak = 0;
        }
        if streak >= RATIO_STREAK || i + 1 == policy.max_index {
            // qi = q^{i+1}: majorant for every ratio from index i+1 on
            if let Some(rho) = ratio_majorant(up, lo, q, z, e, &qi) {
                if rho < one {
                    let tail = next.abs() / (&one - rho);
                    let done = tail <= policy.tolerance;
                    best = Some(ApproxValue::new(sum.clone(), tail));
                    if done {
                        break;
                    }
                }
            }
        }
        term = next;
    }
    best.ok_or_else(|| QError::Divergent(format!("no contracting tail within {} terms", policy.max_index)))
}

/// The first `order` terms of a basic series plus a certified bound on the
/// rest. Terminating series are summed exactly when they end within `order`.
pub fn phi_truncated(
    upper: &[Rational],
    lower: &[Rational],
    q: &Rational,
    z: &Rational,
    order: u64,
) -> QResult<ApproxValue> {
    check_base(q)?;
    let idx = |a: &Rational| qpow_neg_index(a, q, DEFAULT_TERMINATION_BOUND);
    if let Some(n) = termination_index(upper, idx) {
        if n < order {
            check_lower(lower, n, idx)?;
            return Ok(ApproxValue::exact(basic_partial_sum(upper, lower, q, z, n)?));
        }
    }
    let e = excess(upper.len(), lower.len());
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut qi = Rational::one();
    for _ in 0..order {
        sum += &term;
        term *= basic_ratio(upper, lower, q, z, e, &qi)?;
        qi *= q;
    }
    if term.is_zero() {
        return Ok(ApproxValue::exact(sum));
    }
    match ratio_majorant(upper, lower, q, z, e, &qi) {
        Some(rho) if rho < Rational::one() => {
            let tail = term.abs() / (Rational::one() - rho);
            Ok(ApproxValue::new(sum, tail))
        }
        _ => Err(QError::Divergent(format!("tail after {order} terms is not contracting"))),
    }
}

/// Evaluates a terminating classical series exactly.
pub fn eval_f(spec: &HyperSeries) -> QResult<Rational> {
    if spec.kind != SeriesKind::Classical {
        return Err(QError::InvalidParameter("expected a classical series".into()));
    }
    let bound = spec.termination_bound;
    let idx = |a: &Rational| neg_int_index(a, bound);
    let n = termination_index(&spec.upper, idx).ok_or(QError::NonTerminating)?;
    check_lower(&spec.lower, n, idx)?;
    let z = &spec.argument;
    let mut sum = Rational::one();
    let mut term = Rational::one();
    for i in 0..n {
        let ii = Rational::from_integer(i.into());
        let mut num = z.clone();
        for a in &spec.upper {
            num *= a + &ii;
        }
        let mut den = &ii + Rational::one();
        for b in &spec.lower {
            den *= b + &ii;
        }
        if den.is_zero() {
            return Err(QError::ZeroDenominator("lower Pochhammer factor vanishes".into()));
        }
        term *= num / den;
        if term.is_zero() {
            break;
        }
        sum += &term;
    }
    Ok(sum)
}

/// Convenience wrapper for [`eval_f`].
pub fn hyp_f(upper: &[Rational], lower: &[Rational], z: &Rational) -> QResult<Rational> {
    eval_f(&HyperSeries::classical(upper.to_vec(), lower.to_vec(), z.clone()))
}

/// Residual of Heine's transformation
///
/// ```text
/// 2φ1(a, b; c; q, z) = (abz/c; q)_∞ / (z; q)_∞ · 2φ1(c/a, c/b; c; q, abz/c)
/// ```
///
/// with both series cut after `order` terms. The returned value is
/// `LHS - RHS`; its bound collects every truncation error, so a correct
/// identity has `|value| <= bound`.
pub fn heine_transform_residual(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    q: &Rational,
    z: &Rational,
    order: u64,
) -> QResult<ApproxValue> {
    check_base(q)?;
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(QError::InvalidParameter("a, b and c must be nonzero".into()));
    }
    let one = Rational::one();
    let w = a * b * z / c;
    if z.abs() >= one || w.abs() >= one {
        return Err(QError::Divergent("Heine needs |z| < 1 and |abz/c| < 1".into()));
    }
    let policy = TruncationPolicy::default();
    let lhs = phi_truncated(&[a.clone(), b.clone()], std::slice::from_ref(c), q, z, order)?;
    let series = phi_truncated(&[c / a, c / b], std::slice::from_ref(c), q, &w, order)?;
    let num = infinite_qpoch(&w, q, &policy)?;
    let den = infinite_qpoch(z, q, &policy)?;
    let rhs = &num.div(&den)? * &series;
    Ok(&lhs - &rhs)
}

/// Residual of Jackson's transformation
///
/// ```text
/// 2φ1(q^{-n}, b; c; q, z) = (q^{-n} x; q)_∞ / (x; q)_∞ · 3φ2(q^{-n}, c/b, 0; c, cq/(bz); q, q),   x = bz/c
/// ```
///
/// Both series terminate and the product ratio collapses to the finite
/// `(q^{-n} x; q)_n`, so the residual is exact.
pub fn jackson_transform_residual(
    n: u64,
    b: &Rational,
    c: &Rational,
    q: &Rational,
    z: &Rational,
) -> QResult<ApproxValue> {
    check_base(q)?;
    if b.is_zero() || c.is_zero() || z.is_zero() {
        return Err(QError::InvalidParameter("b, c and z must be nonzero".into()));
    }
    let qn = powi(q, -(n as i64));
    let x = b * z / c;
    let lhs = phi(&[qn.clone(), b.clone()], std::slice::from_ref(c), q, z)?;
    let pref = q_pochhammer(&(&qn * &x), q, n);
    let rhs = phi(&[qn, c / b, Rational::zero()], &[c.clone(), c * q / (b * z)], q, q)?;
    Ok(ApproxValue::exact(lhs - pref * rhs))
}
