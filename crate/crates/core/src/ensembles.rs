//! Reference measures, their orthonormal polynomials, and the Jackson-sum
//! oracle for one-point moments.
//!
//! Two atomic measures are supported:
//!
//! * the Gaussian q-distribution of base `Q`, with atoms `t = ±Q^j` in the
//!   rescaled coordinate `t = x/ν` and weights
//!   `Q^j / ((Q;Q)_j (-Q;Q)_j (-1;Q)_∞)`;
//! * the discrete q-Laguerre measure `γ^α` of base `p`, with atoms `p^n`,
//!   `n ∈ ℤ`, weights `K · p^{n(α+1)} (-1;p)_n`, written from the
//!   Jackson-integral form of the measure.
//!
//! `ν` itself is irrational and never formed; only `ν²` enters, and only
//! through even moments.

use num_traits::{One, Signed, Zero};
use std::cell::RefCell;

use crate::error::{QError, QResult};
use crate::hyper::{hyp_f, phi};
use crate::qarith::{pochhammer_classical, q_pochhammer};
use crate::qcalc::{infinite_qpoch, ladder_sum, ApproxValue, TruncationPolicy};
use crate::rational::{check_base, format_rational, int, powi, rat, to_f64, Rational};

/// How `ν²` relates to the q of the moment formulas (the measure base is
/// `q²` in both cases).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NuConvention {
    /// `ν² = 1/(1 - q²)`, tied to the measure base.
    MeasureBase,
    /// `ν² = 1/(1 - q)`, as literally written next to the measure.
    Unsquared,
}

/// Which base the q-Laguerre reference measure uses relative to the q of
/// the moment formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaguerreBase {
    /// Measure and polynomials in base `q²`, matching the moment formulas.
    Squared,
    /// Measure and polynomials in base `q`.
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomicMeasure {
    QGaussian { base: Rational },
    QLaguerre { base: Rational, alpha: u64 },
}

impl AtomicMeasure {
    pub fn q_gaussian(base: Rational) -> QResult<Self> {
        check_base(&base)?;
        Ok(AtomicMeasure::QGaussian { base })
    }

    pub fn q_laguerre(base: Rational, alpha: u64) -> QResult<Self> {
        check_base(&base)?;
        Ok(AtomicMeasure::QLaguerre { base, alpha })
    }

    pub fn base(&self) -> &Rational {
        match self {
            AtomicMeasure::QGaussian { base } | AtomicMeasure::QLaguerre { base, .. } => base,
        }
    }

    /// Atom on rung `j`: `Q^j` (the Gaussian measure also has `-Q^j`, with
    /// the same weight), or `p^j` for `j ∈ ℤ`.
    pub fn atom(&self, j: i64) -> QResult<Rational> {
        if matches!(self, AtomicMeasure::QGaussian { .. }) && j < 0 {
            return Err(QError::InvalidParameter("Gaussian rungs start at 0".into()));
        }
        Ok(powi(self.base(), j))
    }

    /// Weight of rung `j` relative to rung 0; exactly rational.
    pub fn relative_weight(&self, j: i64) -> QResult<Rational> {
        match self {
            AtomicMeasure::QGaussian { base } => {
                if j < 0 {
                    return Err(QError::InvalidParameter("Gaussian rungs start at 0".into()));
                }
                let q2 = base * base;
                Ok(powi(base, j) / q_pochhammer(&q2, &q2, j as u64))
            }
            AtomicMeasure::QLaguerre { base, alpha } => {
                let a1 = *alpha as i64 + 1;
                let p = powi(base, j * a1);
                if j >= 0 {
                    Ok(p * q_pochhammer(&int(-1), base, j as u64))
                } else {
                    // (a;q)_{-m} = 1/(a q^{-m}; q)_m
                    Ok(p / q_pochhammer(&-powi(base, j), base, j.unsigned_abs()))
                }
            }
        }
    }

    /// The constant turning relative weights into probabilities.
    pub fn normalization(&self, policy: &TruncationPolicy) -> QResult<ApproxValue> {
        match self {
            AtomicMeasure::QGaussian { base } => infinite_qpoch(&int(-1), base, policy)?.recip(),
            AtomicMeasure::QLaguerre { base, alpha } => {
                // (p^{α+1};p)_∞ (-p;p)_∞ / ((-p^{α+1};p)_∞ (-p^{-α};p)_∞ (p;p)_∞)
                let a = *alpha as i64;
                let pa1 = powi(base, a + 1);
                let num = &infinite_qpoch(&pa1, base, policy)? * &infinite_qpoch(&-base.clone(), base, policy)?;
                let den = &(&infinite_qpoch(&-pa1, base, policy)? * &infinite_qpoch(&-powi(base, -a), base, policy)?)
                    * &infinite_qpoch(base, base, policy)?;
                num.div(&den)
            }
        }
    }
}

/// Normalised weight of the atom on rung `j` (each of `±Q^j` for the
/// Gaussian measure).
pub fn measure_weight(m: &AtomicMeasure, j: i64, policy: &TruncationPolicy) -> QResult<ApproxValue> {
    Ok(m.normalization(policy)?.scale(&m.relative_weight(j)?))
}

/// Coefficients (ascending powers of `t`) of the monic discrete q-Hermite I
/// polynomial of base `Q`: `h_{m+1} = t h_m - Q^{m-1}(1 - Q^m) h_{m-1}`.
pub fn q_hermite_monic_coeffs(n: u64, big_q: &Rational) -> Vec<Rational> {
    let mut prev = vec![Rational::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![Rational::zero(), Rational::one()];
    for m in 1..n as i64 {
        let c = powi(big_q, m - 1) * (Rational::one() - powi(big_q, m));
        let mut next = vec![Rational::zero(); cur.len() + 1];
        for (i, a) in cur.iter().enumerate() {
            next[i + 1] += a;
        }
        for (i, a) in prev.iter().enumerate() {
            next[i] -= &c * a;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `H̃_n(νt; q²)²`: the square of the orthonormal rescaled q-Hermite
/// polynomial, from
///
/// ```text
/// H̃_n = q^{n(n-1)/2} / sqrt((q²;q²)_n) · 2φ1(q^{-2n}, 1/t; 0; q², -q² t)
/// ```
pub fn q_hermite_sq(n: u64, t: &Rational, q: &Rational) -> QResult<Rational> {
    check_base(q)?;
    if n == 0 {
        return Ok(Rational::one());
    }
    if t.is_zero() {
        return Err(QError::ZeroPoint);
    }
    let q2 = q * q;
    let ni = n as i64;
    let s = phi(&[powi(&q2, -ni), t.recip()], &[Rational::zero()], &q2, &-(&q2 * t))?;
    Ok(powi(q, ni * (ni - 1)) / q_pochhammer(&q2, &q2, n) * &s * &s)
}

/// Squared norm factors of the two q-Laguerre displays:
/// `p^n / ((p;p)_n (p^{α+1};p)_n)` and `(p^{α+1};p)_n p^n / (p;p)_n`.
fn q_laguerre_norms(n: u64, alpha: u64, p: &Rational) -> (Rational, Rational) {
    let pn = powi(p, n as i64);
    let pp = q_pochhammer(p, p, n);
    let pa = q_pochhammer(&powi(p, alpha as i64 + 1), p, n);
    (&pn / (&pp * &pa), pa * pn / pp)
}

/// `L_n(x; α, p)²` for the orthonormal q-Laguerre polynomials of base `p`.
///
/// Both displays are evaluated:
///
/// ```text
/// sqrt(p^n/((p;p)_n (p^{α+1};p)_n)) · 2φ1(p^{-n}, -x; 0; p, p^{n+α+1})
/// sqrt((p^{α+1};p)_n p^n/(p;p)_n)   · 1φ1(p^{-n}; p^{α+1}; p, -p^{n+α+1} x)
/// ```
///
/// and must agree before squaring.
pub fn q_laguerre_sq(n: u64, x: &Rational, alpha: u64, p: &Rational) -> QResult<Rational> {
    check_base(p)?;
    let ni = n as i64;
    let a1 = alpha as i64 + 1;
    let pn = powi(p, -ni);
    let arg = powi(p, ni + a1);
    let v1 = phi(&[pn.clone(), -x.clone()], &[Rational::zero()], p, &arg)?;
    let v2 = phi(&[pn], &[powi(p, a1)], p, &-(arg * x))?;
    let (n1, n2) = q_laguerre_norms(n, alpha, p);
    let pa = q_pochhammer(&powi(p, a1), p, n);
    if v1 != &pa * &v2 {
        return Err(QError::FormMismatch(format!(
            "q-Laguerre displays disagree at n={n}, x={}: {} vs {}",
            format_rational(x),
            format_rational(&v1),
            format_rational(&(pa * &v2))
        )));
    }
    debug_assert_eq!(&n1 * &v1 * &v1, &n2 * &v2 * &v2);
    Ok(n2 * &v2 * &v2)
}

/// Coefficients (ascending powers of `x`) of the un-normalised `1φ1` form of
/// the q-Laguerre polynomial, together with its squared normalisation.
pub fn q_laguerre_coeffs(n: u64, alpha: u64, p: &Rational) -> (Vec<Rational>, Rational) {
    let ni = n as i64;
    let a1 = alpha as i64 + 1;
    let pa = powi(p, a1);
    let coeffs = (0..=n)
        .map(|i| {
            let ii = i as i64;
            q_pochhammer(&powi(p, -ni), p, i) * powi(p, ii * (ii - 1) / 2 + ii * (ni + a1))
                / (q_pochhammer(&pa, p, i) * q_pochhammer(p, p, i))
        })
        .collect();
    (coeffs, q_laguerre_norms(n, alpha, p).1)
}

/// `Q_k(q^{-x}; α, β, K | q) = 3φ2(q^{-k}, αβq^{k+1}, q^{-x}; αq, q^{-K}; q, q)`;
/// `x` is passed as the value `q^{-x}`.
pub fn q_hahn(k: u64, x: &Rational, alpha: &Rational, beta: &Rational, big_k: u64, q: &Rational) -> QResult<Rational> {
    if k > big_k {
        return Err(QError::DegreeOutOfRange { degree: k, limit: big_k });
    }
    check_base(q)?;
    let ki = k as i64;
    phi(
        &[powi(q, -ki), alpha * beta * powi(q, ki + 1), x.clone()],
        &[alpha * q, powi(q, -(big_k as i64))],
        q,
        q,
    )
}

/// `B_n(x; a, b, c; q) = 3φ2(q^{-n}, abq^{n+1}, x; aq, cq; q, q)`.
pub fn big_q_jacobi(n: u64, x: &Rational, a: &Rational, b: &Rational, c: &Rational, q: &Rational) -> QResult<Rational> {
    check_base(q)?;
    let ni = n as i64;
    phi(&[powi(q, -ni), a * b * powi(q, ni + 1), x.clone()], &[a * q, c * q], q, q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicalFamily {
    /// Probabilists' Hermite `He_n`.
    Hermite,
    /// `L_n^{(α)}(x) = (α+1)_n/n! · 1F1(-n; α+1; x)`.
    Laguerre { alpha: Rational },
    /// `Q_n(x; α, β, N) = 3F2(-n, n+α+β+1, -x; α+1, -N; 1)`.
    Hahn { alpha: Rational, beta: Rational, big_n: Rational },
    /// `R_n(λ(x); γ, δ, N) = 3F2(-n, -x, x+γ+δ+1; γ+1, -N; 1)`, taking `x`
    /// rather than `λ(x) = x(x+γ+δ+1)`.
    DualHahn { gamma: Rational, delta: Rational, big_n: Rational },
}

/// Classical orthogonal polynomial of the given family and degree at `x`,
/// as an exact terminating series.
pub fn classical_poly(family: &ClassicalFamily, degree: u64, x: &Rational) -> QResult<Rational> {
    let n = int(degree as i64);
    let one = Rational::one();
    match family {
        ClassicalFamily::Hermite => {
            // He_n(x) = Σ_i (-n/2)_i ((1-n)/2)_i / i! (-2)^i x^{n-2i}
            //         = x^n 2F0(-n/2, (1-n)/2; ; -2/x^2)
            if x.is_zero() {
                if degree % 2 == 1 {
                    return Ok(Rational::zero());
                }
                let m = degree / 2;
                let c = pochhammer_classical(&-int(m as i64), m) * pochhammer_classical(&rat(1 - degree as i64, 2), m)
                    / pochhammer_classical(&one, m)
                    * powi(&int(-2), m as i64);
                return Ok(c);
            }
            let s = hyp_f(&[-(&n / int(2)), (&one - &n) / int(2)], &[], &(int(-2) / (x * x)))?;
            Ok(powi(x, degree as i64) * s)
        }
        ClassicalFamily::Laguerre { alpha } => {
            let a1 = alpha + &one;
            let s = hyp_f(&[-n.clone()], std::slice::from_ref(&a1), x)?;
            Ok(pochhammer_classical(&a1, degree) / pochhammer_classical(&one, degree) * s)
        }
        ClassicalFamily::Hahn { alpha, beta, big_n } => hyp_f(
            &[-n.clone(), &n + alpha + beta + &one, -x.clone()],
            &[alpha + &one, -big_n.clone()],
            &one,
        ),
        ClassicalFamily::DualHahn { gamma, delta, big_n } => hyp_f(
            &[-n, -x.clone(), x + gamma + delta + &one],
            &[gamma + &one, -big_n.clone()],
            &one,
        ),
    }
}

/// Squared norm of `He_n` under the standard Gaussian (`n!`) or of
/// `L_n^{(α)}` under `x^α e^{-x}/Γ(α+1)` (`(α+1)_n/n!`).
pub fn classical_norm_sq(family: &ClassicalFamily, degree: u64) -> QResult<Rational> {
    let one = Rational::one();
    match family {
        ClassicalFamily::Hermite => Ok(pochhammer_classical(&one, degree)),
        ClassicalFamily::Laguerre { alpha } => {
            Ok(pochhammer_classical(&(alpha + &one), degree) / pochhammer_classical(&one, degree))
        }
        _ => Err(QError::InvalidParameter("norms are only provided for Hermite and Laguerre".into())),
    }
}

/// Which one-point oracle to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleFamily {
    QHermite { nu: NuConvention },
    QLaguerre { alpha: u64, base: LaguerreBase },
}

/// An integrand `x ↦ x^k Σ_{n ∈ S} w_n p_n(x)²` on a measure's atoms, with
/// the data needed to bound it on the unexplored part of the ladder.
struct PolyIntegrand {
    power: u64,
    /// degrees and their mixing weights
    degrees: Vec<(u64, Rational)>,
    /// `Σ_n w_n (Σ_i |c_{n,i}|)² · norm_n`: bounds `Σ_n w_n p_n(x)²` by
    /// this times `max(1, |x|)^{2 max deg}`.
    coeff_bound: Rational,
    max_degree: u64,
}

fn abs_sum(c: &[Rational]) -> Rational {
    c.iter().fold(Rational::zero(), |acc, v| acc + v.abs())
}

impl PolyIntegrand {
    fn new(measure: &AtomicMeasure, power: u64, degrees: Vec<(u64, Rational)>) -> Self {
        let mut coeff_bound = Rational::zero();
        let mut max_degree = 0;
        for (n, w) in &degrees {
            let b = match measure {
                AtomicMeasure::QGaussian { base } => {
                    // orthonormal: h_n / sqrt(Q^{n(n-1)/2} (Q;Q)_n)
                    let c = q_hermite_monic_coeffs(*n, base);
                    let ni = *n as i64;
                    let norm = powi(base, ni * (ni - 1) / 2) * q_pochhammer(base, base, *n);
                    let s = abs_sum(&c);
                    &s * &s / norm
                }
                AtomicMeasure::QLaguerre { base, alpha } => {
                    let (c, norm) = q_laguerre_coeffs(*n, *alpha, base);
                    let s = abs_sum(&c);
                    &s * &s * norm
                }
            };
            coeff_bound += w.abs() * b;
            max_degree = max_degree.max(*n);
        }
        PolyIntegrand { power, degrees, coeff_bound, max_degree }
    }

    fn eval(&self, measure: &AtomicMeasure, x: &Rational) -> QResult<Rational> {
        let mut s = Rational::zero();
        for (n, w) in &self.degrees {
            let v = match measure {
                // the measure base is q², so the polynomial's own q is its root;
                // evaluate through the base directly instead
                AtomicMeasure::QGaussian { base } => q_hermite_sq_base(*n, x, base)?,
                AtomicMeasure::QLaguerre { base, alpha } => q_laguerre_sq(*n, x, *alpha, base)?,
            };
            s += w * v;
        }
        Ok(powi(x, self.power as i64) * s)
    }
}

/// `H̃_n(νt)²` for the measure of base `Q` (the `q²` of [`q_hermite_sq`]).
fn q_hermite_sq_base(n: u64, t: &Rational, big_q: &Rational) -> QResult<Rational> {
    if n == 0 {
        return Ok(Rational::one());
    }
    if t.is_zero() {
        return Err(QError::ZeroPoint);
    }
    let ni = n as i64;
    let s = phi(&[powi(big_q, -ni), t.recip()], &[Rational::zero()], big_q, &-(big_q * t))?;
    Ok(powi(big_q, ni * (ni - 1) / 2) / q_pochhammer(big_q, big_q, n) * &s * &s)
}

/// `∫ f dμ` for a polynomial-squared integrand, with certified tails at both
/// ends of the ladder.
fn integrate(measure: &AtomicMeasure, f: &PolyIntegrand, policy: &TruncationPolicy) -> QResult<ApproxValue> {
    let one = Rational::one();
    let base = measure.base().clone();
    let norm = measure.normalization(policy)?;
    let sum = match measure {
        AtomicMeasure::QGaussian { .. } => {
            // both signs: x^k p(x)^2 is even in t for even k
            if f.power % 2 == 1 {
                return Ok(ApproxValue::exact(Rational::zero()));
            }
            let rel = RefCell::new(one.clone());
            let q2 = &base * &base;
            // rel_{j+1}/rel_j = Q/(1 - Q^{2j+2}); |t| <= 1 on every atom
            ladder_sum(
                |j| {
                    let t = powi(&base, j as i64);
                    let r = rel.borrow().clone();
                    let v = f.eval(measure, &t).expect("atoms are nonzero") * int(2) * &r;
                    *rel.borrow_mut() = r * &base / (&one - powi(&q2, j as i64 + 1));
                    v
                },
                |j, _| {
                    let ratio = &base / (&one - powi(&q2, j as i64 + 1));
                    (ratio < one).then(|| {
                        // rel currently holds rel_{j+1}
                        int(2) * &f.coeff_bound * rel.borrow().clone() / (&one - ratio)
                    })
                },
                policy,
            )?
        }
        AtomicMeasure::QLaguerre { alpha, .. } => {
            let pa1 = powi(&base, *alpha as i64 + 1);
            // n >= 0: x = p^n <= 1; rel_{n+1}/rel_n = p^{α+1}(1 + p^n)
            let rel = RefCell::new(one.clone());
            let zero_side = ladder_sum(
                |n| {
                    let x = powi(&base, n as i64);
                    let r = rel.borrow().clone();
                    let v = f.eval(measure, &x).expect("finite atom") * &r;
                    *rel.borrow_mut() = r * &pa1 * (&one + &x);
                    v
                },
                |n, _| {
                    let ratio = &pa1 * (&one + powi(&base, n as i64 + 1));
                    (ratio < one).then(|| &f.coeff_bound * rel.borrow().clone() / (&one - ratio))
                },
                policy,
            )?;

            // n = -m, m >= 1: x = p^{-m} >= 1, |f| <= B x^D with D = k + 2 deg;
            // rel_{-(m+1)}/rel_{-m} <= p^{m-α}, so the term ratio is at most p^{m-α-D}
            let d = f.power as i64 + 2 * f.max_degree as i64;
            let a = *alpha as i64;
            let rel = RefCell::new(one.clone());
            let x_at = |m: i64| powi(&base, -m);
            let inf_side = ladder_sum(
                |i| {
                    let m = i as i64 + 1;
                    // rel_{-m} = rel_{-(m-1)} · p^{-(α+1)} / (1 + p^{-m})
                    let r = rel.borrow().clone() / (&pa1 * (&one + x_at(m)));
                    *rel.borrow_mut() = r.clone();
                    f.eval(measure, &x_at(m)).expect("finite atom") * r
                },
                |i, _| {
                    let m = i as i64 + 1;
                    let ratio = powi(&base, m - a - d);
                    (ratio < one).then(|| {
                        let last = &f.coeff_bound * powi(&x_at(m), d) * rel.borrow().clone();
                        last * &ratio / (&one - &ratio)
                    })
                },
                policy,
            )?;
            &zero_side + &inf_side
        }
    };
    Ok(&sum * &norm)
}

fn oracle_measure(family: &OracleFamily, q: &Rational) -> QResult<AtomicMeasure> {
    let q2 = q * q;
    match family {
        OracleFamily::QHermite { .. } => AtomicMeasure::q_gaussian(q2),
        OracleFamily::QLaguerre { alpha, base } => match base {
            LaguerreBase::Squared => AtomicMeasure::q_laguerre(q2, *alpha),
            LaguerreBase::Plain => AtomicMeasure::q_laguerre(q.clone(), *alpha),
        },
    }
}

/// `ν²` for the Gaussian oracle.
pub fn nu_squared(nu: NuConvention, q: &Rational) -> Rational {
    let one = Rational::one();
    match nu {
        NuConvention::MeasureBase => (&one - q * q).recip(),
        NuConvention::Unsquared => (&one - q).recip(),
    }
}

/// `∫ x^k dρ_N(x)` with `ρ_N = (1/N) Σ_{n<N} p_n(x)² dμ(x)`, summed over the
/// atoms with certified tails. For the Gaussian family `x = νt`, so odd `k`
/// gives exactly 0 and `k = 2m` carries `(ν²)^m`.
pub fn onepoint_moment_oracle(
    family: &OracleFamily,
    k: u64,
    n: u64,
    q: &Rational,
    policy: &TruncationPolicy,
) -> QResult<ApproxValue> {
    if n == 0 {
        return Err(QError::InvalidParameter("N must be at least 1".into()));
    }
    check_base(q)?;
    let measure = oracle_measure(family, q)?;
    let w = rat(1, n as i64);
    let f = PolyIntegrand::new(&measure, k, (0..n).map(|d| (d, w.clone())).collect());
    let v = integrate(&measure, &f, policy)?;
    Ok(match family {
        OracleFamily::QHermite { nu } => v.scale(&powi(&nu_squared(*nu, q), k as i64 / 2)),
        OracleFamily::QLaguerre { .. } => v,
    })
}

/// `Σ_atoms p_n(x)² w(x)`, which is 1 for an orthonormal family.
pub fn orthonormality_sum(measure: &AtomicMeasure, n: u64, policy: &TruncationPolicy) -> QResult<ApproxValue> {
    let f = PolyIntegrand::new(measure, 0, vec![(n, Rational::one())]);
    integrate(measure, &f, policy)
}

/// Total mass of the measure, summed atom by atom.
pub fn measure_mass(measure: &AtomicMeasure, policy: &TruncationPolicy) -> QResult<ApproxValue> {
    orthonormality_sum(measure, 0, policy)
}

/// One oracle-versus-formula comparison point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioPoint {
    pub k: u64,
    pub n: u64,
    /// oracle / formula as a certified interval
    pub ratio: ApproxValue,
}

/// Outcome of fitting `oracle/formula = q^{c1 k + c2 k²}` over a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorFit {
    pub q: Rational,
    /// `(k, N, e)` with `q^e` inside the certified ratio, or `None` when no
    /// integer power of `q` fits.
    pub exponents: Vec<(u64, u64, Option<i64>)>,
    /// `(c1, c2)` when a single such pair explains every point.
    pub coefficients: Option<(i64, i64)>,
}

impl FactorFit {
    pub fn is_consistent(&self) -> bool {
        self.coefficients.is_some()
    }

    pub fn describe(&self) -> String {
        let mut s = match self.coefficients {
            Some((c1, c2)) => format!("q={}: factor q^({c1}k + {c2}k^2) fits every point", format_rational(&self.q)),
            None => format!("q={}: no constant factor q^(c1 k + c2 k^2) fits", format_rational(&self.q)),
        };
        let table: Vec<String> = self
            .exponents
            .iter()
            .map(|(k, n, e)| match e {
                Some(e) => format!("(k={k},N={n}):q^{e}"),
                None => format!("(k={k},N={n}):not a q-power"),
            })
            .collect();
        s.push_str("; ");
        s.push_str(&table.join(" "));
        s
    }
}

/// Integer `e` with `q^e` inside `ratio`, if any.
pub fn q_power_in(ratio: &ApproxValue, q: &Rational) -> Option<i64> {
    let lo = ratio.lower();
    if !lo.is_positive() {
        return None;
    }
    let guess = (to_f64(&ratio.value).ln() / to_f64(q).ln()).round();
    if !guess.is_finite() {
        return None;
    }
    let g = guess as i64;
    (g - 2..=g + 2).find(|&e| ratio.contains(&powi(q, e)))
}

/// Fits `q^{c1 k + c2 k²}` to every point, exactly.
pub fn fit_q_power_factor(q: &Rational, points: &[RatioPoint]) -> FactorFit {
    let exponents: Vec<(u64, u64, Option<i64>)> =
        points.iter().map(|p| (p.k, p.n, q_power_in(&p.ratio, q))).collect();
    let coefficients = fit_quadratic(&exponents);
    FactorFit { q: q.clone(), exponents, coefficients }
}

fn fit_quadratic(exponents: &[(u64, u64, Option<i64>)]) -> Option<(i64, i64)> {
    let mut known = Vec::with_capacity(exponents.len());
    for (k, _, e) in exponents {
        known.push((*k as i64, (*e)?));
    }
    let mut ks: Vec<i64> = known.iter().map(|(k, _)| *k).collect();
    ks.sort_unstable();
    ks.dedup();
    let e_at = |k: i64| known.iter().find(|(kk, _)| *kk == k).map(|(_, e)| *e);
    let (c1, c2) = match ks.as_slice() {
        [] => (0, 0),
        [k] => {
            // one k: prefer the linear term
            let e = e_at(*k)?;
            if e % k != 0 {
                return None;
            }
            (e / k, 0)
        }
        [k1, k2, ..] => {
            // e = c1 k + c2 k^2  =>  e/k = c1 + c2 k
            let (e1, e2) = (int(e_at(*k1)?) / int(*k1), int(e_at(*k2)?) / int(*k2));
            let c2 = (&e2 - &e1) / int(k2 - k1);
            let c1 = e1 - &c2 * int(*k1);
            if !c1.is_integer() || !c2.is_integer() {
                return None;
            }
            (i64::try_from(c1.to_integer()).ok()?, i64::try_from(c2.to_integer()).ok()?)
        }
    };
    known
        .iter()
        .all(|(k, e)| c1 * k + c2 * k * k == *e)
        .then_some((c1, c2))
}
