//! Classical GUE and LUE moments: `Q_k(n)` is the normalised `2k`-th
//! moment `E tr X^{2k} / n` of the GUE, `Q_k(n; α)` the normalised `k`-th
//! moment of the LUE. Both are `1` at `k = 0`.
//!
//! These are the `q → 1` targets of the q-ensembles and carry their own
//! recurrences, generating functions and Hahn-polynomial representations.

use num_traits::{One, Signed, Zero};

use crate::ensembles::{classical_poly, ClassicalFamily};
use crate::error::{QError, QResult};
use crate::hyper::hyp_f;
use crate::partitions::{power_sum_via_hooks, schur_expectation_classical};
use crate::qarith::{double_factorial_odd, factorial, pochhammer_classical};
use crate::rational::{int, Rational};
use crate::series;

/// `Q_k(n) = (2k-1)!! · 2F1(-k, 1-n; 2; 2)`.
pub fn gue_moment(k: u64, n: u64) -> QResult<Rational> {
    if n == 0 {
        return Err(QError::InvalidParameter("n must be at least 1".into()));
    }
    let s = hyp_f(&[-int(k as i64), int(1 - n as i64)], &[int(2)], &int(2))?;
    Ok(double_factorial_odd(k) * s)
}

/// `(k+2) Q_{k+1} - 2n(2k+1) Q_k - k(2k+1)(2k-1) Q_{k-1}`.
pub fn hz_recurrence_residual(k: u64, n: u64) -> QResult<Rational> {
    if k == 0 {
        return Err(QError::InvalidOrder { got: 0, min: 1 });
    }
    let (ki, ni) = (k as i64, n as i64);
    Ok(int(ki + 2) * gue_moment(k + 1, n)?
        - int(2 * ni * (2 * ki + 1)) * gue_moment(k, n)?
        - int(ki * (2 * ki + 1) * (2 * ki - 1)) * gue_moment(k - 1, n)?)
}

fn binomial_series(sign: i64, e: u64, len: usize) -> series::Series {
    series::pow(&[int(1), int(sign)], e, len)
}

/// Largest coefficient difference, over `z^0..z^{order-1}`, between
/// `Σ_n n Q_k(n) z^n / (2k-1)!!` and `z (1+z)^{k+1} / ((1-z²)(1-z)^{k+1})`.
///
/// The generating function counts the unnormalised trace `n Q_k(n)`.
pub fn hz_genfunc_residual(k: u64, order: usize) -> QResult<Rational> {
    let dfi = double_factorial_odd(k);
    let mut lhs = vec![Rational::zero(); order];
    for (n, c) in lhs.iter_mut().enumerate().skip(1) {
        *c = int(n as i64) * gue_moment(k, n as u64)? / &dfi;
    }
    let num = series::mul(&[int(0), int(1)], &binomial_series(1, k + 1, order), order);
    let den = series::mul(&[int(1), int(0), int(-1)], &binomial_series(-1, k + 1, order), order);
    let rhs = series::div(&num, &den, order)?;
    Ok(series::max_abs_diff(&lhs, &rhs, order))
}

/// `Q_k(n; α) = (n+α) (k+α)! / (1+α)! · 3F2(1-k, 2+k, 1-n; 2, 2+α; 1)`.
pub fn lue_moment(k: u64, n: u64, alpha: u64) -> QResult<Rational> {
    if k == 0 {
        return Err(QError::InvalidOrder { got: 0, min: 1 });
    }
    if n == 0 {
        return Err(QError::InvalidParameter("n must be at least 1".into()));
    }
    let (ki, ni, ai) = (k as i64, n as i64, alpha as i64);
    let s = hyp_f(&[int(1 - ki), int(2 + ki), int(1 - ni)], &[int(2), int(2 + ai)], &int(1))?;
    Ok(int(ni + ai) * factorial(k + alpha) / factorial(1 + alpha) * s)
}

fn lue_or_one(k: u64, n: u64, alpha: u64) -> QResult<Rational> {
    if k == 0 {
        Ok(Rational::one())
    } else {
        lue_moment(k, n, alpha)
    }
}

/// `Q_k(n; α)` from the hook-shape Schur expansion, `(1/n) Σ_l (-1)^l E[s_{(k-l,1^l)}]`.
pub fn lue_moment_schur(k: u64, n: u64, alpha: u64) -> QResult<Rational> {
    if k == 0 {
        return Err(QError::InvalidOrder { got: 0, min: 1 });
    }
    let k32 = u32::try_from(k)
        .ok()
        .filter(|&k| k <= crate::partitions::MAX_SIZE)
        .ok_or_else(|| QError::InvalidParameter(format!("k = {k} exceeds the partition size limit")))?;
    Ok(power_sum_via_hooks(k32, |l| schur_expectation_classical(l, n, alpha)) / int(n as i64))
}

/// `(k+2) Q_{k+1} - (2k+1)(2n+α) Q_k - (k-1)(k²-α²) Q_{k-1}`, with `Q_0 = 1`.
pub fn ht_recurrence_residual(k: u64, n: u64, alpha: u64) -> QResult<Rational> {
    if k == 0 {
        return Err(QError::InvalidOrder { got: 0, min: 1 });
    }
    let (ki, ni, ai) = (k as i64, n as i64, alpha as i64);
    Ok(int(ki + 2) * lue_or_one(k + 1, n, alpha)?
        - int((2 * ki + 1) * (2 * ni + ai)) * lue_or_one(k, n, alpha)?
        - int((ki - 1) * (ki * ki - ai * ai)) * lue_or_one(k - 1, n, alpha)?)
}

/// Differences between `Q_k(n; α)` and its two polynomial representations,
/// `c · R_{n-1}((k-1)(k+2); 1, 1, -2-α)` (dual Hahn, at `x = k-1`) and
/// `c · S_{k-1}(n-1; 1, 1, -2-α)` (Hahn), with `c = (n+α)(k+α)!/(1+α)!`.
pub fn hahn_representation_residuals(k: u64, n: u64, alpha: u64) -> QResult<(Rational, Rational)> {
    let value = lue_moment(k, n, alpha)?;
    let ai = alpha as i64;
    let c = int(n as i64 + ai) * factorial(k + alpha) / factorial(1 + alpha);
    let big_n = int(-2 - ai);
    let dual = ClassicalFamily::DualHahn { gamma: int(1), delta: int(1), big_n: big_n.clone() };
    let hahn = ClassicalFamily::Hahn { alpha: int(1), beta: int(1), big_n };
    let r = classical_poly(&dual, n - 1, &int(k as i64 - 1))?;
    let s = classical_poly(&hahn, k - 1, &int(n as i64 - 1))?;
    Ok((&value - &c * r, value - c * s))
}

/// Coefficients of `Σ_n f(n) n (1-z)² z^{n-1}` up to `z^{order-1}`.
fn randomize<F>(order: usize, mut f: F) -> QResult<series::Series>
where
    F: FnMut(u64) -> QResult<Rational>,
{
    let mut s = Vec::with_capacity(order);
    for j in 0..order {
        let n = j as u64 + 1;
        s.push(int(n as i64) * f(n)?);
    }
    Ok(series::mul(&s, &binomial_series(-1, 2, order), order))
}

/// Coefficient residual, up to `z^{order-1}`, of
/// `Σ_n Q_k(n;α) n (1-z)² z^{n-1} = (k+α)!/α! (1-z)^{k+1} 2F1(1+k, 1+k+α; 1+α; z)`.
pub fn lue_randomized_residual(k: u64, alpha: u64, order: usize) -> QResult<Rational> {
    let lhs = randomize(order, |n| lue_moment(k, n, alpha))?;
    let (k1, ka1, a1) = (int(k as i64 + 1), int((k + alpha) as i64 + 1), int(alpha as i64 + 1));
    let f: series::Series = (0..order as u64)
        .map(|j| {
            pochhammer_classical(&k1, j) * pochhammer_classical(&ka1, j)
                / (pochhammer_classical(&a1, j) * factorial(j))
        })
        .collect();
    let c = factorial(k + alpha) / factorial(alpha);
    let rhs: series::Series = series::mul(&binomial_series(-1, k + 1, order), &f, order)
        .into_iter()
        .map(|v| v * &c)
        .collect();
    Ok(series::max_abs_diff(&lhs, &rhs, order))
}

/// Coefficient residual, up to `z^{order-1}`, of
/// `Σ_n Q_k(n) n (1-z)² z^{n-1} = (2k-1)!! ((1+z)/(1-z))^k`.
pub fn gue_randomized_residual(k: u64, order: usize) -> QResult<Rational> {
    let lhs = randomize(order, |n| gue_moment(k, n))?;
    let ratio = series::div(&binomial_series(1, k, order), &binomial_series(-1, k, order), order)?;
    let dfi = double_factorial_odd(k);
    let rhs: series::Series = ratio.into_iter().map(|v| v * &dfi).collect();
    Ok(series::max_abs_diff(&lhs, &rhs, order))
}

/// `|a - b| / |b|`, or `|a|` when `b = 0`.
pub fn relative_error(a: &Rational, b: &Rational) -> Rational {
    if b.is_zero() {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}
