//! Truncated formal power series over the rationals.
//!
//! A series is a coefficient vector, index = power. Every operation keeps
//! exactly `len` coefficients, so comparisons are coefficient-wise and
//! exact.

use num_traits::{One, Zero};

use crate::error::{QError, QResult};
use crate::rational::Rational;

pub type Series = Vec<Rational>;

fn coeff(a: &[Rational], i: usize) -> Rational {
    a.get(i).cloned().unwrap_or_else(Rational::zero)
}

/// The first `len` coefficients of `a * b`.
pub fn mul(a: &[Rational], b: &[Rational], len: usize) -> Series {
    let mut out = vec![Rational::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// The first `len` coefficients of `num / den`; `den` must have a nonzero
/// constant term.
pub fn div(num: &[Rational], den: &[Rational], len: usize) -> QResult<Series> {
    let d0 = coeff(den, 0);
    if d0.is_zero() {
        return Err(QError::ZeroDenominator("power series divisor has zero constant term".into()));
    }
    let mut out: Series = Vec::with_capacity(len);
    for n in 0..len {
        let mut c = coeff(num, n);
        for (k, ok) in out.iter().enumerate() {
            let dk = coeff(den, n - k);
            if !dk.is_zero() {
                c -= ok * dk;
            }
        }
        out.push(c / &d0);
    }
    Ok(out)
}

/// The first `len` coefficients of `a^e`.
pub fn pow(a: &[Rational], e: u64, len: usize) -> Series {
    let mut out = one(len);
    for _ in 0..e {
        out = mul(&out, a, len);
    }
    out
}

/// `1 + 0 z + ...` with `len` coefficients.
pub fn one(len: usize) -> Series {
    let mut out = vec![Rational::zero(); len];
    if len > 0 {
        out[0] = Rational::one();
    }
    out
}

/// Largest absolute coefficient difference over the first `len` terms.
pub fn max_abs_diff(a: &[Rational], b: &[Rational], len: usize) -> Rational {
    use num_traits::Signed;
    (0..len)
        .map(|i| (coeff(a, i) - coeff(b, i)).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}
