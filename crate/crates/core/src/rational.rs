//! Exact rationals and their textual forms.
//!
//! Everything numeric in this crate is a [`Rational`]: parameters, series
//! values, truncation bounds.  Values leave the process only as `"num/den"`
//! strings (integers included, e.g. `"3/1"`) plus an informational decimal
//! rendering.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QError, QResult};

pub type Rational = num_rational::BigRational;

/// `n/d` as a rational. Panics on `d == 0`, like any literal division would.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Integer power with a possibly negative exponent.
///
/// `x^0 = 1` for every `x`, including zero; a negative power of zero is a
/// caller bug and panics.
pub fn powi(x: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let m = u32::try_from(e.unsigned_abs()).expect("exponent fits in u32");
    let n = x.numer().pow(m);
    let d = x.denom().pow(m);
    if e > 0 {
        // gcd(n^m, d^m) = 1 already, and d^m > 0
        Rational::new_raw(n, d)
    } else {
        assert!(!n.is_zero(), "negative power of zero");
        Rational::new(d, n)
    }
}

/// A validated base `0 < q < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QBase {
    q: Rational,
}

impl QBase {
    pub fn new(q: Rational) -> QResult<Self> {
        check_base(&q)?;
        Ok(QBase { q })
    }

    pub fn get(&self) -> &Rational {
        &self.q
    }

    pub fn into_inner(self) -> Rational {
        self.q
    }
}

/// Rejects anything outside the open unit interval.
pub fn check_base(q: &Rational) -> QResult<()> {
    if q.is_positive() && q < &Rational::one() {
        Ok(())
    } else {
        Err(QError::InvalidParameter(format!(
            "base q must satisfy 0 < q < 1, got {}",
            format_rational(q)
        )))
    }
}

/// Canonical `"num/den"` form; the denominator is always printed.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"a/b"`, a plain integer `"a"`, a finite decimal `"0.125"`, or a
/// power form `"1/10^30"` / `"10^-30"`.
pub fn parse_rational(s: &str) -> QResult<Rational> {
    let t = s.trim();
    let bad = || QError::Parse(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    if let Some((b, e)) = t.split_once('^') {
        let b = parse_rational(b)?;
        let e: i64 = e.trim().parse().map_err(|_| bad())?;
        if b.is_zero() && e < 0 {
            return Err(bad());
        }
        if e.unsigned_abs() > u64::from(u32::MAX) {
            return Err(bad());
        }
        return Ok(powi(&b, e));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit())
            || !ip_digits.chars().all(|c| c.is_ascii_digit())
            || (ip_digits.is_empty() && fp.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{ip_digits}{fp}");
        let mag: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let den = BigInt::from(10u32).pow(fp.len() as u32);
        let v = Rational::new(mag, den);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Decimal rendering with `digits` significant digits, rounding half to even.
///
/// Plain positional notation is used for moderate magnitudes; otherwise the
/// mantissa is followed by `e<exp>`.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    assert!(digits > 0);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let ten = BigInt::from(10u32);

    // e = floor(log10 |x|), found exactly.
    let mut e = estimate_log10(&a);
    loop {
        let lo = pow10(e);
        if a < lo {
            e -= 1;
        } else if a >= pow10(e + 1) {
            e += 1;
        } else {
            break;
        }
    }

    // scaled lies in [10^(digits-1), 10^digits)
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let (mut m, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = &rem * 2u32;
    match twice.cmp(scaled.denom()) {
        Ordering::Greater => m += 1u32,
        Ordering::Equal if m.is_odd() => m += 1u32,
        _ => {}
    }
    if m == ten.pow(digits as u32) {
        m /= &ten;
        e += 1;
    }

    let ds = m.to_string();
    debug_assert_eq!(ds.len(), digits);
    let sign = if neg { "-" } else { "" };
    if (-6..digits as i64).contains(&e) {
        if e >= 0 {
            let (int_part, frac) = ds.split_at(e as usize + 1);
            if frac.is_empty() {
                format!("{sign}{int_part}")
            } else {
                format!("{sign}{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("{sign}0.{zeros}{ds}")
        }
    } else {
        let (lead, rest) = ds.split_at(1);
        if rest.is_empty() {
            format!("{sign}{lead}e{e}")
        } else {
            format!("{sign}{lead}.{rest}e{e}")
        }
    }
}

fn pow10(e: i64) -> Rational {
    powi(&int(10), e)
}

fn estimate_log10(a: &Rational) -> i64 {
    // bit lengths give log2 within one unit each way
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    (bits as f64 * std::f64::consts::LOG10_2).floor() as i64
}

/// Lossy conversion for diagnostics and fits only; never used in a
/// comparison that decides a verdict.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let bits = x.numer().bits() as i64 - x.denom().bits() as i64;
        match (x.numer().sign(), bits > 0) {
            (Sign::Minus, true) => f64::NEG_INFINITY,
            (_, true) => f64::INFINITY,
            _ => 0.0,
        }
    })
}
