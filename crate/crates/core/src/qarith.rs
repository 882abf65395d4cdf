//! Elementary q-symbols: q-integers, q-factorials and q-Pochhammer symbols.
//!
//! None of these validate `q`; the q-deformed formulas are perfectly good
//! rational functions outside `(0, 1)` and several callers evaluate them at
//! `q^2` or at `q^{-1}`-style shifted arguments.

use num_traits::{One, Zero};

use crate::rational::{int, powi, Rational};

/// `[n]_q = (1 - q^n)/(1 - q)`, for any integer `n`.
pub fn q_integer(n: i64, q: &Rational) -> Rational {
    if q.is_one() {
        return int(n);
    }
    (Rational::one() - powi(q, n)) / (Rational::one() - q)
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: u64, q: &Rational) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, i| acc * q_integer(i, q))
}

/// `[2k-1]_q!! = [1]_q [3]_q ... [2k-1]_q`.
pub fn q_double_factorial_odd(k: u64, q: &Rational) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, j| acc * q_integer(2 * j - 1, q))
}

/// `(a;q)_n = (1-a)(1-aq)...(1-aq^{n-1})`.
pub fn q_pochhammer(a: &Rational, q: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut t = a.clone();
    for _ in 0..n {
        let f = Rational::one() - &t;
        if f.is_zero() {
            return f;
        }
        acc *= f;
        t *= q;
    }
    acc
}

/// `(q^j;q)_n` for any integer `j`.
pub fn q_pochhammer_qpow(j: i64, q: &Rational, n: u64) -> Rational {
    q_pochhammer(&powi(q, j), q, n)
}

/// Rising factorial `c (c+1) ... (c+n-1)`.
pub fn pochhammer_classical(c: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut t = c.clone();
    for _ in 0..n {
        acc *= &t;
        t += Rational::one();
    }
    acc
}

/// Plain `n!` as a rational.
pub fn factorial(n: u64) -> Rational {
    pochhammer_classical(&Rational::one(), n)
}

/// `(2k-1)!! = 1 * 3 * ... * (2k-1)`.
pub fn double_factorial_odd(k: u64) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, j| acc * int(2 * j - 1))
}
