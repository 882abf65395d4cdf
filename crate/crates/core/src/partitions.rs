//! Integer partitions, hook lengths, contents and principal specialisations
//! of Schur functions.
//!
//! Cells are 1-based `(i, j)` = (row, column); the content of a cell is
//! `j - i`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{QError, QResult};
use crate::rational::{int, powi, Rational};

/// Largest partition size accepted by [`Partition::new`].
pub const MAX_SIZE: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellStat {
    pub row: u32,
    pub col: u32,
    pub hook: u32,
    pub content: i64,
}

impl Partition {
    /// Validates that the parts are positive, weakly decreasing, and sum to
    /// at most [`MAX_SIZE`].
    pub fn new(parts: Vec<u32>) -> QResult<Self> {
        if parts.contains(&0) {
            return Err(QError::InvalidParameter("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(QError::InvalidParameter("partition parts must be weakly decreasing".into()));
        }
        let size: u64 = parts.iter().map(|&p| u64::from(p)).sum();
        if size > u64::from(MAX_SIZE) {
            return Err(QError::InvalidParameter(format!("partition size {size} exceeds {MAX_SIZE}")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The hook `(k - l, 1^l)`, defined for `0 <= l < k`.
    pub fn hook_shape(k: u32, l: u32) -> QResult<Self> {
        if l >= k {
            return Err(QError::InvalidParameter(format!("hook (k-l, 1^l) needs l < k, got k={k}, l={l}")));
        }
        let mut parts = vec![k - l];
        parts.extend(std::iter::repeat_n(1, l as usize));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Every partition of `k`, in reverse lexicographic order.
pub fn partitions_of(k: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// One entry per cell, row by row: hook length `arm + leg + 1` and content.
pub fn hooks(lambda: &Partition) -> Vec<CellStat> {
    let conj = lambda.conjugate();
    let mut out = Vec::with_capacity(lambda.size() as usize);
    for (i0, &len) in lambda.parts.iter().enumerate() {
        let i = i0 as u32 + 1;
        for j in 1..=len {
            let arm = len - j;
            let leg = conj.parts[(j - 1) as usize] - i;
            out.push(CellStat {
                row: i,
                col: j,
                hook: arm + leg + 1,
                content: i64::from(j) - i64::from(i),
            });
        }
    }
    out
}

/// `b(λ) = Σ (i - 1) λ_i`.
pub fn b_stat(lambda: &Partition) -> u64 {
    lambda
        .parts
        .iter()
        .enumerate()
        .map(|(i, &p)| i as u64 * u64::from(p))
        .sum()
}

/// Product of all hook lengths, `H_λ`.
pub fn hook_product(lambda: &Partition) -> Rational {
    hooks(lambda)
        .iter()
        .fold(Rational::one(), |acc, c| acc * int(i64::from(c.hook)))
}

/// `s_λ(1, q^2, q^4, ...) = q^{2b(λ)} / Π (1 - q^{2h})`.
pub fn principal_spec_infinite(lambda: &Partition, q: &Rational) -> Rational {
    let q2 = q * q;
    let num = powi(&q2, b_stat(lambda) as i64);
    let den = hooks(lambda)
        .iter()
        .fold(Rational::one(), |acc, c| acc * (Rational::one() - powi(&q2, i64::from(c.hook))));
    num / den
}

/// `s_λ(1, q^2, ..., q^{2N-2}) = q^{2b(λ)} Π (1 - q^{2(N + c)}) / (1 - q^{2h})`.
///
/// Vanishes when `λ` has more than `N` rows, through the cell of content
/// `-N`.
pub fn principal_spec_finite(lambda: &Partition, n: u64, q: &Rational) -> Rational {
    let q2 = q * q;
    let n = n as i64;
    let mut acc = powi(&q2, b_stat(lambda) as i64);
    for c in hooks(lambda) {
        let f = Rational::one() - powi(&q2, n + c.content);
        if f.is_zero() {
            return f;
        }
        acc *= f / (Rational::one() - powi(&q2, i64::from(c.hook)));
    }
    acc
}

/// Character of the hook `(k - l, 1^l)` on a single `k`-cycle: `(-1)^l`.
pub fn hook_character(k: u32, l: u32) -> QResult<i64> {
    if l >= k {
        return Err(QError::InvalidParameter(format!("hook character needs l < k, got k={k}, l={l}")));
    }
    Ok(if l.is_multiple_of(2) { 1 } else { -1 })
}

/// Expectation of `s_λ` under the q-Laguerre ensemble:
///
/// ```text
/// q^{k(2-2N-α)} / (1-q^2)^k · s_λ(1..q^{2N-2}) s_λ(1..q^{2N+2α-2}) / s_λ(1, q^2, ...)
/// ```
pub fn schur_expectation_qlag(lambda: &Partition, n: u64, alpha: u64, q: &Rational) -> Rational {
    let k = i64::from(lambda.size());
    let fin_n = principal_spec_finite(lambda, n, q);
    if fin_n.is_zero() {
        return fin_n;
    }
    let fin_na = principal_spec_finite(lambda, n + alpha, q);
    let inf = principal_spec_infinite(lambda, q);
    let q2 = q * q;
    let pref = powi(q, k * (2 - 2 * n as i64 - alpha as i64)) / powi(&(Rational::one() - q2), k);
    pref * fin_n * fin_na / inf
}

/// Expectation of `s_λ` under the Laguerre ensemble of size `n`:
/// `H_λ s_λ(1^n) s_λ(1^{n+α})` with `s_λ(1^m) = Π (m + c)/h`.
pub fn schur_expectation_classical(lambda: &Partition, n: u64, alpha: u64) -> Rational {
    let (n, a) = (n as i64, alpha as i64);
    let mut acc = Rational::one();
    for c in hooks(lambda) {
        let h = int(i64::from(c.hook));
        // H_λ contributes h, each specialisation divides by h
        acc *= int(n + c.content) * int(n + a + c.content) / h;
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// `Σ_l (-1)^l E[s_{(k-l,1^l)}]` evaluated by `expect`, i.e. the
/// expectation of the power sum `p_k`.
pub fn power_sum_via_hooks<F>(k: u32, mut expect: F) -> Rational
where
    F: FnMut(&Partition) -> Rational,
{
    let mut total = Rational::zero();
    for l in 0..k {
        let lambda = Partition::hook_shape(k, l).expect("valid hook");
        let chi = hook_character(k, l).expect("valid hook");
        total += int(chi) * expect(&lambda);
    }
    total
}
