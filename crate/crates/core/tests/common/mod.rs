//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here is written from the definitions with plain loops over
//! `BigRational`, deliberately not reusing the library's evaluators.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type R = BigRational;

pub fn r(n: i64, d: i64) -> R {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ri(n: i64) -> R {
    r(n, 1)
}

pub fn pw(x: &R, e: i64) -> R {
    let mut acc = R::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// `(a;q)_n` by multiplying out.
pub fn poch(a: &R, q: &R, n: usize) -> R {
    let mut acc = R::one();
    let mut qi = R::one();
    for _ in 0..n {
        acc *= R::one() - a * &qi;
        qi *= q;
    }
    acc
}

/// Terminating `rφs` summed for `i = 0..=n`, straight from the definition.
pub fn phi_sum(up: &[R], lo: &[R], q: &R, z: &R, n: usize) -> R {
    let e = 1 + lo.len() as i64 - up.len() as i64;
    let mut s = R::zero();
    for i in 0..=n {
        let mut t = R::one();
        for a in up {
            t *= poch(a, q, i);
        }
        for b in lo {
            t /= poch(b, q, i);
        }
        t /= poch(q, q, i);
        t *= pw(z, i as i64);
        let sign = if i % 2 == 0 { R::one() } else { -R::one() };
        let g = sign * pw(q, (i * i.saturating_sub(1) / 2) as i64);
        t *= pw(&g, e);
        s += t;
    }
    s
}

/// Rising factorial `c (c+1) ... (c+n-1)`.
pub fn rising(c: &R, n: usize) -> R {
    let mut acc = R::one();
    for i in 0..n {
        acc *= c + ri(i as i64);
    }
    acc
}

pub fn fact(n: usize) -> R {
    rising(&R::one(), n)
}

/// Terminating `rFs` summed for `i = 0..=n`.
pub fn f_sum(up: &[R], lo: &[R], z: &R, n: usize) -> R {
    let mut s = R::zero();
    for i in 0..=n {
        let mut t = pw(z, i as i64) / fact(i);
        for a in up {
            t *= rising(a, i);
        }
        for b in lo {
            t /= rising(b, i);
        }
        s += t;
    }
    s
}

pub fn qint(n: i64, q: &R) -> R {
    (R::one() - pw(q, n)) / (R::one() - q)
}

pub fn abs(x: &R) -> R {
    if x < &R::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}

/// Every semistandard tableau of shape `parts` with entries `1..=m`,
/// reported as the multiset of entries (row-major).
pub fn ssyt(parts: &[u32], m: u32) -> Vec<Vec<u32>> {
    fn fill(m: u32, cells: &[(usize, usize)], idx: usize, grid: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<u32>>) {
        if idx == cells.len() {
            out.push(grid.iter().flatten().copied().collect());
            return;
        }
        let (i, j) = cells[idx];
        let left = if j > 0 { grid[i][j - 1] } else { 1 };
        let above = if i > 0 { grid[i - 1][j] + 1 } else { 1 };
        for v in left.max(above)..=m {
            grid[i][j] = v;
            fill(m, cells, idx + 1, grid, out);
        }
        grid[i][j] = 0;
    }
    let cells: Vec<(usize, usize)> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
        .collect();
    let mut grid: Vec<Vec<u32>> = parts.iter().map(|&p| vec![0; p as usize]).collect();
    let mut out = Vec::new();
    fill(m, &cells, 0, &mut grid, &mut out);
    out
}

/// `s_λ(1, x, x², ..., x^{m-1})` by tableau enumeration.
pub fn schur_geometric(parts: &[u32], m: u32, x: &R) -> R {
    ssyt(parts, m)
        .into_iter()
        .map(|t| pw(x, t.iter().map(|&v| i64::from(v) - 1).sum()))
        .fold(R::zero(), |a, b| a + b)
}

/// Coefficients (ascending) of the unique polynomial of degree `< xs.len()`
/// through the points `(xs[i], ys[i])`, by Newton divided differences.
pub fn interpolate(xs: &[R], ys: &[R]) -> Vec<R> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // expand Σ dd[i] Π_{m<i} (x - xs[m]) from the innermost term outward
    let mut c = vec![R::zero(); n];
    for i in (0..n).rev() {
        let mut next = vec![R::zero(); n];
        for (d, v) in c.iter().enumerate() {
            if d + 1 < n {
                next[d + 1] += v;
            }
            next[d] -= v * &xs[i];
        }
        next[0] += &dd[i];
        c = next;
    }
    c
}

/// `Σ_{i,j} a_i b_j μ_{i+j}` for a moment sequence `mu`.
pub fn pair_against(a: &[R], b: &[R], mu: &dyn Fn(usize) -> R) -> R {
    let mut s = R::zero();
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            s += ai * bj * mu(i + j);
        }
    }
    s
}

fn cycles(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut c = 0;
    for s in 0..perm.len() {
        if !seen[s] {
            c += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
    }
    c
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn pairings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for j in 1..points.len() {
        let rest: Vec<usize> = points[1..].iter().copied().filter(|&p| p != points[j]).collect();
        for mut m in pairings(&rest) {
            m.push((points[0], points[j]));
            out.push(m);
        }
    }
    out
}

/// `E tr X^{2k} / n` for GUE by Wick's theorem: each pairing `π` of the
/// `2k` half-edges contributes `n^{faces}`, the faces being the cycles of
/// `γ∘π` with `γ` the long cycle.
pub fn gue_by_wick(k: usize, n: i64) -> R {
    if k == 0 {
        return R::one();
    }
    let pts: Vec<usize> = (0..2 * k).collect();
    let mut s = R::zero();
    for m in pairings(&pts) {
        let mut pi = vec![0; 2 * k];
        for (a, b) in m {
            pi[a] = b;
            pi[b] = a;
        }
        let g: Vec<usize> = (0..2 * k).map(|i| (pi[i] + 1) % (2 * k)).collect();
        s += pw(&ri(n), cycles(&g) as i64);
    }
    s / ri(n)
}

/// `E tr W^k / n` for complex Wishart `W = X X*`, `X` of size
/// `n × (n + α)`: `Σ_{σ ∈ S_k} n^{c(σ)} (n+α)^{c(γσ^{-1})}`.
pub fn lue_by_wick(k: usize, n: i64, alpha: i64) -> R {
    let mut s = R::zero();
    for sigma in permutations(k) {
        let mut inv = vec![0; k];
        for (i, &v) in sigma.iter().enumerate() {
            inv[v] = i;
        }
        let g: Vec<usize> = (0..k).map(|i| (inv[i] + 1) % k).collect();
        s += pw(&ri(n), cycles(&sigma) as i64) * pw(&ri(n + alpha), cycles(&g) as i64);
    }
    s / ri(n)
}
