//! Exponent-tuple orderings: degree-`d` monomials in `m+1` variables in
//! descending lexicographic order, and the set `Λ(d,m)` of bounded
//! `m`-tuples in ascending lexicographic order.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Monomial, PolyError};

/// `binom(n, k)`, saturating at `u128::MAX`.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd_u128(acc, den);
        let (a, dd) = (acc / g, den / g);
        let num = num / dd;
        acc = match a.checked_mul(num) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of degree-`d` monomials in `m+1` variables.
pub fn monomial_count(m: usize, d: u32) -> u128 {
    binom(m as u64 + d as u64, d as u64)
}

/// All degree-`d` exponent tuples of length `m+1`, strictly descending in
/// lexicographic order.
pub fn monomials_desc_lex(m: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m + 1];
    fill_desc(&mut out, &mut cur, 0, d);
    out
}

fn fill_desc(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, rem: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = rem;
        out.push(Monomial(cur.clone()));
        return;
    }
    for a in (0..=rem).rev() {
        cur[pos] = a;
        fill_desc(out, cur, pos + 1, rem - a);
    }
    cur[pos] = 0;
}

/// Completions of a tuple: `count` trailing coordinates summing to `rem`.
fn completions(count: usize, rem: u32) -> u128 {
    if count == 0 {
        return u128::from(rem == 0);
    }
    binom(rem as u64 + count as u64 - 1, count as u64 - 1)
}

/// The `r`-th (1-based) degree-`d` tuple in descending lexicographic order,
/// together with `j`, the 1-based position of its first nonzero entry.
pub fn nth_desc_lex(m: usize, d: u32, r: u64) -> Result<(Monomial, usize), PolyError> {
    let len = monomial_count(m, d);
    if r == 0 || r as u128 > len {
        return Err(PolyError::IndexOutOfRange {
            r,
            len: len.to_string(),
        });
    }
    let mut skip = (r - 1) as u128;
    let mut rem = d;
    let mut nu = vec![0u32; m + 1];
    for pos in 0..=m {
        let tail = m - pos;
        let mut a = rem;
        loop {
            let c = completions(tail, rem - a);
            if skip < c {
                break;
            }
            skip -= c;
            // the index is in range, so some a >= 0 absorbs `skip`
            a -= 1;
        }
        nu[pos] = a;
        rem -= a;
    }
    let j = nu.iter().position(|&a| a != 0).map_or(m + 2, |i| i + 1);
    Ok((Monomial(nu), j))
}

/// 0-based position of `exps` in [`monomials_desc_lex`] for its degree.
pub fn desc_lex_rank(exps: &[u32]) -> usize {
    let mut rem: u32 = exps.iter().sum();
    let n = exps.len();
    let mut rank: u128 = 0;
    for (pos, &a) in exps.iter().enumerate().take(n.saturating_sub(1)) {
        let tail = n - 1 - pos;
        for larger in (a + 1)..=rem {
            rank += completions(tail, rem - larger);
        }
        rem -= a;
    }
    rank as usize
}

/// Number of tuples in `[0, q-1]^n` whose sum is at most `t` (inclusion-exclusion).
fn count_sum_at_most(n: usize, t: i64, q: u64) -> BigUint {
    if t < 0 {
        return BigUint::zero();
    }
    let mut total = num_bigint::BigInt::zero();
    for i in 0..=n {
        let top = t - (i as i64) * q as i64;
        if top < 0 {
            break;
        }
        let term = num_bigint::BigInt::from(binom(n as u64, i as u64))
            * num_bigint::BigInt::from(binom(top as u64 + n as u64, n as u64));
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total.to_biguint().expect("count is nonnegative")
}

/// Number of tuples in `[0, q-1]^n` whose sum is at least `s`.
fn count_sum_at_least(n: usize, s: i64, q: u64) -> BigUint {
    let all = BigUint::from(q).pow(n as u32);
    all - count_sum_at_most(n, s - 1, q)
}

/// `|Λ(d,m)|`: `m`-tuples over `[0, q-1]` with sum at least `m(q-1) - d`.
pub fn lambda_len(d: u32, m: usize, q: u64) -> BigUint {
    let threshold = m as i64 * (q as i64 - 1) - d as i64;
    count_sum_at_least(m, threshold, q)
}

/// The `r`-th (1-based) element of `Λ(d,m)` in ascending lexicographic order.
pub fn lambda_nth(d: u32, m: usize, q: u64, r: u64) -> Result<Vec<u32>, PolyError> {
    if d == 0 || d as u64 >= q {
        return Err(PolyError::InvalidParameters(format!(
            "Λ(d,m) needs 1 <= d < q (d = {d}, q = {q})"
        )));
    }
    let len = lambda_len(d, m, q);
    if r == 0 || BigUint::from(r) > len {
        return Err(PolyError::IndexOutOfRange {
            r,
            len: len.to_string(),
        });
    }
    let mut skip = BigUint::from(r - 1);
    let mut need = m as i64 * (q as i64 - 1) - d as i64;
    let mut out = Vec::with_capacity(m);
    for pos in 0..m {
        let tail = m - pos - 1;
        let mut chosen = None;
        for a in 0..q {
            let c = count_sum_at_least(tail, need - a as i64, q);
            if skip < c {
                chosen = Some(a);
                break;
            }
            skip -= c;
        }
        let a = chosen.expect("rank within |Λ|");
        out.push(a as u32);
        need -= a as i64;
    }
    Ok(out)
}
