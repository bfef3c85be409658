//! Canonical enumeration of the `r`-dimensional subspaces of `F_q^M` by their
//! reduced row echelon bases.
//!
//! Pivot-column sets come in lexicographic order; for a fixed pivot set the
//! free entries (row by row, left to right) run as an odometer with the last
//! entry fastest. Position `t` within a pivot set is the odometer reading
//! `t` written in base `q`.

use num_bigint::BigUint;
use num_traits::One;

use crate::gf::Elem;

/// `[M choose r]_q = Π_{i<r} (q^{M-i} - 1) / (q^{r-i} - 1)`.
pub fn gaussian_binomial(big_m: usize, r: usize, q: u64) -> BigUint {
    if r > big_m {
        return BigUint::default();
    }
    let qp = |k: usize| num_traits::pow(BigUint::from(q), k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        num *= qp(big_m - i) - 1u32;
        den *= qp(r - i) - 1u32;
    }
    num / den
}

/// Positions `(row, col)` that are free in the RREF with these pivots.
pub(crate) fn free_positions(big_m: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in p + 1..big_m {
            if !pivots.contains(&c) {
                out.push((i, c));
            }
        }
    }
    out
}

/// Advances `comb` (strictly increasing, values `< n`) to the next
/// combination in lexicographic order.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let r = comb.len();
    for i in (0..r).rev() {
        if comb[i] < n - r + i {
            comb[i] += 1;
            for j in i + 1..r {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The RREF matrix for a pivot set at a given odometer position, with its
/// odometer state, stepping through consecutive positions.
#[derive(Clone, Debug)]
pub(crate) struct Cursor {
    q: u16,
    free: Vec<(usize, usize)>,
    digits: Vec<u16>,
    rows: Vec<Vec<Elem>>,
}

impl Cursor {
    pub(crate) fn new(q: u64, big_m: usize, pivots: &[usize], position: u128) -> Cursor {
        let free = free_positions(big_m, pivots);
        let mut rows = vec![vec![Elem::ZERO; big_m]; pivots.len()];
        for (row, &p) in rows.iter_mut().zip(pivots) {
            row[p] = Elem::ONE;
        }
        let mut digits = vec![0u16; free.len()];
        let mut t = position;
        for (slot, &(i, c)) in digits.iter_mut().zip(&free).rev() {
            let dgt = (t % q as u128) as u16;
            t /= q as u128;
            *slot = dgt;
            rows[i][c] = Elem::from_raw(dgt);
        }
        Cursor { q: q as u16, free, digits, rows }
    }

    pub(crate) fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Moves to the next odometer position; returns the index of the
    /// leftmost digit that changed, or `None` after wrapping.
    pub(crate) fn advance(&mut self) -> Option<usize> {
        for k in (0..self.free.len()).rev() {
            let (i, c) = self.free[k];
            let next = self.digits[k] + 1;
            if next < self.q {
                self.digits[k] = next;
                self.rows[i][c] = Elem::from_raw(next);
                return Some(k);
            }
            self.digits[k] = 0;
            self.rows[i][c] = Elem::ZERO;
        }
        None
    }
}

/// Every `r`-dimensional subspace of `F_q^M` once, as its RREF basis.
#[derive(Clone, Debug)]
pub struct SubspaceIter {
    q: u64,
    big_m: usize,
    pivots: Vec<usize>,
    cursor: Option<Cursor>,
    done: bool,
}

impl SubspaceIter {
    pub fn new(big_m: usize, r: usize, q: u64) -> SubspaceIter {
        let valid = r >= 1 && r <= big_m && q >= 2;
        let pivots: Vec<usize> = (0..r).collect();
        SubspaceIter {
            q,
            big_m,
            cursor: valid.then(|| Cursor::new(q, big_m, &pivots, 0)),
            pivots,
            done: !valid,
        }
    }

    /// Current pivot columns.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

impl Iterator for SubspaceIter {
    type Item = Vec<Vec<Elem>>;

    fn next(&mut self) -> Option<Vec<Vec<Elem>>> {
        if self.done {
            return None;
        }
        let cursor = self.cursor.as_mut()?;
        let out = cursor.rows().to_vec();
        if cursor.advance().is_none() {
            if next_combination(&mut self.pivots, self.big_m) {
                self.cursor = Some(Cursor::new(self.q, self.big_m, &self.pivots, 0));
            } else {
                self.done = true;
            }
        }
        Some(out)
    }
}

/// The subspace iterator over `F_q^M` for `1 <= r <= M`.
pub fn enumerate_subspaces(big_m: usize, r: usize, q: u64) -> SubspaceIter {
    SubspaceIter::new(big_m, r, q)
}
