//! Closed-form maxima for zero counts of polynomial systems: the
//! Tsfasman–Boguslavsky bound `T_r(d,m)`, the Heijnen–Pellikaan affine bound
//! `H_r(d,m)`, Serre's and Lachaud's bounds, the conjectured value for
//! `r > m+1`, and the dimension of the degree-`d` part of the vanishing ideal
//! of `P^m(F_q)`.
//!
//! Everything is exact (`BigUint` / `BigInt`).

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{prime_power, Field};
use crate::linalg;
use crate::poly::{binom, lambda_nth, monomial_count, monomials_desc_lex, nth_desc_lex, PolyError};
use crate::projgeom::{pk, proj_points, qpow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("r = {r} is outside 1..={len}")]
    IndexOutOfRange { r: u64, len: String },
    #[error("outside the formula's range: {0}")]
    OutOfValidity(String),
    #[error("degree {d} is not below q = {q}")]
    DegreeTooLarge { d: u32, q: u64 },
    #[error("evaluation matrix with {0} entries exceeds the oracle limit")]
    TooLarge(u128),
}

impl From<PolyError> for BoundError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::IndexOutOfRange { r, len } => BoundError::IndexOutOfRange { r, len },
            other => BoundError::InvalidParams(other.to_string()),
        }
    }
}

/// `(q, d, m, r)`: field size, degree, projective dimension, system size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundParams {
    pub q: u64,
    pub d: u32,
    pub m: usize,
    pub r: u64,
}

impl BoundParams {
    /// Checks `q` is a prime power, `d, m >= 1` and `1 <= r <= binom(m+d, d)`.
    pub fn new(q: u64, d: u32, m: usize, r: u64) -> Result<BoundParams, BoundError> {
        let p = BoundParams { q, d, m, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), BoundError> {
        if prime_power(self.q).is_none() {
            return Err(BoundError::NotPrimePower(self.q));
        }
        if self.d == 0 || self.m == 0 {
            return Err(BoundError::InvalidParams(format!(
                "need d >= 1 and m >= 1 (d = {}, m = {})",
                self.d, self.m
            )));
        }
        let len = monomial_count(self.m, self.d);
        if self.r == 0 || self.r as u128 > len {
            return Err(BoundError::IndexOutOfRange {
                r: self.r,
                len: len.to_string(),
            });
        }
        Ok(())
    }

    /// `binom(m+d, d)`, the dimension of `S_d`.
    pub fn ambient_dim(&self) -> u128 {
        monomial_count(self.m, self.d)
    }
}

fn p(k: i64, q: u64) -> BigUint {
    pk(k, q)
}

/// `⌊q^{m-r}⌋` for `1 <= r <= m+1`: `q^{m-r}` when `r <= m`, else 0.
fn floor_term(q: u64, m: usize, r: u64) -> BigUint {
    if r as usize <= m {
        qpow(q, (m - r as usize) as u32)
    } else {
        BigUint::zero()
    }
}

/// `T_r(d,m) = p_{m-2j} + Σ_{i=j}^{m} ν_i (p_{m-i} - p_{m-i-j})`, where `ν`
/// is the `r`-th degree-`d` exponent tuple in descending lexicographic order
/// and `j` the position of its first nonzero entry.
pub fn tb_bound_general(params: &BoundParams) -> Result<BigUint, BoundError> {
    params.validate()?;
    let BoundParams { q, d, m, r } = *params;
    let (nu, j) = nth_desc_lex(m, d, r)?;
    let (m, j) = (m as i64, j as i64);
    let mut total = p(m - 2 * j, q);
    for i in j..=m {
        let nu_i = nu.exps()[(i - 1) as usize];
        if nu_i > 0 {
            total += (p(m - i, q) - p(m - i - j, q)) * nu_i;
        }
    }
    Ok(total)
}

/// `T_r(d,m) = (d-1) q^{m-1} + p_{m-2} + ⌊q^{m-r}⌋`, valid for `d >= 2`
/// and `r <= m+1`.
pub fn tb_bound_explicit(params: &BoundParams) -> Result<BigUint, BoundError> {
    params.validate()?;
    let BoundParams { q, d, m, r } = *params;
    if d < 2 || r as usize > m + 1 {
        return Err(BoundError::OutOfValidity(format!(
            "explicit T_r needs d >= 2 and r <= m+1 (d = {d}, r = {r}, m = {m})"
        )));
    }
    Ok(qpow(q, m as u32 - 1) * (d - 1) + p(m as i64 - 2, q) + floor_term(q, m, r))
}

fn check_affine_degree(q: u64, d: u32) -> Result<(), BoundError> {
    if d as u64 >= q {
        return Err(BoundError::DegreeTooLarge { d, q });
    }
    Ok(())
}

/// `H_r(d,m) = q^m - (1 + Σ_j α_j q^{m-j})`, `α` the `r`-th element of
/// `Λ(d,m)` in ascending lexicographic order. Needs `d < q`.
pub fn hp_bound_general(params: &BoundParams) -> Result<BigUint, BoundError> {
    let BoundParams { q, d, m, r } = *params;
    if prime_power(q).is_none() {
        return Err(BoundError::NotPrimePower(q));
    }
    check_affine_degree(q, d)?;
    if d == 0 || m == 0 {
        return Err(BoundError::InvalidParams("need d >= 1 and m >= 1".into()));
    }
    let alpha = lambda_nth(d, m, q, r)?;
    let mut sub = BigUint::one();
    for (idx, &a) in alpha.iter().enumerate() {
        sub += qpow(q, (m - 1 - idx) as u32) * a;
    }
    Ok(qpow(q, m as u32) - sub)
}

/// `H_r(d,m) = (d-1) q^{m-1} + ⌊q^{m-r}⌋` for `r <= m+1`, `d < q`.
pub fn hp_bound_explicit(params: &BoundParams) -> Result<BigUint, BoundError> {
    let BoundParams { q, d, m, r } = *params;
    if prime_power(q).is_none() {
        return Err(BoundError::NotPrimePower(q));
    }
    if d == 0 || m == 0 || r == 0 || d as u64 >= q || r as usize > m + 1 {
        return Err(BoundError::OutOfValidity(format!(
            "explicit H_r needs 1 <= d < q and 1 <= r <= m+1 (q = {q}, d = {d}, m = {m}, r = {r})"
        )));
    }
    Ok(qpow(q, m as u32 - 1) * (d - 1) + floor_term(q, m, r))
}

/// Serre: a nonzero form of degree `d <= q+1` has at most
/// `d q^{m-1} + p_{m-2}` zeros in `P^m(F_q)`.
pub fn serre_bound(q: u64, d: u32, m: usize) -> BigUint {
    qpow(q, m.saturating_sub(1) as u32) * d + p(m as i64 - 2, q)
}

/// Lachaud: `δ p_n`.
pub fn lachaud_bound(delta: u64, n: i64, q: u64) -> BigUint {
    p(n, q) * delta
}

/// Conjectured maximum for `1 < d < q`, `1 <= r <= binom(m+d-1, m)`:
/// `H_r(d-1, m) + p_{m-1}`.
pub fn conjecture_bound(params: &BoundParams) -> Result<BigUint, BoundError> {
    let BoundParams { q, d, m, r } = *params;
    if prime_power(q).is_none() {
        return Err(BoundError::NotPrimePower(q));
    }
    let len = binom((m as u64) + d as u64 - 1, m as u64);
    if d < 2 || d as u64 >= q || m == 0 || r == 0 || r as u128 > len {
        return Err(BoundError::OutOfValidity(format!(
            "conjectured value needs 1 < d < q and 1 <= r <= binom(m+d-1, m) = {len} (q = {q}, d = {d}, r = {r})"
        )));
    }
    let h = hp_bound_general(&BoundParams { q, d: d - 1, m, r })?;
    Ok(h + p(m as i64 - 1, q))
}

/// Two readings of the binomial in the alternating-sum formula for
/// `dim I_d`. With `A = d + (i+1)(q-1) - jq` the printed term is
/// `binom(A - m, A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexReading {
    /// `binom(A - m, A)` with the generalized convention
    /// `binom(n, k) = n(n-1)...(n-k+1)/k!` (`0` for `k < 0`). Agrees with the
    /// rank oracle at `d = q+1` only.
    AsPrinted,
    /// `binom(A + m, A)`, the number of degree-`A` monomials in `m+1`
    /// variables (`0` for `A < 0`). Agrees with the rank oracle.
    UpperPlusM,
}

/// `n(n-1)...(n-k+1) / k!` for any integer `n`; `0` for `k < 0`.
fn generalized_binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..k {
        num *= BigInt::from(n - t);
        den *= BigInt::from(t + 1);
    }
    num / den
}

/// `Σ_{j=2}^{m+1} (-1)^j binom(m+1, j) Σ_{i=0}^{j-2} B(A_{ij})` with the
/// inner binomial read per `reading`. Needs `d >= q+1`.
pub fn ideal_dim_rd(q: u64, d: u32, m: usize, reading: IndexReading) -> Result<BigInt, BoundError> {
    if prime_power(q).is_none() {
        return Err(BoundError::NotPrimePower(q));
    }
    if (d as u64) < q + 1 {
        return Err(BoundError::OutOfValidity(format!(
            "the ideal-dimension formula needs d >= q+1 (d = {d}, q = {q})"
        )));
    }
    let (q, d, m) = (q as i64, d as i64, m as i64);
    let mut total = BigInt::zero();
    for j in 2..=m + 1 {
        let mut inner = BigInt::zero();
        for i in 0..=j - 2 {
            let a = d + (i + 1) * (q - 1) - j * q;
            inner += match reading {
                IndexReading::AsPrinted => generalized_binom(a - m, a),
                IndexReading::UpperPlusM if a < 0 => BigInt::zero(),
                IndexReading::UpperPlusM => BigInt::from(binom((a + m) as u64, a as u64)),
            };
        }
        let term = BigInt::from(binom(m as u64 + 1, j as u64)) * inner;
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Size cap for [`ideal_dim_oracle`]: `binom(m+d, d) * p_m`.
pub const ORACLE_LIMIT: u128 = 10_000_000;

/// `binom(m+d, d)` minus the rank of the evaluation matrix of all degree-`d`
/// monomials at the normalized points of `P^m(F_q)`.
pub fn ideal_dim_oracle(q: u64, d: u32, m: usize) -> Result<u64, BoundError> {
    let field = Arc::new(Field::new(q).map_err(|_| BoundError::NotPrimePower(q))?);
    let width = monomial_count(m, d);
    let npts = pk(m as i64, q).to_u128().unwrap_or(u128::MAX);
    let size = width.saturating_mul(npts);
    if size > ORACLE_LIMIT {
        return Err(BoundError::TooLarge(size));
    }
    let monos = monomials_desc_lex(m, d);
    let rows: Vec<_> = proj_points(m, &field)
        .iter()
        .map(|pt| monos.iter().map(|mono| mono.eval(&field, pt.coords())).collect::<Vec<_>>())
        .collect();
    Ok((width as u64) - linalg::rank(&field, &rows) as u64)
}

/// Which hypotheses of the closed forms hold for a parameter set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    /// `1 <= d < q-1` and `r <= m+1`: the range where `T_r` is the proven maximum.
    pub tb_theorem: bool,
    /// `d >= 2`, `r <= m+1`: the explicit `T_r` formula applies.
    pub tb_explicit: bool,
    /// `d < q`: the affine bound applies.
    pub hp: bool,
    /// `d <= q+1`: Serre's bound applies.
    pub serre: bool,
    /// `1 < d < q`, `r <= binom(m+d-1, m)`.
    pub conjecture: bool,
    pub notes: Vec<String>,
}

pub fn validity(params: &BoundParams) -> Validity {
    let BoundParams { q, d, m, r } = *params;
    let d64 = d as u64;
    let r_ok = r as usize <= m + 1;
    let tb_theorem = d64 + 1 < q && r_ok;
    let tb_explicit = d >= 2 && r_ok;
    let hp = d64 < q;
    let serre = d64 <= q + 1;
    let conjecture = d >= 2 && d64 < q && r as u128 <= binom(m as u64 + d64 - 1, m as u64);
    let mut notes = Vec::new();
    if d64 + 1 >= q {
        notes.push("TBC hypothesis d < q-1 not met".to_string());
    }
    if !r_ok {
        notes.push("r > m+1: outside the proven range".to_string());
    }
    if !hp {
        notes.push("affine bound needs d < q".to_string());
    }
    if !serre {
        notes.push("Serre bound needs d <= q+1".to_string());
    }
    Validity {
        tb_theorem,
        tb_explicit,
        hp,
        serre,
        conjecture,
        notes,
    }
}

/// All bounds for one parameter set; `None` where a formula does not apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub q: u64,
    pub d: u32,
    pub m: usize,
    pub r: u64,
    #[serde(with = "crate::bigser::opt")]
    pub tb_general: Option<BigUint>,
    #[serde(with = "crate::bigser::opt")]
    pub tb_explicit: Option<BigUint>,
    #[serde(with = "crate::bigser::opt")]
    pub hp: Option<BigUint>,
    #[serde(with = "crate::bigser::one")]
    pub serre: BigUint,
    #[serde(with = "crate::bigser::opt")]
    pub conjecture: Option<BigUint>,
    pub validity: Validity,
}

pub fn bound_row(params: &BoundParams) -> Result<BoundRow, BoundError> {
    params.validate()?;
    Ok(BoundRow {
        q: params.q,
        d: params.d,
        m: params.m,
        r: params.r,
        tb_general: Some(tb_bound_general(params)?),
        tb_explicit: tb_bound_explicit(params).ok(),
        hp: hp_bound_general(params).ok(),
        serre: serre_bound(params.q, params.d, params.m),
        conjecture: conjecture_bound(params).ok(),
        validity: validity(params),
    })
}
