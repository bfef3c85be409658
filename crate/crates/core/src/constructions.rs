//! Explicit systems attaining the maxima, with zero-count certificates.
//!
//! * `tb_maximal`: `F_i = x_{i-1} G` with `G = Π (x_m - λ_k x_0)` over `d-1`
//!   distinct `λ_k`; attains `T_r(d,m)` for `r <= m+1`.
//! * `line_family` (`m = 1`): products of all but one of `d+1` distinct
//!   linear forms; attains `d - r + 1`.
//! * `fermat`: `x_i^q x_j - x_j^q x_i`, which vanish on all of `P^m(F_q)`.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{tb_bound_general, BoundError, BoundParams};
use crate::gf::{Elem, Field, GfError};
use crate::poly::{binom, HomPoly, Monomial, Poly, PolyError, PolyFamily};
use crate::projgeom::{count_proj_zeros, pk, proj_points};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("bad λ values: {0}")]
    BadLambdas(String),
    #[error("degree {d} exceeds q = {q}")]
    DegreeTooLarge { d: u32, q: u64 },
    #[error("only {max} Fermat polynomials exist, asked for {r}")]
    TooMany { r: u64, max: u64 },
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    TbMaximal,
    LineFamily,
    Fermat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    /// The zero count was recomputed point by point.
    Certified,
    /// `P^m(F_q)` is above [`CERT_LIMIT`]; only the formula is reported.
    FormulaOnly,
}

/// Largest `p_m` for which constructions recount their zeros.
pub const CERT_LIMIT: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: ConstructionKind,
    pub params: BoundParams,
    pub rank: usize,
    pub count: Option<u64>,
    #[serde(with = "crate::bigser::one")]
    pub bound: BigUint,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    pub status: CertStatus,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub family: PolyFamily,
    /// The `λ` used by `tb_maximal`; empty otherwise.
    pub lambdas: Vec<Elem>,
    pub certificate: Certificate,
}

fn certify(kind: ConstructionKind, params: BoundParams, family: PolyFamily, bound: BigUint, lambdas: Vec<Elem>) -> Construction {
    let small = pk(params.m as i64, params.q).to_u64().is_some_and(|n| n <= CERT_LIMIT);
    let count = small.then(|| count_proj_zeros(&family).projective);
    let matches = count.map(|c| BigUint::from(c) == bound);
    Construction {
        certificate: Certificate {
            kind,
            params,
            rank: family.rank(),
            count,
            bound,
            matches,
            status: if small {
                CertStatus::Certified
            } else {
                CertStatus::FormulaOnly
            },
        },
        family,
        lambdas,
    }
}

fn field_for(q: u64) -> Result<Arc<Field>, ConstructionError> {
    Ok(Arc::new(Field::new(q)?))
}

/// `x_m - λ x_0` in `m+1` variables.
fn shifted_last(field: &Arc<Field>, m: usize, lambda: Elem) -> HomPoly {
    let mut c = vec![Elem::ZERO; m + 1];
    c[m] = Elem::ONE;
    c[0] = field.add(c[0], field.neg(lambda));
    HomPoly::linear(field.clone(), &c).expect("nonempty")
}

/// `G = Π_k (x_m - λ_k x_0)`, of degree `λ.len()`.
pub fn tb_common_factor(field: &Arc<Field>, m: usize, lambdas: &[Elem]) -> HomPoly {
    let one = HomPoly::new(Poly::one(field.clone(), m + 1), 0).expect("constant");
    lambdas
        .iter()
        .fold(one, |acc, &l| acc.mul(&shifted_last(field, m, l)).expect("same ring"))
}

/// `{x_0 G, ..., x_{r-1} G}`. Default `λ`: the first `d-1` field elements.
pub fn tb_maximal_family(params: &BoundParams, lambdas: Option<&[Elem]>) -> Result<Construction, ConstructionError> {
    params.validate()?;
    let BoundParams { q, d, m, r } = *params;
    if d as u64 > q + 1 {
        return Err(ConstructionError::InvalidParams(format!(
            "needs d <= q+1 (d = {d}, q = {q})"
        )));
    }
    if r as usize > m + 1 {
        return Err(ConstructionError::InvalidParams(format!(
            "needs r <= m+1 (r = {r}, m = {m})"
        )));
    }
    let field = field_for(q)?;
    let lambdas: Vec<Elem> = match lambdas {
        None => field.elements().take(d as usize - 1).collect(),
        Some(ls) => {
            if ls.len() != d as usize - 1 {
                return Err(ConstructionError::BadLambdas(format!(
                    "expected {} values, got {}",
                    d - 1,
                    ls.len()
                )));
            }
            for &l in ls {
                field
                    .check(l)
                    .map_err(|_| ConstructionError::BadLambdas(format!("{} is not in F_{q}", l.index())))?;
            }
            if ls.iter().collect::<HashSet<_>>().len() != ls.len() {
                return Err(ConstructionError::BadLambdas("values must be distinct".into()));
            }
            ls.to_vec()
        }
    };
    let g = tb_common_factor(&field, m, &lambdas);
    let members = (0..r as usize)
        .map(|i| HomPoly::var(field.clone(), m, i).mul(&g))
        .collect::<Result<Vec<_>, _>>()?;
    let family = PolyFamily::new(members)?;
    let bound = tb_bound_general(params)?;
    Ok(certify(ConstructionKind::TbMaximal, *params, family, bound, lambdas))
}

/// The linear forms `L_a = a_1 x_0 - a_0 x_1` vanishing at the points `a` of
/// `P^1(F_q)`, in point order.
pub fn line_forms(field: &Arc<Field>) -> Vec<HomPoly> {
    proj_points(1, field)
        .iter()
        .map(|a| {
            let c = [a.coords()[1], field.neg(a.coords()[0])];
            HomPoly::linear(field.clone(), &c).expect("two coefficients")
        })
        .collect()
}

/// On `P^1`: `F_i = Π_{k != i} L_k` over the first `d+1` forms, `i = 1..r`.
pub fn line_family(q: u64, d: u32, r: u64) -> Result<Construction, ConstructionError> {
    if d as u64 > q {
        return Err(ConstructionError::DegreeTooLarge { d, q });
    }
    let params = BoundParams::new(q, d, 1, r)?;
    let field = field_for(q)?;
    let forms: Vec<HomPoly> = line_forms(&field).into_iter().take(d as usize + 1).collect();
    let members = (0..r as usize)
        .map(|i| {
            let one = HomPoly::new(Poly::one(field.clone(), 2), 0).expect("constant");
            forms
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .try_fold(one, |acc, (_, l)| acc.mul(l))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let family = PolyFamily::new(members)?;
    let bound = tb_bound_general(&params)?;
    Ok(certify(ConstructionKind::LineFamily, params, family, bound, Vec::new()))
}

/// `x_i^q x_j - x_j^q x_i`.
pub fn fermat_polynomial(field: &Arc<Field>, m: usize, i: usize, j: usize) -> HomPoly {
    let q = field.q();
    let mono = |a: usize, b: usize| {
        let mut e = vec![0u32; m + 1];
        e[a] += q;
        e[b] += 1;
        Monomial(e)
    };
    let p = Poly::from_terms(
        field.clone(),
        m + 1,
        [(mono(i, j), Elem::ONE), (mono(j, i), field.neg(Elem::ONE))],
    )
    .expect("well-formed");
    HomPoly::new(p, q + 1).expect("homogeneous")
}

/// The first `r` Fermat polynomials, pairs `(i, j)` with `i < j` in
/// lexicographic order; degree `q+1`, vanishing on all of `P^m(F_q)`.
pub fn fermat_family(q: u64, m: usize, r: u64) -> Result<Construction, ConstructionError> {
    let max = binom(m as u64 + 1, 2) as u64;
    if r == 0 || r > max {
        return Err(ConstructionError::TooMany { r, max });
    }
    let field = field_for(q)?;
    let d = q as u32 + 1;
    let params = BoundParams::new(q, d, m, r)?;
    let members: Vec<HomPoly> = (0..=m)
        .flat_map(|i| (i + 1..=m).map(move |j| (i, j)))
        .take(r as usize)
        .map(|(i, j)| fermat_polynomial(&field, m, i, j))
        .collect();
    let family = PolyFamily::new(members)?;
    let bound = pk(m as i64, q);
    Ok(certify(ConstructionKind::Fermat, params, family, bound, Vec::new()))
}
