//! Rational points of `P^m` and `A^m` over `F_q`, zero counting, the
//! Veronese-section view of a polynomial system, and the census of
//! hyperplanes through a point.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Elem, Field};
use crate::linalg;
use crate::poly::{monomials_desc_lex, HomPoly, Monomial, Poly, PolyError, PolyFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("polynomials disagree on field or variable count")]
    MixedParameters,
    #[error("total degree {degree} is not below q = {q}")]
    DegreeTooLarge { degree: u32, q: u32 },
    #[error("family has rank {rank}, expected {r}")]
    RankDeficient { rank: usize, r: usize },
    #[error("the point lies on the linear subspace cut out by the forms")]
    PointOnL,
    #[error("expected linear forms")]
    NotLinear,
    #[error("empty polynomial list")]
    Empty,
    #[error("table with {0} entries is too large")]
    TooLarge(u128),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `p_k = q^k + ... + q + 1` for `k >= 0`, and `0` for `k < 0`.
pub fn pk(k: i64, q: u64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    let mut acc = BigUint::zero();
    for _ in 0..=k {
        acc = acc * q + 1u32;
    }
    acc
}

/// `p_k` as a `u64`, saturating.
pub fn pk_u64(k: i64, q: u64) -> u64 {
    pk(k, q).to_u64().unwrap_or(u64::MAX)
}

/// A point of `P^m(F_q)` whose first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl ProjPoint {
    /// Normalizes a nonzero vector; `None` for the zero vector.
    pub fn normalize(field: &Field, v: &[Elem]) -> Option<ProjPoint> {
        let lead = *v.iter().find(|x| !x.is_zero())?;
        let inv = field.inv(lead).expect("nonzero");
        Some(ProjPoint {
            coords: v.iter().map(|&x| field.mul(x, inv)).collect(),
        })
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn m(&self) -> usize {
        self.coords.len() - 1
    }

    /// The linear form with this point's coordinates as coefficients.
    pub fn as_linear_form(&self, field: Arc<Field>) -> HomPoly {
        HomPoly::linear(field, &self.coords).expect("at least one coordinate")
    }
}

/// The normalized coefficient vector of a nonzero linear form: its point in
/// the dual projective space.
pub fn dual_point(form: &HomPoly) -> Option<ProjPoint> {
    if form.degree() != 1 {
        return None;
    }
    ProjPoint::normalize(form.field(), &form.coeffs())
}

/// All `q^n` vectors of `F_q^n` in lexicographic index order.
pub fn affine_points(n: usize, field: &Field) -> Vec<Vec<Elem>> {
    let q = field.q() as usize;
    let total = q.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![Elem::ZERO; n];
    for _ in 0..total {
        out.push(cur.clone());
        for i in (0..n).rev() {
            let next = cur[i].index() + 1;
            if next < q {
                cur[i] = field.elem(next as u64).expect("in range");
                break;
            }
            cur[i] = Elem::ZERO;
        }
    }
    out
}

/// The `p_m` points of `P^m(F_q)`, ordered by the position of the first
/// nonzero coordinate and then lexicographically on the tail. The first
/// `q^m` points are the affine chart `x0 = 1`.
pub fn proj_points(m: usize, field: &Field) -> Vec<ProjPoint> {
    let mut out = Vec::new();
    for lead in 0..=m {
        for tail in affine_points(m - lead, field) {
            let mut coords = vec![Elem::ZERO; lead];
            coords.push(Elem::ONE);
            coords.extend(tail);
            out.push(ProjPoint { coords });
        }
    }
    out
}

/// Common zeros of a projective family, split along the hyperplane `x0 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub projective: u64,
    pub at_infinity: u64,
    pub affine: u64,
}

const PAR_THRESHOLD: usize = 4096;

fn vanishes_all(members: &[HomPoly], pt: &[Elem]) -> bool {
    members.iter().all(|f| f.poly().eval_unchecked(pt).is_zero())
}

/// Counts the points of `P^m(F_q)` where every member vanishes.
pub fn count_proj_zeros(family: &PolyFamily) -> ZeroCount {
    let field = family.field();
    let pts = proj_points(family.m(), field);
    let members = family.members();
    let tally = |p: &ProjPoint| -> (u64, u64) {
        if vanishes_all(members, &p.coords) {
            if p.coords[0].is_zero() {
                (0, 1)
            } else {
                (1, 0)
            }
        } else {
            (0, 0)
        }
    };
    let (affine, at_infinity) = if pts.len() >= PAR_THRESHOLD {
        pts.par_iter().map(tally).reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    } else {
        pts.iter().map(tally).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    ZeroCount {
        projective: affine + at_infinity,
        at_infinity,
        affine,
    }
}

fn check_affine(polys: &[Poly]) -> Result<(&Arc<Field>, usize), GeomError> {
    let first = polys.first().ok_or(GeomError::Empty)?;
    let (field, n) = (first.field(), first.nvars());
    if polys.iter().any(|p| p.field().q() != field.q() || p.nvars() != n) {
        return Err(GeomError::MixedParameters);
    }
    Ok((field, n))
}

/// Common zeros in `A^n(F_q)` of polynomials of total degree below `q`.
pub fn count_affine_zeros(polys: &[Poly]) -> Result<u64, GeomError> {
    let (field, _) = check_affine(polys)?;
    if let Some(degree) = polys.iter().filter_map(Poly::total_degree).find(|&d| d >= field.q()) {
        return Err(GeomError::DegreeTooLarge {
            degree,
            q: field.q(),
        });
    }
    count_affine_zeros_any_degree(polys)
}

/// Same count without the degree precondition.
pub(crate) fn count_affine_zeros_any_degree(polys: &[Poly]) -> Result<u64, GeomError> {
    let (field, n) = check_affine(polys)?;
    let pts = affine_points(n, field);
    let hit = |pt: &Vec<Elem>| polys.iter().all(|f| f.eval_unchecked(pt).is_zero());
    Ok(if pts.len() >= PAR_THRESHOLD {
        pts.par_iter().filter(|p| hit(p)).count() as u64
    } else {
        pts.iter().filter(|p| hit(p)).count() as u64
    })
}

/// `f(1, x1, ..., xm)`, a polynomial in `x1..xm`.
pub fn dehomogenize(f: &HomPoly) -> Poly {
    f.poly().substitute(0, Elem::ONE).drop_var(0).with_var_base(1)
}

/// `x0^d f(x1/x0, ..., xm/x0)` for a polynomial `f` in `x1..xm` of degree
/// at most `d`.
pub fn homogenize(f: &Poly, d: u32) -> Result<HomPoly, GeomError> {
    if let Some(deg) = f.total_degree() {
        if deg > d {
            return Err(GeomError::Poly(PolyError::NotHomogeneous(d)));
        }
    }
    let terms = f.terms().map(|(mono, c)| {
        let mut e = Vec::with_capacity(mono.exps().len() + 1);
        e.push(d - mono.degree());
        e.extend_from_slice(mono.exps());
        (Monomial(e), c)
    });
    let p = Poly::from_terms(f.field().clone(), f.nvars() + 1, terms)?;
    Ok(HomPoly::new(p, d)?)
}

/// Counts the rational points of the Veronese variety `V_{m,d}` lying in
/// the codimension-`r` linear subspace whose equations are the family's
/// coefficient vectors.
pub fn veronese_section_count(family: &PolyFamily) -> Result<u64, GeomError> {
    if !family.is_independent() {
        return Err(GeomError::RankDeficient {
            rank: family.rank(),
            r: family.len(),
        });
    }
    let field = family.field();
    let monos = monomials_desc_lex(family.m(), family.degree());
    let equations = family.coeff_rows();
    let mut section: HashSet<ProjPoint> = HashSet::new();
    for p in proj_points(family.m(), field) {
        let image: Vec<Elem> = monos.iter().map(|mono| mono.eval(field, &p.coords)).collect();
        let on_subspace = equations.iter().all(|row| {
            row.iter()
                .zip(&image)
                .fold(Elem::ZERO, |s, (&a, &b)| field.add(s, field.mul(a, b)))
                .is_zero()
        });
        if on_subspace {
            section.insert(ProjPoint::normalize(field, &image).expect("some monomial is nonzero"));
        }
    }
    Ok(section.len() as u64)
}

/// For independent linear forms cutting out `L` and a point `P` off `L`,
/// tallies the hyperplanes `Π ∋ P` by `codim_Π(L ∩ Π)`: returns the number
/// with codimension `r-1` and the number with codimension `r`.
pub fn hyperplane_codim_census(forms: &[HomPoly], point: &ProjPoint) -> Result<(u64, u64), GeomError> {
    let first = forms.first().ok_or(GeomError::Empty)?;
    if forms.iter().any(|f| f.degree() != 1) {
        return Err(GeomError::NotLinear);
    }
    let family = PolyFamily::new(forms.to_vec())?;
    if !family.is_independent() {
        return Err(GeomError::RankDeficient {
            rank: family.rank(),
            r: forms.len(),
        });
    }
    let field = first.field();
    let m = first.m();
    if point.m() != m {
        return Err(GeomError::MixedParameters);
    }
    if vanishes_all(forms, &point.coords) {
        return Err(GeomError::PointOnL);
    }
    let r = forms.len();
    let rows = family.coeff_rows();
    let (mut low, mut high) = (0u64, 0u64);
    for h in proj_points(m, field) {
        let through_p = h
            .coords
            .iter()
            .zip(&point.coords)
            .fold(Elem::ZERO, |s, (&a, &b)| field.add(s, field.mul(a, b)))
            .is_zero();
        if !through_p {
            continue;
        }
        let mut with_h = rows.clone();
        with_h.push(h.coords.clone());
        // L ∩ Π = V(forms, h) has codimension rank(forms, h) in P^m, one less in Π
        let codim_in_pi = linalg::rank(field, &with_h) - 1;
        if codim_in_pi + 1 == r {
            low += 1;
        } else {
            debug_assert_eq!(codim_in_pi, r);
            high += 1;
        }
    }
    Ok((low, high))
}

/// Values of a fixed list of monomials at a fixed list of points, stored
/// point-major as raw element indices.
#[derive(Clone, Debug)]
pub struct EvalTable {
    field: Arc<Field>,
    npoints: usize,
    width: usize,
    values: Vec<u16>,
    at_infinity: Vec<bool>,
}

/// Largest table the constructors will build.
pub const EVAL_TABLE_LIMIT: u128 = 1 << 28;

impl EvalTable {
    fn build(field: Arc<Field>, points: &[Vec<Elem>], monos: &[Monomial], at_infinity: Vec<bool>) -> Result<EvalTable, GeomError> {
        let size = points.len() as u128 * monos.len() as u128;
        if size > EVAL_TABLE_LIMIT {
            return Err(GeomError::TooLarge(size));
        }
        let mut values = Vec::with_capacity(size as usize);
        for p in points {
            values.extend(monos.iter().map(|mono| mono.eval(&field, p).raw()));
        }
        Ok(EvalTable {
            field,
            npoints: points.len(),
            width: monos.len(),
            values,
            at_infinity,
        })
    }

    /// Degree-`d` monomials of `x0..xm` (descending lexicographic order) at
    /// the points of `P^m(F_q)` in [`proj_points`] order.
    pub fn projective(field: Arc<Field>, m: usize, d: u32) -> Result<EvalTable, GeomError> {
        let pts: Vec<Vec<Elem>> = proj_points(m, &field).into_iter().map(|p| p.coords).collect();
        let inf = pts.iter().map(|p| p[0].is_zero()).collect();
        EvalTable::build(field, &pts, &monomials_desc_lex(m, d), inf)
    }

    /// The monomials of degree at most `d` in `x1..xm`, listed as the
    /// dehomogenized degree-`d` monomials of `x0..xm`, at the points of
    /// `A^m(F_q)`.
    pub fn affine(field: Arc<Field>, m: usize, d: u32) -> Result<EvalTable, GeomError> {
        let pts: Vec<Vec<Elem>> = affine_points(m, &field)
            .into_iter()
            .map(|a| {
                let mut v = vec![Elem::ONE];
                v.extend(a);
                v
            })
            .collect();
        let inf = vec![false; pts.len()];
        EvalTable::build(field, &pts, &monomials_desc_lex(m, d), inf)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    /// Number of monomials.
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn row(&self, point: usize) -> &[u16] {
        &self.values[point * self.width..(point + 1) * self.width]
    }

    #[inline]
    pub fn at_infinity(&self, point: usize) -> bool {
        self.at_infinity[point]
    }

    /// Value at a point of the polynomial with the given dense coefficients.
    #[inline]
    pub fn eval(&self, point: usize, coeffs: &[Elem]) -> Elem {
        let f = &*self.field;
        self.row(point)
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .fold(Elem::ZERO, |s, (&v, &c)| f.add(s, f.mul(Elem::from_raw(v), c)))
    }

    /// Common zeros of the polynomials with the given dense coefficient rows.
    pub fn count_zeros(&self, rows: &[Vec<Elem>]) -> u64 {
        (0..self.npoints)
            .filter(|&p| rows.iter().all(|c| self.eval(p, c).is_zero()))
            .count() as u64
    }
}

/// `|P^m(F_q)|` for sizing decisions, as a `u128`.
pub fn proj_point_count(m: usize, q: u64) -> u128 {
    pk(m as i64, q).to_u128().unwrap_or(u128::MAX)
}

/// `q^k` as a big integer.
pub fn qpow(q: u64, k: u32) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}
