//! Multivariate gcd by recursive content / primitive-part reduction.
//!
//! A polynomial is viewed in its highest occurring variable `v` with
//! coefficients in `F_q[x_0, ..., x_{v-1}]`. The gcd is the gcd of the
//! contents times the primitive part of the last nonzero term of a
//! primitive pseudo-remainder sequence.

use std::collections::BTreeMap;

use super::{HomPoly, Monomial, Poly, PolyError};
use crate::gf::{Elem, Field};

/// Normalized gcd of two polynomials (leading coefficient 1 under
/// lexicographic order).
pub fn gcd_poly(f: &Poly, g: &Poly) -> Result<Poly, PolyError> {
    f.compatible(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    Ok(gcd_rec(f, g, f.nvars()).with_var_base(f.var_base()))
}

/// Normalized gcd of two homogeneous polynomials; homogeneous itself.
pub fn gcd(f: &HomPoly, g: &HomPoly) -> Result<HomPoly, PolyError> {
    let h = gcd_poly(f.poly(), g.poly())?;
    let d = h.total_degree().unwrap_or(0);
    HomPoly::new(h, d)
}

/// Left fold of pairwise gcds. A degree-0 result means the members are
/// coprime.
pub fn gcd_many(family: &[HomPoly]) -> Result<HomPoly, PolyError> {
    let mut nonzero = family.iter().filter(|f| !f.is_zero());
    let first = nonzero.next().ok_or(if family.is_empty() {
        PolyError::EmptyFamily
    } else {
        PolyError::AllZero
    })?;
    let mut acc = first.monic();
    for f in nonzero {
        if acc.degree() == 0 {
            break;
        }
        acc = gcd(&acc, f)?;
    }
    Ok(acc)
}

/// gcd of polynomials involving only variables `< k`.
fn gcd_rec(f: &Poly, g: &Poly, k: usize) -> Poly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let v = match (0..k).rev().find(|&v| f.degree_in(v) > 0 || g.degree_in(v) > 0) {
        Some(v) => v,
        None => return Poly::one(f.field().clone(), f.nvars()),
    };
    let cf = content(f, v);
    let cg = content(g, v);
    let c = gcd_rec(&cf, &cg, v);

    let mut a = f.divide_exact(&cf).expect("content divides");
    let mut b = g.divide_exact(&cg).expect("content divides");
    if coprime_in(&a, &b, v) {
        return c.monic();
    }
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = prem(&a, &b, v);
        a = b;
        b = if r.is_zero() { r } else { primitive_part(&r, v) };
    }
    let pa = primitive_part(&a, v);
    c.mul(&pa).expect("same ring").monic()
}

/// Specializations tried by [`coprime_in`] before falling back to the
/// pseudo-remainder sequence.
const SPECIALIZATIONS: u64 = 24;

/// `f(a, x_v)` as dense coefficients in `x_v`, for `f` in `x_0..x_v`.
fn specialize(f: &Poly, v: usize, a: &[Elem]) -> Vec<Elem> {
    let field = f.field();
    let mut out = vec![Elem::ZERO; f.degree_in(v) as usize + 1];
    for (m, c) in f.terms() {
        let val = a
            .iter()
            .zip(m.exps())
            .fold(c, |acc, (&x, &e)| field.mul(acc, field.pow(x, e as u64)));
        let k = m.exps()[v] as usize;
        out[k] = field.add(out[k], val);
    }
    out
}

fn trim(p: &mut Vec<Elem>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of the gcd of two nonzero univariate polynomials.
fn univariate_gcd_degree(field: &Field, mut a: Vec<Elem>, mut b: Vec<Elem>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = field.inv(*b.last().unwrap()).expect("trimmed");
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let t = field.mul(*a.last().unwrap(), inv);
            for (i, &bc) in b.iter().enumerate() {
                a[shift + i] = field.sub(a[shift + i], field.mul(t, bc));
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Cheap certificate that `a` and `b` share no factor involving `x_v`: a
/// common factor `h` specializes at any `x_{<v} = s` with `lc_v(a)(s) != 0`
/// to a common factor of the same `x_v`-degree. `false` means unknown.
fn coprime_in(a: &Poly, b: &Poly, v: usize) -> bool {
    if a.degree_in(v) == 0 || b.degree_in(v) == 0 {
        return true;
    }
    let field = a.field();
    let q = field.order() as u64;
    let total = (q as u128).saturating_pow(v as u32);
    let tries = (SPECIALIZATIONS as u128).min(total) as u64;
    let mut s = vec![Elem::ZERO; v];
    for k in 0..tries {
        // spread the tried points over F_q^v
        let mut t = (k as u128 * 0x9e37_79b9 + 1) % total.max(1);
        for x in s.iter_mut() {
            *x = Elem::from_raw((t % q as u128) as u16);
            t /= q as u128;
        }
        let sa = specialize(a, v, &s);
        if sa.last().is_some_and(|c| c.is_zero()) {
            continue;
        }
        if univariate_gcd_degree(field, sa, specialize(b, v, &s)) == 0 {
            return true;
        }
    }
    false
}

/// Coefficients of `f` as a polynomial in `x_v`.
fn coeffs_in(f: &Poly, v: usize) -> BTreeMap<u32, Poly> {
    let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut e = m.clone();
        let k = e.0[v];
        e.0[v] = 0;
        out.entry(k)
            .or_insert_with(|| Poly::zero(f.field().clone(), f.nvars()))
            .add_term(e, c);
    }
    out
}

/// gcd of the coefficients of `f` in `x_v`; `f` involves no variable above `v`.
fn content(f: &Poly, v: usize) -> Poly {
    let mut acc: Option<Poly> = None;
    for c in coeffs_in(f, v).into_values() {
        acc = Some(match acc {
            None => c.monic(),
            Some(a) => gcd_rec(&a, &c, v),
        });
        if acc.as_ref().is_some_and(|a| a.total_degree() == Some(0)) {
            break;
        }
    }
    acc.unwrap_or_else(|| Poly::zero(f.field().clone(), f.nvars()))
}

fn primitive_part(f: &Poly, v: usize) -> Poly {
    let c = content(f, v);
    f.divide_exact(&c).expect("content divides")
}

fn var_power(f: &Poly, v: usize, e: u32) -> Monomial {
    let mut m = Monomial::one(f.nvars());
    m.0[v] = e;
    m
}

/// Pseudo-remainder of `a` by `b` in `x_v`.
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lb = coeffs_in(b, v).remove(&db).expect("leading coefficient");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = coeffs_in(&r, v).remove(&dr).expect("leading coefficient");
        let shift = Poly::from_terms(
            r.field().clone(),
            r.nvars(),
            [(var_power(&r, v, dr - db), crate::gf::Elem::ONE)],
        )
        .expect("well-formed monomial");
        let t = lr.mul(&shift).and_then(|t| t.mul(b)).expect("same ring");
        r = lb.mul(&r).and_then(|x| x.sub(&t)).expect("same ring");
    }
    r
}
