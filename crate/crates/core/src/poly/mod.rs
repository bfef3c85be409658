//! Sparse multivariate polynomials over `F_q`, homogeneous forms and
//! polynomial families.

mod gcd;
pub mod order;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Elem, Field, GfError};
use crate::linalg;

pub use gcd::{gcd, gcd_many, gcd_poly};
pub use order::{
    binom, desc_lex_rank, lambda_len, lambda_nth, monomial_count, monomials_desc_lex, nth_desc_lex,
};
pub use text::{format_family, parse_family, parse_hom_poly, parse_poly, FamilyFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operands live over different fields (F_{0} vs F_{1})")]
    FieldMismatch(u32, u32),
    #[error("family members disagree on field, variable count or degree")]
    MixedParameters,
    #[error("expected {expected} variables, found {found}")]
    VariableCount { expected: usize, found: usize },
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(u32),
    #[error("index {r} is outside 1..={len}")]
    IndexOutOfRange { r: u64, len: String },
    #[error("not divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("every member of the family is zero")]
    AllZero,
    #[error("empty family")]
    EmptyFamily,
    #[error("{0}")]
    InvalidParameters(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// An exponent vector. The derived order is lexicographic with the first
/// variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Monomial(v)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    /// Value at a point; exponentiation through `Field::pow`.
    pub fn eval(&self, field: &Field, point: &[Elem]) -> Elem {
        self.0
            .iter()
            .zip(point)
            .fold(Elem::ONE, |acc, (&a, &x)| field.mul(acc, field.pow(x, a as u64)))
    }
}

/// A sparse polynomial in `nvars` variables. Variables print as
/// `x{var_base}`, `x{var_base+1}`, ...; affine polynomials obtained by
/// setting `x0 = 1` use `var_base = 1`.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    nvars: usize,
    var_base: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.q() == other.field.q() && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.field.q(), self)
    }
}

impl Poly {
    pub fn zero(field: Arc<Field>, nvars: usize) -> Poly {
        Poly {
            field,
            nvars,
            var_base: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Arc<Field>, nvars: usize, c: Elem) -> Poly {
        let mut p = Poly::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: Arc<Field>, nvars: usize) -> Poly {
        Poly::constant(field, nvars, Elem::ONE)
    }

    pub fn var(field: Arc<Field>, nvars: usize, i: usize) -> Poly {
        let mut p = Poly::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), Elem::ONE);
        p
    }

    pub fn from_terms(
        field: Arc<Field>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Elem)>,
    ) -> Result<Poly, PolyError> {
        let mut p = Poly::zero(field, nvars);
        for (mono, c) in terms {
            if mono.0.len() != nvars {
                return Err(PolyError::VariableCount {
                    expected: nvars,
                    found: mono.0.len(),
                });
            }
            p.field.check(c)?;
            p.add_term(mono, c);
        }
        Ok(p)
    }

    pub(crate) fn with_var_base(mut self, base: usize) -> Poly {
        self.var_base = base;
        self
    }

    pub fn var_base(&self) -> usize {
        self.var_base
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, Elem)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &Monomial) -> Elem {
        self.terms.get(mono).copied().unwrap_or(Elem::ZERO)
    }

    /// Leading term under lexicographic order (first variable most significant).
    pub fn leading(&self) -> Option<(&Monomial, Elem)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    fn add_term(&mut self, mono: Monomial, c: Elem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn compatible(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field.q() != other.field.q() {
            return Err(PolyError::FieldMismatch(self.field.q(), other.field.q()));
        }
        if self.nvars != other.nvars {
            return Err(PolyError::VariableCount {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.field.neg(Elem::ONE))
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let mut out = Poly::zero(self.field.clone(), self.nvars).with_var_base(self.var_base);
        if c.is_zero() {
            return out;
        }
        for (m, &a) in &self.terms {
            out.terms.insert(m.clone(), self.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.compatible(other)?;
        let mut out = Poly::zero(self.field.clone(), self.nvars).with_var_base(self.var_base);
        for (ma, &a) in &self.terms {
            for (mb, &b) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(a, b));
            }
        }
        Ok(out)
    }

    /// `self - c * mono * g`, in place.
    fn sub_scaled(&mut self, g: &Poly, mono: &Monomial, c: Elem) {
        let nc = self.field.neg(c);
        for (mg, &b) in &g.terms {
            let t = self.field.mul(b, nc);
            self.add_term(mono.mul(mg), t);
        }
    }

    /// Scales so that the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Elem, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::VariableCount {
                expected: self.nvars,
                found: point.len(),
            });
        }
        for &x in point {
            self.field.check(x)?;
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Elem]) -> Elem {
        let f = &*self.field;
        self.terms
            .iter()
            .fold(Elem::ZERO, |acc, (m, &c)| f.add(acc, f.mul(c, m.eval(f, point))))
    }

    /// Exact quotient `self / g`, or `NotDivisible`.
    pub fn divide_exact(&self, g: &Poly) -> Result<Poly, PolyError> {
        self.compatible(g)?;
        let (lm_g, lc_g) = match g.leading() {
            None => return Err(PolyError::DivisionByZeroPoly),
            Some((m, c)) => (m.clone(), c),
        };
        let inv = self.field.inv(lc_g)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.field.clone(), self.nvars).with_var_base(self.var_base);
        while let Some((lm, lc)) = rem.leading() {
            if !lm_g.divides(lm) {
                return Err(PolyError::NotDivisible);
            }
            let t = lm_g.quotient_of(lm);
            let c = self.field.mul(lc, inv);
            rem.sub_scaled(g, &t, c);
            quot.add_term(t, c);
        }
        Ok(quot)
    }

    /// Substitutes `x_v = value`, keeping the variable count.
    pub fn substitute(&self, v: usize, value: Elem) -> Poly {
        let mut out = Poly::zero(self.field.clone(), self.nvars).with_var_base(self.var_base);
        for (m, &c) in &self.terms {
            let mut e = m.clone();
            let k = e.0[v];
            e.0[v] = 0;
            out.add_term(e, self.field.mul(c, self.field.pow(value, k as u64)));
        }
        out
    }

    /// Drops variable `v`, which must not occur.
    pub(crate) fn drop_var(&self, v: usize) -> Poly {
        debug_assert_eq!(self.degree_in(v), 0);
        let mut out = Poly::zero(self.field.clone(), self.nvars - 1);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(v);
            out.terms.insert(Monomial(e), c);
        }
        out
    }
}

/// A homogeneous polynomial of declared degree `d` in `m+1` variables.
/// The zero polynomial keeps its ambient `(m, d)`.
#[derive(Clone, PartialEq, Eq)]
pub struct HomPoly {
    poly: Poly,
    degree: u32,
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomPoly[F_{}, m={}, d={}]({})", self.field().q(), self.m(), self.degree, self.poly)
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

impl HomPoly {
    pub fn new(poly: Poly, degree: u32) -> Result<HomPoly, PolyError> {
        if poly.terms.keys().any(|m| m.degree() != degree) {
            return Err(PolyError::NotHomogeneous(degree));
        }
        Ok(HomPoly {
            poly: poly.with_var_base(0),
            degree,
        })
    }

    /// Wraps a nonzero homogeneous polynomial, reading its degree off the terms.
    pub fn from_poly(poly: Poly) -> Result<HomPoly, PolyError> {
        let d = poly.total_degree().ok_or(PolyError::AllZero)?;
        HomPoly::new(poly, d)
    }

    pub fn zero(field: Arc<Field>, m: usize, d: u32) -> HomPoly {
        HomPoly {
            poly: Poly::zero(field, m + 1),
            degree: d,
        }
    }

    pub fn var(field: Arc<Field>, m: usize, i: usize) -> HomPoly {
        HomPoly {
            poly: Poly::var(field, m + 1, i),
            degree: 1,
        }
    }

    /// Builds from a dense coefficient vector indexed like [`monomials_desc_lex`].
    pub fn from_coeffs(field: Arc<Field>, m: usize, d: u32, coeffs: &[Elem]) -> Result<HomPoly, PolyError> {
        let monos = monomials_desc_lex(m, d);
        if coeffs.len() != monos.len() {
            return Err(PolyError::InvalidParameters(format!(
                "expected {} coefficients, found {}",
                monos.len(),
                coeffs.len()
            )));
        }
        let poly = Poly::from_terms(field, m + 1, monos.into_iter().zip(coeffs.iter().copied()))?;
        Ok(HomPoly { poly, degree: d })
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(field: Arc<Field>, coeffs: &[Elem]) -> Result<HomPoly, PolyError> {
        let m = coeffs.len().checked_sub(1).ok_or(PolyError::EmptyFamily)?;
        HomPoly::from_coeffs(field, m, 1, coeffs)
    }

    /// Dense coefficient vector in descending lexicographic monomial order.
    pub fn coeffs(&self) -> Vec<Elem> {
        let n = monomial_count(self.m(), self.degree) as usize;
        let mut v = vec![Elem::ZERO; n];
        for (mono, c) in self.poly.terms() {
            v[desc_lex_rank(&mono.0)] = c;
        }
        v
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.poly.field
    }

    pub fn m(&self) -> usize {
        self.poly.nvars - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Elem, PolyError> {
        self.poly.eval(point)
    }

    pub fn mul(&self, other: &HomPoly) -> Result<HomPoly, PolyError> {
        Ok(HomPoly {
            poly: self.poly.mul(&other.poly)?,
            degree: self.degree + other.degree,
        })
    }

    pub fn add(&self, other: &HomPoly) -> Result<HomPoly, PolyError> {
        if self.degree != other.degree {
            return Err(PolyError::MixedParameters);
        }
        Ok(HomPoly {
            poly: self.poly.add(&other.poly)?,
            degree: self.degree,
        })
    }

    pub fn scale(&self, c: Elem) -> HomPoly {
        HomPoly {
            poly: self.poly.scale(c),
            degree: self.degree,
        }
    }

    pub fn monic(&self) -> HomPoly {
        HomPoly {
            poly: self.poly.monic(),
            degree: self.degree,
        }
    }

    /// Exact quotient `self / g`.
    pub fn divide_exact(&self, g: &HomPoly) -> Result<HomPoly, PolyError> {
        let q = self.poly.divide_exact(&g.poly)?;
        let degree = if q.is_zero() {
            self.degree.saturating_sub(g.degree)
        } else {
            self.degree - g.degree
        };
        Ok(HomPoly { poly: q, degree })
    }

    /// True when `self = c * other` for some nonzero constant `c`.
    pub fn is_associate(&self, other: &HomPoly) -> bool {
        self.degree == other.degree && !self.is_zero() && self.monic().poly == other.monic().poly
    }

    /// `(q, m, d)`.
    pub fn ambient(&self) -> (u32, usize, u32) {
        (self.field().q(), self.m(), self.degree)
    }
}

/// An ordered family of homogeneous polynomials sharing field, `m` and `d`,
/// with the `F_q`-rank of its coefficient matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFamily {
    members: Vec<HomPoly>,
    rank: usize,
}

impl PolyFamily {
    pub fn new(members: Vec<HomPoly>) -> Result<PolyFamily, PolyError> {
        let first = members.first().ok_or(PolyError::EmptyFamily)?;
        let key = first.ambient();
        if members.iter().any(|f| f.ambient() != key) {
            return Err(PolyError::MixedParameters);
        }
        let rows: Vec<Vec<Elem>> = members.iter().map(HomPoly::coeffs).collect();
        let rank = linalg::rank(first.field(), &rows);
        Ok(PolyFamily { members, rank })
    }

    /// Builds from coefficient rows in descending lexicographic monomial order.
    pub fn from_rows(field: Arc<Field>, m: usize, d: u32, rows: &[Vec<Elem>]) -> Result<PolyFamily, PolyError> {
        let members = rows
            .iter()
            .map(|r| HomPoly::from_coeffs(field.clone(), m, d, r))
            .collect::<Result<Vec<_>, _>>()?;
        PolyFamily::new(members)
    }

    pub fn members(&self) -> &[HomPoly] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_independent(&self) -> bool {
        self.rank == self.members.len()
    }

    pub fn field(&self) -> &Arc<Field> {
        self.members[0].field()
    }

    pub fn m(&self) -> usize {
        self.members[0].m()
    }

    pub fn degree(&self) -> u32 {
        self.members[0].degree()
    }

    pub fn coeff_rows(&self) -> Vec<Vec<Elem>> {
        self.members.iter().map(HomPoly::coeffs).collect()
    }
}

/// `F_q`-rank of the family's coefficient matrix.
pub fn rank(family: &[HomPoly]) -> Result<usize, PolyError> {
    Ok(PolyFamily::new(family.to_vec())?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Arc<Field> {
        Arc::new(Field::new(q).unwrap())
    }

    fn hp(field: &Arc<Field>, m: usize, s: &str) -> HomPoly {
        parse_hom_poly(field.clone(), m, s).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f2 = f(2);
        assert_eq!(
            HomPoly::zero(f2.clone(), 2, 3).eval(&[Elem::ONE, Elem::ZERO, Elem::ONE]).unwrap(),
            Elem::ZERO
        );
        let p = hp(&f2, 2, "x0^2 + x1^2");
        assert_eq!(p.eval(&[Elem::ONE, Elem::ONE, Elem::ZERO]).unwrap(), Elem::ZERO);
        let f5 = f(5);
        let p = hp(&f5, 2, "x0*x1*x2");
        let pt: Vec<Elem> = [2, 3, 4].iter().map(|&i| f5.elem(i).unwrap()).collect();
        assert_eq!(p.eval(&pt).unwrap(), f5.elem(4).unwrap());
        assert!(matches!(p.eval(&pt[..2]), Err(PolyError::VariableCount { .. })));
    }

    #[test]
    fn rank_examples() {
        let f3 = f(3);
        let fam = vec![hp(&f3, 1, "x0^2"), hp(&f3, 1, "x1^2"), hp(&f3, 1, "x0^2 + x1^2")];
        assert_eq!(rank(&fam).unwrap(), 2);
        let mixed = vec![hp(&f3, 1, "x0^2"), hp(&f3, 1, "x1")];
        assert_eq!(rank(&mixed), Err(PolyError::MixedParameters));
        let other = vec![hp(&f3, 1, "x0^2"), hp(&f(5), 1, "x1^2")];
        assert_eq!(rank(&other), Err(PolyError::MixedParameters));
    }

    #[test]
    fn divide_exact_examples() {
        let f7 = f(7);
        let a = hp(&f7, 1, "x0^2 - x1^2");
        let b = hp(&f7, 1, "x0 - x1");
        assert_eq!(a.divide_exact(&b).unwrap(), hp(&f7, 1, "x0 + x1"));
        let c = hp(&f7, 1, "x0^2");
        assert_eq!(c.divide_exact(&hp(&f7, 1, "x1")), Err(PolyError::NotDivisible));
        assert_eq!(
            c.divide_exact(&HomPoly::zero(f7.clone(), 1, 1)),
            Err(PolyError::DivisionByZeroPoly)
        );
    }

    #[test]
    fn coefficient_vector_round_trip() {
        let f5 = f(5);
        let p = hp(&f5, 2, "3*x0^2 + x1*x2 + 4*x2^2");
        let v = p.coeffs();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], f5.elem(3).unwrap());
        assert_eq!(HomPoly::from_coeffs(f5, 2, 2, &v).unwrap(), p);
    }

    #[test]
    fn homogeneity_is_enforced() {
        let f3 = f(3);
        let p = parse_poly(f3, 2, "x0^2 + x1").unwrap();
        assert_eq!(HomPoly::new(p, 2), Err(PolyError::NotHomogeneous(2)));
    }
}
