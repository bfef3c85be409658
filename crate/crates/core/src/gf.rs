//! Arithmetic in finite fields `F_q`, `q = p^e <= 2^16`.
//!
//! Elements are indices in `[0, q)`: the base-`p` digits of an index are the
//! coordinates of the element in the power basis `1, x, ..., x^(e-1)` of
//! `F_p[x] / (modulus)`. Index 0 is zero and index 1 is one. Multiplication
//! and inversion go through log/antilog tables over a fixed primitive
//! element; addition is digit-wise (or a Cayley table for `q <= 256`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Fields up to this order also carry full Cayley tables for the hot loops.
const CAYLEY_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} does not belong to F_{q}")]
    FieldMismatch { index: u64, q: u32 },
    #[error("cannot parse field element {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// An element of some `F_q`, identified by its index.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn raw(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps a raw index without range checking. Only for indices produced
    /// by the same field (tables, enumeration).
    #[inline]
    pub(crate) fn from_raw(raw: u16) -> Elem {
        Elem(raw)
    }
}

/// An immutable finite field context.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    log: Vec<u32>,
    exp: Vec<u16>,
    neg: Vec<u16>,
    cayley: Option<Cayley>,
}

#[derive(Clone)]
struct Cayley {
    add: Vec<u16>,
    mul: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator.0)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        // construction is deterministic in q
        self.q == other.q
    }
}

impl Eq for Field {}

/// Splits `q` into `(p, e)` with `q = p^e`, or `None`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut e = 0u32;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest == 1 {
        Some((p as u32, e))
    } else {
        None
    }
}

impl Field {
    /// Builds `F_q` deterministically: the modulus is the least monic
    /// irreducible of degree `e` (coefficient lists compared low-to-high) and
    /// the generator is the least primitive index.
    pub fn new(q: u64) -> Result<Field, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(GfError::TooLarge(q));
        }
        let q = q as u32;
        let modulus = least_irreducible(p, e);
        let arith = SlowArith { p, e, modulus: &modulus };

        let order = q - 1;
        let mut generator = None;
        for g in 1..q {
            if arith.order(g) == order {
                generator = Some(g);
                break;
            }
        }
        // F_q^* is cyclic, so a primitive element always exists.
        let generator = generator.expect("multiplicative group is cyclic");

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x as u16;
            exp[(k + order) as usize] = x as u16;
            log[x as usize] = k;
            x = arith.mul(x, generator);
        }
        debug_assert_eq!(x, 1);

        let neg = (0..q).map(|a| arith.neg(a) as u16).collect();

        let mut field = Field {
            p,
            e,
            q,
            modulus,
            generator: Elem(generator as u16),
            log,
            exp,
            neg,
            cayley: None,
        };
        if q <= CAYLEY_LIMIT {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = field.add_digits(a as u32, b as u32) as u16;
                    mul[a * n + b] = field.mul_log(Elem(a as u16), Elem(b as u16)).0;
                }
            }
            field.cayley = Some(Cayley { add, mul });
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.q as usize
    }

    /// Modulus coefficients, low to high, monic of degree `e`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The element with the given index, checked against `q`.
    pub fn elem(&self, index: u64) -> Result<Elem, GfError> {
        if index < self.q as u64 {
            Ok(Elem(index as u16))
        } else {
            Err(GfError::FieldMismatch { index, q: self.q })
        }
    }

    /// Confirms that `a` is an element of this field.
    pub fn check(&self, a: Elem) -> Result<Elem, GfError> {
        self.elem(a.0 as u64)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u16)
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(|i| Elem(i as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q).map(|i| Elem(i as u16))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.cayley {
            Some(t) => Elem(t.add[a.index() * self.q as usize + b.index()]),
            None => Elem(self.add_digits(a.0 as u32, b.0 as u32) as u16),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.cayley {
            Some(t) => Elem(t.mul[a.index() * self.q as usize + b.index()]),
            None => self.mul_log(a, b),
        }
    }

    #[inline]
    fn mul_log(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, GfError> {
        if a.0 == 0 {
            return Err(GfError::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(Elem(self.exp[((order - self.log[a.index()]) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let k = (self.log[a.index()] as u64 * (n % order)) % order;
        Elem(self.exp[k as usize])
    }

    /// Discrete log to the base of the generator; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.index()])
    }

    /// `g^k`.
    pub fn antilog(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.q - 1) as u64) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Option<u32> {
        let l = self.log(a)?;
        let n = self.q - 1;
        Some(n / gcd_u32(l, n))
    }

    /// Cayley tables `(add, mul)`, row-major `q x q`, when `q <= 256`.
    pub fn cayley_tables(&self) -> Option<(&[u16], &[u16])> {
        self.cayley.as_ref().map(|t| (t.add.as_slice(), t.mul.as_slice()))
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    /// Text form: integers for prime fields, `0`, `1` and `g^k` otherwise.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.e == 1 || a.0 <= 1 {
            a.0.to_string()
        } else {
            format!("g^{}", self.log[a.index()])
        }
    }

    /// Accepts a plain index (`0..q`), `g` or `g^k`.
    pub fn parse_elem(&self, text: &str) -> Result<Elem, GfError> {
        let s = text.trim();
        let bad = |reason: &str| GfError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if let Some(rest) = s.strip_prefix('g') {
            let rest = rest.trim_start();
            if rest.is_empty() {
                return Ok(self.generator);
            }
            let k = rest
                .strip_prefix('^')
                .ok_or_else(|| bad("expected '^' after 'g'"))?
                .trim();
            let k = u64::from_str(k).map_err(|_| bad("bad exponent"))?;
            return Ok(self.antilog(k));
        }
        let n = u64::from_str(s).map_err(|_| bad("not an integer or g^k"))?;
        self.elem(n)
    }
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Polynomial arithmetic over `F_p` on base-`p` digit vectors, used only
/// while building the tables.
struct SlowArith<'a> {
    p: u32,
    e: u32,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            v.push(a % self.p);
            a /= self.p;
        }
        v
    }

    fn undigits(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn neg(&self, a: u32) -> u32 {
        let v: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        self.undigits(&v)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (self.digits(a), self.digits(b));
        let e = self.e as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * e];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce modulo the monic modulus, top degree down
        for deg in (e..2 * e).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (k, &mk) in self.modulus.iter().enumerate().take(e) {
                let idx = deg - e + k;
                prod[idx] = (prod[idx] + (p - c) * mk as u64) % p;
            }
            prod[deg] = 0;
        }
        let v: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.undigits(&v)
    }

    fn order(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
            if x == 0 || k > 1 << 17 {
                return 0;
            }
        }
        k
    }
}

/// Least monic irreducible polynomial of degree `e` over `F_p`, ordering
/// candidates by their coefficient lists read low-to-high.
fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let e = e as usize;
    let total = (p as u64).pow(e as u32);
    for n in 0..total {
        // c_0 is the most significant digit of n
        let mut coeffs = vec![0u32; e + 1];
        let mut rest = n;
        for i in (0..e).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[e] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for t in 1..=deg / 2 {
        let count = (p as u64).pow(t as u32);
        for n in 0..count {
            let mut g = vec![0u32; t + 1];
            let mut rest = n;
            for c in g.iter_mut().take(t) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            g[t] = 1;
            if poly_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(f: &[u32], g: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let p = p as u64;
    let dg = g.len() - 1;
    for deg in (dg..r.len()).rev() {
        let c = r[deg] % p;
        if c == 0 {
            continue;
        }
        for k in 0..=dg {
            let idx = deg - dg + k;
            r[idx] = (r[idx] + (p - c) * g[k] as u64) % p;
        }
    }
    r.iter().all(|&c| c % p == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn prime_field_construction() {
        let f = field(5);
        assert_eq!((f.p(), f.e(), f.q()), (5, 1, 5));
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.generator(), Elem(2));
    }

    #[test]
    fn f4_modulus_is_the_only_irreducible_quadratic() {
        // oracle: of x^2, x^2+1, x^2+x, x^2+x+1 only the last has no root
        let irreducible: Vec<[u32; 3]> = (0..4u32)
            .map(|n| [n % 2, n / 2, 1])
            .filter(|c| (0..2u32).all(|x| (c[0] + c[1] * x + x * x) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![[1, 1, 1]]);
        assert_eq!(field(4).modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f8_and_f9_moduli_are_lexicographically_least() {
        assert_eq!(field(8).modulus(), &[1, 0, 1, 1]);
        assert_eq!(field(9).modulus(), &[1, 0, 1]);
    }

    #[test]
    fn not_prime_power() {
        assert_eq!(Field::new(6).unwrap_err(), GfError::NotPrimePower(6));
        assert_eq!(Field::new(1).unwrap_err(), GfError::NotPrimePower(1));
        assert_eq!(Field::new(1 << 17).unwrap_err(), GfError::TooLarge(1 << 17));
    }

    #[test]
    fn small_examples() {
        let f2 = field(2);
        assert_eq!(f2.add(Elem::ONE, Elem::ONE), Elem::ZERO);

        // g = x in F_4 = F_2[x]/(x^2+x+1): g*g = x^2 = x + 1 -> index 3
        let f4 = field(4);
        let g = f4.elem(2).unwrap();
        assert_eq!(f4.mul(g, g), f4.elem(3).unwrap());

        let f7 = field(7);
        assert_eq!(f7.inv(f7.elem(3).unwrap()).unwrap(), f7.elem(5).unwrap());
        assert_eq!(f7.inv(Elem::ZERO), Err(GfError::DivisionByZero));
    }

    #[test]
    fn elements_enumerate_in_index_order() {
        assert_eq!(field(2).elements().collect::<Vec<_>>(), vec![Elem(0), Elem(1)]);
        assert_eq!(field(4).elements().count(), 4);
        let f9 = field(9);
        let dividing = f9
            .nonzero_elements()
            .filter(|&a| 8 % f9.mult_order(a).unwrap() == 0)
            .count();
        assert_eq!(dividing, 8);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
            let f = field(q);
            let els: Vec<Elem> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                    assert_eq!(f.pow(a, q - 1), Elem::ONE);
                    assert_eq!(f.antilog(f.log(a).unwrap() as u64), a);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), f.mul_log(a, b));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = field(1 << 10);
        assert!(f.cayley_tables().is_none());
        let g = f.generator();
        assert_eq!(f.mult_order(g), Some(1023));
        let a = f.elem(777).unwrap();
        let b = f.elem(100).unwrap();
        assert_eq!(f.sub(f.add(a, b), b), a);
        assert_eq!(f.div(f.mul(a, b), b).unwrap(), a);
    }

    #[test]
    fn text_round_trip() {
        let f9 = field(9);
        for a in f9.elements() {
            let s = f9.format_elem(a);
            assert_eq!(f9.parse_elem(&s).unwrap(), a);
        }
        assert_eq!(f9.format_elem(Elem::ONE), "1");
        assert_eq!(f9.parse_elem("g").unwrap(), f9.generator());
        assert_eq!(f9.parse_elem("5").unwrap(), Elem(5));
        assert!(f9.parse_elem("9").is_err());
        assert!(f9.parse_elem("g^").is_err());
        let f7 = field(7);
        assert_eq!(f7.format_elem(f7.elem(6).unwrap()), "6");
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(65536), Some((2, 16)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(0), None);
    }
}
