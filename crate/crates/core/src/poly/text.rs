//! Polynomial text format.
//!
//! Terms are joined by `+` or `-`; a term is a `*`-separated product of
//! coefficients (integers, `g`, `g^k`) and variables (`x3`, `x_3`, with an
//! optional `^n`). Whitespace is ignored. Printing joins terms with ` + `,
//! lists them in descending lexicographic order and elides unit
//! coefficients and exponents.

use std::fmt;
use std::sync::Arc;

use crate::gf::{Elem, Field};

use super::{HomPoly, Monomial, Poly, PolyError};

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.terms().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            let is_const = mono.degree() == 0;
            if c != Elem::ONE || is_const {
                parts.push(self.field().format_elem(c));
            }
            for (v, &a) in mono.exps().iter().enumerate() {
                match a {
                    0 => {}
                    1 => parts.push(format!("x{}", v + self.var_base())),
                    _ => parts.push(format!("x{}^{}", v + self.var_base(), a)),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    field: &'a Arc<Field>,
    nvars: usize,
    var_base: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> PolyError {
        let column = self.chars.get(self.pos).map_or_else(
            || self.chars.last().map_or(1, |&(c, _)| c + 2),
            |&(c, _)| c + 1,
        );
        PolyError::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        s.parse::<u64>().map_err(|_| {
            self.pos = start;
            self.err("number too large")
        })
    }

    fn exponent(&mut self) -> Result<u64, PolyError> {
        if self.eat('^') {
            self.number()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self, sign_neg: bool, out: &mut Poly) -> Result<(), PolyError> {
        let f = self.field;
        let mut coeff = if sign_neg { f.neg(Elem::ONE) } else { Elem::ONE };
        let mut mono = Monomial::one(self.nvars);
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    let n = self.number()?;
                    let v = if f.is_prime_field() {
                        f.from_int((n % f.p() as u64) as i64)
                    } else {
                        f.elem(n).map_err(|_| {
                            self.pos = start;
                            self.err(format!("{n} is not an element index of F_{}", f.q()))
                        })?
                    };
                    coeff = f.mul(coeff, v);
                }
                Some('g') => {
                    self.pos += 1;
                    let k = self.exponent()?;
                    coeff = f.mul(coeff, f.pow(f.generator(), k));
                }
                Some('x') => {
                    self.pos += 1;
                    self.eat('_');
                    let start = self.pos;
                    let idx = self.number()? as usize;
                    if idx < self.var_base || idx - self.var_base >= self.nvars {
                        self.pos = start;
                        return Err(self.err(format!(
                            "variable x{idx} outside x{}..x{}",
                            self.var_base,
                            self.var_base + self.nvars - 1
                        )));
                    }
                    let e = self.exponent()?;
                    let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
                    mono.0[idx - self.var_base] += e;
                }
                _ => return Err(self.err("expected a coefficient or a variable")),
            }
            if !self.eat('*') {
                break;
            }
        }
        out.add_term(mono, coeff);
        Ok(())
    }

    fn poly(&mut self) -> Result<Poly, PolyError> {
        let mut out = Poly::zero(self.field.clone(), self.nvars);
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            self.term(neg, &mut out)?;
            match self.peek() {
                None => break,
                Some('+') => neg = false,
                Some('-') => neg = true,
                Some(_) => return Err(self.err("expected '+', '-' or '*'")),
            }
            self.pos += 1;
        }
        Ok(out)
    }
}

fn parse_line(field: &Arc<Field>, nvars: usize, var_base: usize, text: &str, line: usize) -> Result<Poly, PolyError> {
    let mut p = Parser {
        chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
        pos: 0,
        line,
        field,
        nvars,
        var_base,
    };
    if p.chars.is_empty() {
        return Err(p.err("empty polynomial"));
    }
    Ok(p.poly()?.with_var_base(var_base))
}

/// Parses a polynomial in `x0, ..., x{nvars-1}`.
pub fn parse_poly(field: Arc<Field>, nvars: usize, text: &str) -> Result<Poly, PolyError> {
    parse_line(&field, nvars, 0, text, 1)
}

/// Parses a homogeneous polynomial in `x0, ..., xm`; the degree is read off
/// the terms, so the zero polynomial is rejected.
pub fn parse_hom_poly(field: Arc<Field>, m: usize, text: &str) -> Result<HomPoly, PolyError> {
    let p = parse_poly(field, m + 1, text)?;
    HomPoly::from_poly(p)
}

/// The text form read by [`parse_family`]: header line, then one member per line.
pub fn format_family(members: &[HomPoly]) -> String {
    let mut out = String::new();
    if let Some(first) = members.first() {
        out.push_str(&format!("q={} m={} d={}\n", first.field().q(), first.m(), first.degree()));
    }
    for h in members {
        out.push_str(&format!("{h}\n"));
    }
    out
}

/// A family read from a text file.
#[derive(Clone, Debug)]
pub struct FamilyFile {
    pub field: Arc<Field>,
    pub m: usize,
    pub d: u32,
    pub members: Vec<HomPoly>,
}

/// Reads a header line `q=<q> m=<m> d=<d>` followed by one polynomial per
/// line. `#` starts a comment; blank lines are skipped.
pub fn parse_family(text: &str) -> Result<FamilyFile, PolyError> {
    let mut header: Option<(Arc<Field>, usize, u32)> = None;
    let mut members = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        match &header {
            None => header = Some(parse_header(body, line)?),
            Some((field, m, d)) => {
                let p = parse_line(field, m + 1, 0, body, line)?;
                let h = HomPoly::new(p, *d).map_err(|_| PolyError::Parse {
                    line,
                    column: 1,
                    message: format!("not homogeneous of degree {d}"),
                })?;
                members.push(h);
            }
        }
    }
    let (field, m, d) = header.ok_or(PolyError::Parse {
        line: 1,
        column: 1,
        message: "missing header 'q=<q> m=<m> d=<d>'".into(),
    })?;
    if members.is_empty() {
        return Err(PolyError::EmptyFamily);
    }
    Ok(FamilyFile {
        field,
        m,
        d,
        members,
    })
}

fn parse_header(body: &str, line: usize) -> Result<(Arc<Field>, usize, u32), PolyError> {
    let bad = |message: String| PolyError::Parse {
        line,
        column: 1,
        message,
    };
    let (mut q, mut m, mut d) = (None, None, None);
    for item in body.split_whitespace() {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, found {item:?}")))?;
        let n: u64 = value
            .parse()
            .map_err(|_| bad(format!("bad value for {key}: {value:?}")))?;
        match key {
            "q" => q = Some(n),
            "m" => m = Some(n as usize),
            "d" => d = Some(n as u32),
            _ => return Err(bad(format!("unknown header key {key:?}"))),
        }
    }
    let (q, m, d) = match (q, m, d) {
        (Some(q), Some(m), Some(d)) => (q, m, d),
        _ => return Err(bad("header needs q, m and d".into())),
    };
    let field = Field::new(q)?;
    Ok((Arc::new(field), m, d))
}
