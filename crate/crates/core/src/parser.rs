//! Text front-end for differential polynomials.
//!
//! ```text
//! expr     := "-"? term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := atom ("^" integer)?
//! atom     := rational | "zeta" | "t" | var | "(" expr ")"
//! var      := "x" index? deriv
//! deriv    := "'"* | "^(" digits ")"
//! rational := digits ("/" digits)?
//! ```
//!
//! Multiplication is always explicit. The printer emits the normal form: a
//! flat sum of `r*zeta^i*t^k*x^λ` terms, monomials in decreasing order.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::diffpoly::{DiffPoly, ExponentMatrix, KPoly, TropDiffPoly, TropPoly1};
use crate::field::{FieldBackend, FieldElem, ResidueElem};
use crate::initial::ResiduePoly;
use crate::series::PowerSeries;
use crate::{Error, Rational, Result};

/// Parses `src` as a polynomial in `n` variables with coefficients truncated
/// at `t^truncation`.
pub fn parse_poly(src: &str, backend: FieldBackend, n: usize, truncation: usize) -> Result<DiffPoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        backend,
        n,
        truncation,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    backend: FieldBackend,
    n: usize,
    truncation: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, c: FieldElem) -> DiffPoly {
        DiffPoly::constant(self.n, PowerSeries::constant(c, self.truncation))
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let k = self.digits()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Syntax {
                position: start,
                message: "integer too large".into(),
            })
    }

    fn big_digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .expect("digit string"))
    }

    fn keyword(&mut self, word: &str) -> bool {
        let w = word.as_bytes();
        let end = self.pos + w.len();
        if self.src.get(self.pos..end) == Some(w)
            && !self.src.get(end).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.big_digits()?;
                let value = if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let den = self.big_digits()?;
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                Ok(self.constant(FieldElem::from_rational(self.backend, value)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(_) if self.keyword("zeta") => Ok(self.constant(FieldElem::zeta(self.backend)?)),
            Some(_) if self.keyword("t") => Ok(DiffPoly::constant(
                self.n,
                PowerSeries::monomial(FieldElem::one(self.backend), 1, self.truncation),
            )),
            Some(b'x') => self.var(),
            Some(_) => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                if self.pos > start {
                    let word = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                    return Err(Error::UnknownVariable(word));
                }
                Err(self.error("unexpected character"))
            }
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn var(&mut self) -> Result<DiffPoly> {
        let start = self.pos;
        self.pos += 1;
        let index = if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            Some(self.digits()?)
        } else {
            None
        };
        if self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic() || *c == b'_') {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let word = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
            return Err(Error::UnknownVariable(word));
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        let var = match index {
            None if self.n == 1 => 0,
            Some(i) if i >= 1 && (i as usize) <= self.n => i as usize - 1,
            _ => return Err(Error::UnknownVariable(name)),
        };
        let mut order = 0;
        while self.src.get(self.pos) == Some(&b'\'') {
            self.pos += 1;
            order += 1;
        }
        if order == 0 && self.src.get(self.pos..self.pos + 2) == Some(b"^(") {
            self.pos += 2;
            self.skip_ws();
            order = self.digits()? as usize;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
        }
        Ok(DiffPoly::var(self.n, self.backend, self.truncation, var, order))
    }
}

fn var_name(n: usize, i: usize) -> String {
    if n == 1 {
        "x".into()
    } else {
        format!("x{}", i + 1)
    }
}

fn deriv_suffix(j: usize) -> String {
    if j <= 3 {
        "'".repeat(j)
    } else {
        format!("^({j})")
    }
}

/// `x1'*x2^2`-style rendering; empty for the unit monomial.
pub fn print_monomial(n: usize, m: &ExponentMatrix) -> String {
    m.entries()
        .map(|((i, j), e)| {
            let mut s = var_name(n, i) + &deriv_suffix(j);
            if e > 1 {
                s += &format!("^{e}");
            }
            s
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Joins signed terms `(negative, body)` into `a - b + c`.
fn join_signed(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, body)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

/// `|r|*factors`, dropping a unit coefficient when factors are present.
fn scaled(r: &Rational, factors: &[String]) -> (bool, String) {
    let mut pieces = Vec::new();
    let a = r.abs();
    if !a.is_one() || factors.is_empty() {
        pieces.push(a.to_string());
    }
    pieces.extend(factors.iter().filter(|f| !f.is_empty()).cloned());
    if pieces.is_empty() {
        pieces.push("1".into());
    }
    (r.is_negative(), pieces.join("*"))
}

fn zeta_power(i: usize) -> String {
    match i {
        0 => String::new(),
        1 => "zeta".into(),
        _ => format!("zeta^{i}"),
    }
}

fn t_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "t".into(),
        _ => format!("t^{k}"),
    }
}

fn field_parts(c: &FieldElem, t_exp: usize, mono: &str, out: &mut Vec<(bool, String)>) {
    for (i, r) in c.coeffs().iter().enumerate() {
        if !r.is_zero() {
            out.push(scaled(r, &[zeta_power(i), t_power(t_exp), mono.to_string()]));
        }
    }
}

pub fn print_poly(f: &DiffPoly) -> String {
    let mut parts = Vec::new();
    for (m, c) in f.terms().iter().rev() {
        let mono = print_monomial(f.nvars(), m);
        for (k, ck) in c.coeffs().iter().enumerate() {
            field_parts(ck, k, &mono, &mut parts);
        }
    }
    join_signed(parts)
}

pub fn print_kpoly(f: &KPoly) -> String {
    let mut parts = Vec::new();
    for (m, c) in f.terms().iter().rev() {
        field_parts(c, 0, &print_monomial(f.nvars(), m), &mut parts);
    }
    join_signed(parts)
}

fn trop_term(coeff: String, is_unit: bool, mono: String) -> String {
    match (is_unit, mono.is_empty()) {
        (true, false) => mono,
        (_, true) => coeff,
        (false, false) => format!("{coeff}*{mono}"),
    }
}

fn join_plus(parts: Vec<String>) -> String {
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Tropical coefficients print as `(a, b)`; the unit `(0, 0)` is omitted.
pub fn print_trop_poly(g: &TropDiffPoly) -> String {
    join_plus(
        g.terms()
            .iter()
            .rev()
            .map(|(m, w)| {
                let unit = w.alpha().is_some_and(Zero::is_zero) && w.beta().is_some_and(Zero::is_zero);
                trop_term(w.to_string(), unit, print_monomial(g.nvars(), m))
            })
            .collect(),
    )
}

pub fn print_trop_poly1(g: &TropPoly1) -> String {
    join_plus(
        g.terms()
            .iter()
            .rev()
            .map(|(m, w)| {
                let v = w.finite().expect("finite coefficient");
                let coeff = if v.is_negative() {
                    format!("({v})")
                } else {
                    v.to_string()
                };
                trop_term(coeff, v.is_zero(), print_monomial(g.nvars(), m))
            })
            .collect(),
    )
}

/// Residue coefficients print as integers mod `p` (or rationals over ℚ).
pub fn print_residue_poly(g: &ResiduePoly) -> String {
    let mut parts = Vec::new();
    for (m, c) in g.terms().iter().rev() {
        let mono = print_monomial(g.nvars(), m);
        match c {
            ResidueElem::Fp { value, .. } => {
                parts.push((false, trop_term(value.to_string(), *value == 1, mono)));
            }
            ResidueElem::Q(r) => parts.push(scaled(r, &[mono])),
        }
    }
    join_signed(parts)
}
