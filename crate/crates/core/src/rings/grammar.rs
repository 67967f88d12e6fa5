//! Text grammar for polynomials: `3/2*X^2*Y^-1 + 1`, with `t` admitted as
//! the dual-number generator where the scalar supports it.

use std::sync::Arc;



use crate::error::RingError;
use crate::rings::poly::{LaurentPoly, VarSet};
use crate::scalar::{Dual, Fp, Rational, Scalar, ScalarField};

/// Scalar-level parsing hooks for the polynomial grammar.
pub trait ScalarText: Scalar {
    /// `num/den` literal.
    fn from_ratio(num: i64, den: i64) -> Option<Self>;
    /// Reserved scalar atoms (the dual generator `t`).
    fn parse_atom(name: &str) -> Option<Self>;
}

impl ScalarText for Rational {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            None
        } else {
            Some(Rational::new(num, den))
        }
    }
    fn parse_atom(_: &str) -> Option<Self> {
        None
    }
}

impl<const P: u64> ScalarText for Fp<P> {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        let d = Fp::<P>::new(den);
        d.inv().map(|di| Fp::<P>::new(num) * di)
    }
    fn parse_atom(_: &str) -> Option<Self> {
        None
    }
}

impl<K: ScalarField + ScalarText> ScalarText for Dual<K> {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        K::from_ratio(num, den).map(Dual::from_re)
    }
    fn parse_atom(name: &str) -> Option<Self> {
        if name == "t" {
            Some(Dual::t())
        } else {
            K::parse_atom(name).map(Dual::from_re)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LPar,
    RPar,
}

fn lex(s: &str) -> Result<Vec<Tok>, RingError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                out.push(Tok::LPar);
                i += 1;
            }
            ')' => {
                out.push(Tok::RPar);
                i += 1;
            }
            '0'..='9' => {
                let mut n = 0i64;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|m| m.checked_add(bytes[i] as i64 - '0' as i64))
                        .ok_or_else(|| RingError::Parse("integer literal overflow".into()))?;
                    i += 1;
                }
                out.push(Tok::Num(n));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    name.push(bytes[i]);
                    i += 1;
                }
                out.push(Tok::Name(name));
            }
            other => return Err(RingError::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a, K: ScalarText> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Arc<VarSet>,
    _k: std::marker::PhantomData<K>,
}

impl<'a, K: ScalarText> Parser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
    fn expect(&mut self, t: Tok) -> Result<(), RingError> {
        match self.next() {
            Some(x) if x == t => Ok(()),
            other => Err(RingError::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn expression(&mut self) -> Result<LaurentPoly<K>, RingError> {
        let mut neg = false;
        while let Some(t) = self.peek() {
            match t {
                Tok::Minus => {
                    neg = !neg;
                    self.pos += 1;
                }
                Tok::Plus => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus | Tok::Minus => {
                    let minus = matches!(t, Tok::Minus);
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = if minus { acc - rhs } else { acc + rhs };
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly<K>, RingError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn signed_int(&mut self) -> Result<i64, RingError> {
        let mut neg = false;
        while matches!(self.peek(), Some(Tok::Minus)) {
            neg = !neg;
            self.pos += 1;
        }
        match self.next() {
            Some(Tok::Num(n)) => Ok(if neg { -n } else { n }),
            other => Err(RingError::Parse(format!("expected integer, found {other:?}"))),
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly<K>, RingError> {
        let mut neg = false;
        while matches!(self.peek(), Some(Tok::Minus)) {
            neg = !neg;
            self.pos += 1;
        }
        let base = match self.next() {
            Some(Tok::Num(n)) => {
                // possible rational literal n/d (only when followed by '/')
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.pos += 1;
                    let d = self.signed_int()?;
                    let c = K::from_ratio(n, d)
                        .ok_or_else(|| RingError::Parse(format!("bad ratio {n}/{d}")))?;
                    LaurentPoly::constant(self.vars, c)
                } else {
                    LaurentPoly::constant(self.vars, K::from_i64(n))
                }
            }
            Some(Tok::Name(name)) => {
                if let Some(i) = self.vars.index_of(&name) {
                    LaurentPoly::var(self.vars, self.vars.name(i))
                } else if let Some(c) = K::parse_atom(&name) {
                    LaurentPoly::constant(self.vars, c)
                } else {
                    return Err(RingError::Parse(format!("unknown name {name}")));
                }
            }
            Some(Tok::LPar) => {
                let e = self.expression()?;
                self.expect(Tok::RPar)?;
                e
            }
            other => return Err(RingError::Parse(format!("unexpected token {other:?}"))),
        };
        let base = if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let e = self.signed_int()? as i32;
            if e >= 0 {
                base.pow(e as u32)
            } else {
                let inv = base.invert().ok_or_else(|| {
                    RingError::Parse("negative power of a non-unit".into())
                })?;
                inv.pow((-e) as u32)
            }
        } else {
            base
        };
        Ok(if neg { -base } else { base })
    }
}

/// Parse a polynomial in the grammar over the given variables.
pub fn parse_poly<K: ScalarText>(
    s: &str,
    vars: &Arc<VarSet>,
) -> Result<LaurentPoly<K>, RingError> {
    let toks = lex(s)?;
    let mut p = Parser::<K> { toks, pos: 0, vars, _k: std::marker::PhantomData };
    let e = p.expression()?;
    if p.pos != p.toks.len() {
        return Err(RingError::Parse("trailing input".into()));
    }
    Ok(e)
}

/// Canonical printing; `parse_poly` inverts it exactly.
pub fn print_poly<K: Scalar>(p: &LaurentPoly<K>) -> String {
    if p.terms.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (e, k) in p.terms.iter().rev() {
        let mut factors: Vec<String> = Vec::new();
        let trivial = e.iter().all(|&x| x == 0);
        if !k.is_one() || trivial {
            let ks = format!("{k}");
            // parenthesize compound scalars so the grammar re-reads them
            if ks.contains('+') || ks.contains('*') || ks[1..].contains('-') {
                factors.push(format!("({ks})"));
            } else {
                factors.push(ks);
            }
        }
        for (i, &d) in e.iter().enumerate() {
            if d == 1 {
                factors.push(p.vars.name(i).to_string());
            } else if d != 0 {
                factors.push(format!("{}^{}", p.vars.name(i), d));
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join(" + ")
}
