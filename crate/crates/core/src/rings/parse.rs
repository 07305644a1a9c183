//! Parser for ring-element expressions.
//!
//! Grammar: sums and differences of products and quotients of powers of
//! atoms; atoms are integer literals, generator names of the ring tower, or
//! parenthesised expressions.  Juxtaposition (`2xi`, `2(b+1)`) multiplies.
//! Division is exact division in the ring; negative exponents invert.

use num_bigint::BigInt;

use super::ring::{Ring, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| Error::Parse(format!("bad number {text}")))?));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        out.push(match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{00b7}' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}"))),
        });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Ring,
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.src))
    }

    fn expr(&mut self) -> Result<Value> {
        let r = self.ring;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.add(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = r.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let r = self.ring;
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = r.mul(&acc, &t);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = r.div_exact(&acc, &t)?;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let t = self.power()?;
                    acc = r.mul(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(self.ring.neg(&v))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let mut sign = 1i64;
        let mut parens = false;
        if self.peek() == Some(&Tok::LParen) {
            parens = true;
            self.pos += 1;
        }
        if self.peek() == Some(&Tok::Minus) {
            sign = -1;
            self.pos += 1;
        }
        let n = match self.next() {
            Some(Tok::Num(n)) => n,
            _ => return Err(self.err("expected integer exponent")),
        };
        if parens && self.next() != Some(Tok::RParen) {
            return Err(self.err("expected ')' after exponent"));
        }
        let n: i64 = n.try_into().map_err(|_| self.err("exponent too large"))?;
        Ok(sign * n)
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.exponent()?;
            return self.ring.pow_signed(&base, e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Value> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(self.ring.from_bigint(&n)),
            Some(Tok::Ident(name)) => self
                .ring
                .generator(&name)
                .ok_or_else(|| self.err(&format!("unknown generator {name} for {}", self.ring))),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            _ => Err(self.err("expected a number, generator or '('")),
        }
    }
}

/// Parse an expression into an element of `ring`.
pub fn parse_value(ring: &Ring, s: &str) -> Result<Value> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { ring, toks, pos: 0, src: s };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}
