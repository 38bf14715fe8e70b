//! Textual expression parser.
//!
//! Grammar (whitespace-insensitive between tokens):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ('^' uint)?
//! primary := '-' factor | '(' expr ')' | rational | 'i' | var
//! rational:= uint ('/' uint)?
//! var     := ('p' | 'q') uint   (symplectic)  |  'x' uint   (plain)
//! ```
//!
//! Variable indices are 1-based and validated against the expected
//! [`VarKind`]. [`Poly`]'s `Display` output round-trips through
//! [`parse_poly`] exactly.

use crate::error::{Error, Result};
use crate::poly::{Poly, VarKind};
use crate::scalar::Scalar;
use num::bigint::BigInt;
use num::rational::BigRational;

/// Parses a polynomial over the given variable space.
pub fn parse_poly(input: &str, kind: VarKind) -> Result<Poly> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
        kind,
    };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

/// Parses a constant expression into a scalar (e.g. `-1`, `3/2`, `1/2+3/4*i`).
pub fn parse_scalar(input: &str) -> Result<Scalar> {
    // Constants contain no variables, so the variable space is irrelevant;
    // parse in a zero-variable plain space.
    let poly = parse_poly(input, VarKind::Plain { vars: 0 })?;
    Ok(poly.eval_zero())
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    kind: VarKind,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                self.skip_ws();
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                acc = &acc * &self.factor()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            if e > 64 {
                return Err(self.err("exponent too large (limit 64)"));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.skip_ws();
                Ok(-&self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(Poly::constant(self.kind, Scalar::from_rational(r)))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Poly::constant(self.kind, Scalar::i()))
            }
            Some(c) if c == b'p' || c == b'q' || c == b'x' => self.variable(c),
            Some(_) => Err(self.err("expected a number, variable, 'i', '-' or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn variable(&mut self, letter: u8) -> Result<Poly> {
        let start = self.pos;
        self.pos += 1;
        let idx = self.uint().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("variable '{}' needs a 1-based index", letter as char),
        })?;
        if idx == 0 {
            return Err(Error::Parse {
                pos: start,
                msg: "variable indices are 1-based".into(),
            });
        }
        let idx = (idx - 1) as usize;
        match (self.kind, letter) {
            (VarKind::Symplectic { pairs }, b'p') if idx < pairs => Ok(Poly::p(pairs, idx)),
            (VarKind::Symplectic { pairs }, b'q') if idx < pairs => Ok(Poly::q(pairs, idx)),
            (VarKind::Symplectic { pairs }, b'p' | b'q') => Err(Error::Parse {
                pos: start,
                msg: format!("variable index exceeds n = {}", pairs),
            }),
            (VarKind::Symplectic { .. }, _) => Err(Error::Parse {
                pos: start,
                msg: "expected a symplectic variable p<k> or q<k>".into(),
            }),
            (VarKind::Plain { vars }, b'x') if idx < vars => Ok(Poly::x(vars, idx)),
            (VarKind::Plain { vars }, b'x') => Err(Error::Parse {
                pos: start,
                msg: format!("variable index exceeds n = {}", vars),
            }),
            (VarKind::Plain { .. }, _) => Err(Error::Parse {
                pos: start,
                msg: "expected a plain variable x<k>".into(),
            }),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "number too large".into(),
            })
    }

    fn rational(&mut self) -> Result<BigRational> {
        let numer = self.uint_big()?;
        // A '/' directly after an integer literal is part of the rational.
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let dstart = self.pos;
            let denom = self.uint_big()?;
            if denom == BigInt::from(0) {
                return Err(Error::Parse {
                    pos: dstart,
                    msg: "zero denominator".into(),
                });
            }
            return Ok(BigRational::new(numer, denom));
        }
        Ok(BigRational::from_integer(numer))
    }

    fn uint_big(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<BigInt>()
            .unwrap())
    }
}

/// Deterministically pretty-prints a polynomial; alias for the `Display`
/// implementation, provided for discoverability next to [`parse_poly`].
pub fn print_poly(p: &Poly) -> String {
    p.to_string()
}
