//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := coeff | var ('^' uint)? | '(' expr ')' | '-' factor
//! coeff  := int ('/' uint)?
//! var    := [A-Za-z][A-Za-z0-9_]*
//! ```

use num_bigint::BigInt;

use super::poly::{Monomial, Polynomial, RingRef};
use super::scalar::Scalar;
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, ring: &RingRef) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(out)
}

/// Parses a constant expression into a field element.
pub fn parse_scalar(text: &str, ring: &RingRef) -> Result<Scalar> {
    let p = parse_poly(text, ring)?;
    p.constant_value()
        .ok_or_else(|| Error::Syntax { offset: 0, message: format!("`{text}` is not a constant") })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a RingRef,
}

impl Parser<'_> {
    fn syntax(&self, message: String) -> Error {
        Error::Syntax { offset: self.pos, message }
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

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            None => Err(self.syntax("unexpected end of input".into())),
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.coeff(),
            Some(c) if c.is_ascii_alphabetic() => self.var(),
            Some(c) => Err(self.syntax(format!("unexpected `{}`", c as char))),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits".into()));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digit string parses"))
    }

    fn coeff(&mut self) -> Result<Polynomial> {
        let num = self.digits()?;
        let mut den = BigInt::from(1);
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            den = self.digits()?;
            if self.ring.field().ratio(&BigInt::from(1), &den).is_none() {
                return Err(Error::DivisionByZero { offset: at });
            }
        }
        let c = self.ring.field().ratio(&num, &den).expect("denominator checked");
        Ok(Polynomial::constant(self.ring, c))
    }

    fn var(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let idx = self.ring.var_index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut exp = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.digits()?;
            exp = u32::try_from(e).map_err(|_| self.syntax("exponent too large".into()))?;
        }
        let mut m = Monomial::one(self.ring.nvars());
        m.0[idx] = exp;
        Ok(Polynomial::monomial(self.ring, self.ring.field().one(), m))
    }
}
