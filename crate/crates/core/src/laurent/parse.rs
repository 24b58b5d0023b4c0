//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expression := ['+'|'-'] term (('+'|'-') term)*
//! term       := [rational ['*']] factor (['*'] factor)* | rational
//! factor     := ('x'|'y') ['^' signed-integer] | '(' expression ')' ['^' unsigned-integer]
//! rational   := integer ['/' positive-integer]
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{LatticePoint, LaurentPolynomial, Rational};
use crate::error::{Error, Result};

/// Upper bound on `(...)^k` so a typo cannot request an astronomically large expansion.
const MAX_GROUP_POWER: u64 = 1000;

pub(super) fn parse(text: &str) -> Result<LaurentPolynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let poly = p.expression()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::syntax(p.pos, format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
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

    fn expression(&mut self) -> Result<LaurentPolynomial> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial> {
        let start = self.pos;
        let mut acc = LaurentPolynomial::one();
        let mut seen_any = false;

        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let c = self.rational()?;
            acc = acc.scale(&c);
            seen_any = true;
            if self.eat(b'*') {
                acc = acc.checked_mul(&self.factor()?)?;
            }
        }
        loop {
            match self.peek() {
                Some(b'x') | Some(b'y') | Some(b'(') => {
                    acc = acc.checked_mul(&self.factor()?)?;
                    seen_any = true;
                }
                Some(b'*') if seen_any => {
                    self.pos += 1;
                    acc = acc.checked_mul(&self.factor()?)?;
                }
                _ => break,
            }
        }
        if !seen_any {
            self.skip_ws();
            return Err(Error::syntax(start.max(self.pos), "expected a term"));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPolynomial> {
        match self.peek() {
            Some(v @ (b'x' | b'y')) => {
                self.pos += 1;
                let e = if self.eat(b'^') { self.signed_int()? } else { 1 };
                let exp = if v == b'x' {
                    LatticePoint::new(e, 0)
                } else {
                    LatticePoint::new(0, e)
                };
                Ok(LaurentPolynomial::monomial(Rational::one(), exp))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expression()?;
                if !self.eat(b')') {
                    return Err(Error::syntax(self.pos, "expected ')'"));
                }
                if self.eat(b'^') {
                    let at = self.pos;
                    let k = self.unsigned_int()?;
                    if k > MAX_GROUP_POWER {
                        return Err(Error::syntax(
                            at,
                            format!("power {k} exceeds the limit {MAX_GROUP_POWER}"),
                        ));
                    }
                    inner.checked_pow(k as u32)
                } else {
                    Ok(inner)
                }
            }
            _ => Err(Error::syntax(self.pos, "expected 'x', 'y' or '('")),
        }
    }

    fn digits(&mut self) -> Result<&[u8]> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn big_int(&mut self) -> Result<BigInt> {
        let d = self.digits()?;
        Ok(BigInt::parse_bytes(d, 10).expect("ascii digits"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.big_int()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.big_int()?;
            if den.is_zero() {
                return Err(Error::syntax(at, "zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn unsigned_int(&mut self) -> Result<u64> {
        let at = self.pos;
        let d = self.digits()?;
        std::str::from_utf8(d)
            .expect("ascii digits")
            .parse::<u64>()
            .map_err(|_| Error::ExponentOverflow(format!("power at byte {at} is too large")))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let at = self.pos;
        let d = self.digits()?;
        let s = std::str::from_utf8(d).expect("ascii digits");
        let parsed = if negative {
            format!("-{s}").parse::<i64>()
        } else {
            s.parse::<i64>()
        };
        parsed.map_err(|_| Error::ExponentOverflow(format!("exponent at byte {at} is outside the signed 64-bit range")))
    }
}
