//! Canonical text form of polynomials and the matching parser.
//!
//! Terms print in descending graded-reverse-lex order with `^` for powers
//! and explicit `*` between factors, e.g.
//! `27*u0^2*u3^2 - 18*u0*u1*u2*u3 + 4*u0*u2^3`. The parser accepts the
//! superset grammar used by model files: rationals `a` or `a/b`,
//! variables, `+ - * ^ /`, parentheses, and implicit multiplication by
//! juxtaposition. Whitespace is insignificant.

use super::poly::Poly;
use super::registry::VarRegistry;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let reg = self.registry();
        for (i, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let mut wrote_factor = false;
            if !a.is_one() || m.is_one() {
                if a.denom().is_one() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())?;
                }
                wrote_factor = true;
            }
            for (v, e) in m.powers() {
                if wrote_factor {
                    write!(f, "*")?;
                }
                write!(f, "{}", reg.name(v))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}

/// Parse failure with byte offset into the input.
#[derive(Debug, Clone, thiserror::Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    reg: &'a Arc<VarRegistry>,
    src: &'a [u8],
    pos: usize,
}

/// Parse a polynomial in the canonical grammar over `reg`'s variables.
pub fn parse_poly(reg: &Arc<VarRegistry>, text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser {
        reg,
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.to_string(),
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

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut neg = false;
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
            }
            Some(b'-') => {
                self.pos += 1;
                neg = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// A product of powered atoms; `*` may be omitted, `/c` divides by a
    /// nonzero constant.
    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    let c = rhs
                        .constant_value()
                        .ok_or_else(|| self.err("divisor must be a nonzero constant"))?;
                    if c.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                // juxtaposition: `2p0`, `p0(p1+1)`, `p0 p1`
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent must be a nonnegative integer"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::constant(
                    self.reg,
                    BigRational::from_integer(n),
                ))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.reg.var(name) {
                    Some(v) => Ok(Poly::var(self.reg, v)),
                    None => Err(ParseError {
                        offset: start,
                        message: format!("unknown variable `{name}`"),
                    }),
                }
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reg() -> Arc<VarRegistry> {
        VarRegistry::new(&[("u", &["u0", "u1", "u2", "u3"]), ("p", &["p0", "p1"])])
    }

    #[test]
    fn print_then_parse_examples() {
        let r = reg();
        let f =
            parse_poly(&r, "27u0^2 u3^2 - 18 u0 u1 u2 u3 + 4u0 u2^3 + 4u1^3 u3 - u1^2 u2^2")
                .unwrap();
        let s = f.to_string();
        // descending grevlex puts the u3-free terms first
        assert_eq!(
            s,
            "-u1^2*u2^2 + 4*u0*u2^3 + 4*u1^3*u3 - 18*u0*u1*u2*u3 + 27*u0^2*u3^2"
        );
        assert_eq!(parse_poly(&r, &s).unwrap(), f);
    }

    #[test]
    fn rational_coefficients_and_parens() {
        let r = reg();
        let f = parse_poly(&r, "3/2*p0 - (p1 + 1/3)^2 + p0/2").unwrap();
        assert_eq!(parse_poly(&r, &f.to_string()).unwrap(), f);
        assert!(parse_poly(&r, "p0/p1").is_err());
        assert!(parse_poly(&r, "p0/0").is_err());
        assert!(parse_poly(&r, "q9").is_err());
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(coefs in proptest::collection::vec((-50i64..50, 0u16..4, 0u16..4, 0u16..3), 1..12)) {
            let r = reg();
            let mut f = Poly::zero(&r);
            for (c, e0, e1, e2) in coefs {
                let m = Poly::monomial(
                    &r,
                    crate::polyring::Monomial::from_exps(&[e0, e1, 0, 0, e2, 0]),
                    BigRational::from_integer(c.into()),
                );
                f = &f + &m;
            }
            let back = parse_poly(&r, &f.to_string()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
