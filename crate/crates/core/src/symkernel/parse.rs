//! Text syntax for expressions, shared by `Display` and the parser.
//!
//! ```text
//! P, Q            lattice fields at shift 0;  P[1], Q[-2] shifted
//! u1 u2 v1 v2 w   continuum fields at jet 0;  u1{2} second x-derivative
//! th1, th2        odd generators (th1[-1], th2{1}, ...)
//! + - * / ^n ( )  with integer n, possibly negative
//! log(...)        logarithm of a polynomial
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::expr::Expr;
use super::monomial::Monomial;
use super::poly::Poly;
use super::var::{Field, Mode, Odd, Slot, Var};
use super::Rational;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    odd_mode: Mode,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn signed_small(&mut self) -> Result<i32> {
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let n = self.integer()?;
        let n: i32 = match i32::try_from(n) {
            Ok(v) => v,
            Err(_) => return self.err("integer out of range"),
        };
        Ok(if neg { -n } else { n })
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn slot(&mut self, default: Mode) -> Result<Slot> {
        if self.src.get(self.pos) == Some(&b'[') {
            self.pos += 1;
            let s = self.signed_small()?;
            self.expect(b']')?;
            Ok(Slot::Shift(s))
        } else if self.src.get(self.pos) == Some(&b'{') {
            self.pos += 1;
            let s = self.signed_small()?;
            if s < 0 {
                return self.err("negative jet order");
            }
            self.expect(b'}')?;
            Ok(Slot::Jet(s as u32))
        } else {
            Ok(Slot::zero(default))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.try_mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                acc = acc.try_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let paren = self.eat(b'(');
            let n = self.signed_small()?;
            if paren {
                self.expect(b')')?;
            }
            return base.pow(n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Expr::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident().unwrap();
                if name == "log" {
                    self.expect(b'(')?;
                    let arg = self.expr()?;
                    self.expect(b')')?;
                    return Expr::log(&arg);
                }
                if let Some(alpha) = name.strip_prefix("th") {
                    let alpha: u8 = match alpha {
                        "1" => 1,
                        "2" => 2,
                        _ => {
                            self.pos = start;
                            return self.err(format!("unknown odd generator '{name}'"));
                        }
                    };
                    let slot = self.slot(self.odd_mode)?;
                    return Ok(Expr::odd(Odd { alpha, slot }));
                }
                match Field::from_name(&name) {
                    Some(field) => {
                        let slot = self.slot(field.default_mode())?;
                        Ok(Expr::var(Var { field, slot }))
                    }
                    None => {
                        self.pos = start;
                        self.err(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
        }
    }
}

fn parse_with(s: &str, odd_mode: Mode) -> Result<Expr> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        odd_mode,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Parses the text syntax described in the module docs. Bare odd
    /// generators take the mode of the surrounding expression.
    pub fn parse(s: &str) -> Result<Expr> {
        match parse_with(s, Mode::Lattice) {
            Err(Error::ModeMismatch) => parse_with(s, Mode::Continuum),
            r => r,
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Expr> {
        Expr::parse(s)
    }
}

/// Parses a Laurent polynomial.
pub fn parse_poly(s: &str) -> Result<Poly> {
    let e = Expr::parse(s)?;
    e.as_poly().cloned().ok_or(Error::Parse {
        pos: 0,
        msg: "expression is not a polynomial".into(),
    })
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for &(v, e) in m.even_factors() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "{v}")?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    for o in m.odd_factors() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "{o}")?;
    }
    Ok(())
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        write_monomial(f, self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in [
            "Q^2 - 2*P*Q + P^2",
            "Q[1]/(P*P[1]) - 1/P",
            "th1[-1]*th1 + 3/2*Q*th2",
            "u1{2}*u2 - v1^-2",
            "(v1 - w)^-3*v1 + 2*log(v1) - log(v1 - w)",
        ] {
            let e = Expr::parse(s).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{s} -> {e}");
        }
    }

    #[test]
    fn odd_generators_follow_context() {
        let e = Expr::parse("u1*th1").unwrap();
        assert_eq!(e.mode(), Some(Mode::Continuum));
        let e = Expr::parse("P*th1").unwrap();
        assert_eq!(e.mode(), Some(Mode::Lattice));
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(Expr::parse("P + foo"), Err(Error::Parse { pos: 4, .. })));
        assert_eq!(Expr::parse("P + u1"), Err(Error::ModeMismatch));
    }
}
