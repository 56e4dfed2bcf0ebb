//! Reader for the scalar display syntax, e.g. `3/2*i*(2pi)^(1/2)*z^(-1)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    TwoPi,
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ScalarError> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let ch = bytes[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = bytes[start..k].iter().collect();
            if k + 1 < bytes.len() && bytes[k] == 'p' && bytes[k + 1] == 'i' && digits == "2" {
                let after = bytes.get(k + 2).copied();
                if !after.is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    out.push((start, Tok::TwoPi));
                    k += 2;
                    continue;
                }
            }
            out.push((start, Tok::Int(digits.parse().unwrap())));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = k;
            while k < bytes.len() && (bytes[k].is_alphanumeric() || bytes[k] == '_') {
                k += 1;
            }
            out.push((start, Tok::Ident(bytes[start..k].iter().collect())));
        } else if "+-*/^()".contains(ch) {
            out.push((k, Tok::Op(ch)));
            k += 1;
        } else {
            return Err(ScalarError::Parse { pos: k, msg: format!("unexpected character '{}'", ch) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ScalarError> {
        Err(ScalarError::Parse { pos: self.offset(), msg: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (n, d) = self.exponent()?;
        if d == 1 {
            if n < 0 && base.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Ok(base.powi(n))
        } else {
            let root = base.sqrt_monomial()?;
            Ok(root.powi(n))
        }
    }

    fn int(&mut self) -> Result<i64, ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                i64::try_from(v).or_else(|_| self.err("exponent too large"))
            }
            _ => self.err("expected integer"),
        }
    }

    fn exponent(&mut self) -> Result<(i64, i64), ScalarError> {
        if self.eat('(') {
            let neg = self.eat('-');
            let mut n = self.int()?;
            if neg {
                n = -n;
            }
            let d = if self.eat('/') { self.int()? } else { 1 };
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            if d != 1 && d != 2 {
                return self.err("only half-integer exponents are supported");
            }
            if d == 2 && n % 2 == 0 {
                return Ok((n / 2, 1));
            }
            Ok((n, d))
        } else if self.eat('-') {
            Ok((-self.int()?, 1))
        } else {
            Ok((self.int()?, 1))
        }
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Scalar::from_rational(BigRational::from_integer(v)))
            }
            Some(Tok::TwoPi) => {
                self.pos += 1;
                Ok(Scalar::two_pi())
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    Ok(Scalar::i())
                } else {
                    Ok(Scalar::param(&name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            _ => self.err("expected a number, parameter, i, 2pi or '('"),
        }
    }
}

pub fn parse_scalar(src: &str) -> Result<Scalar, ScalarError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, len: src.len() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}
