//! Text grammar for polynomials and rational functions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' UINT)?
//! atom   := INT | NAME | '(' expr ')'
//! ```
//!
//! Polynomials are the expressions whose divisions are by nonzero
//! constants only, so `3/2*X1^2 - X2` is a polynomial and `1/t` is not.

use num_bigint::BigInt;
use thiserror::Error;

use super::{ExactError, Fraction, Poly, Rational, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column within the parsed text.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(i) => format!("`{i}`"),
        Tok::Name(n) => format!("`{n}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let v = digits.parse::<BigInt>().expect("ascii digits");
            out.push((Tok::Int(v), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(ParseError::at(col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn lift(&self, col: usize, e: ExactError) -> ParseError {
        ParseError::at(col, e.to_string())
    }

    fn expr(&mut self) -> Result<Fraction, ParseError> {
        let mut acc = match self.peek() {
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            let col = self.col();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.checked_add(&rhs).map_err(|e| self.lift(col, e))?;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.checked_sub(&rhs).map_err(|e| self.lift(col, e))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Fraction, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let col = self.col();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.checked_mul(&rhs).map_err(|e| self.lift(col, e))?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).map_err(|e| self.lift(col, e))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Fraction, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Fraction, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        match self.bump() {
            Tok::Int(k) => {
                let k: u32 = k
                    .try_into()
                    .map_err(|_| ParseError::at(col, "exponent too large"))?;
                base.pow(k).map_err(|e| self.lift(col, e))
            }
            other => Err(ParseError::at(
                col,
                format!("expected unsigned exponent, found {}", describe(&other)),
            )),
        }
    }

    fn atom(&mut self) -> Result<Fraction, ParseError> {
        let col = self.col();
        match self.bump() {
            Tok::Int(v) => Ok(Fraction::constant(self.vars, Rational::from_integer(v))),
            Tok::Name(name) => match self.vars.index_of(&name) {
                Some(i) => Fraction::generator(self.vars, i).map_err(|e| self.lift(col, e)),
                None => Err(ParseError::at(
                    col,
                    format!("unknown variable `{name}` (declared: {})", self.vars),
                )),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.col();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    other => Err(ParseError::at(
                        close,
                        format!("expected `)`, found {}", describe(&other)),
                    )),
                }
            }
            other => Err(ParseError::at(
                col,
                format!("expected a number, variable or `(`, found {}", describe(&other)),
            )),
        }
    }
}

/// Parses a rational function over `vars`.
pub fn parse_fraction(src: &str, vars: &Vars) -> Result<Fraction, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, vars };
    if *p.peek() == Tok::End {
        return Err(ParseError::at(1, "empty expression"));
    }
    let value = p.expr()?;
    if *p.peek() != Tok::End {
        let col = p.col();
        let t = p.bump();
        return Err(ParseError::at(col, format!("unexpected {}", describe(&t))));
    }
    Ok(value)
}

/// Parses a polynomial over `vars`; division by a non-constant is rejected.
pub fn parse_poly(src: &str, vars: &Vars) -> Result<Poly, ParseError> {
    parse_fraction(src, vars)?
        .as_poly()
        .ok_or_else(|| ParseError::at(1, "not a polynomial: division by a non-constant"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn coefficients_and_powers() {
        let xs = Vars::indexed("X", 2);
        let p = parse_poly("3/2*X1^2 - X2 + 4", &xs).unwrap();
        assert_eq!(p.to_string(), "-X2 + 3/2*X1^2 + 4");
        let q = parse_poly("-X1^2", &xs).unwrap();
        assert_eq!(q.coeff(&crate::exact::ExponentVector::new(vec![2, 0])), rat(-1, 1));
    }

    #[test]
    fn unknown_name_is_reported() {
        let v = Vars::new(&["u", "t"]).unwrap();
        let err = parse_fraction("t + w*u", &v).unwrap_err();
        assert_eq!(err.column, 5);
        assert!(err.message.contains("`w`"), "{}", err.message);
    }

    #[test]
    fn rejects_non_polynomials_and_junk() {
        let v = Vars::new(&["u", "t"]).unwrap();
        assert!(parse_poly("1/t", &v).is_err());
        assert!(parse_poly("t^-1", &v).is_err());
        assert!(parse_poly("t +", &v).is_err());
        assert!(parse_poly("(t", &v).is_err());
        assert!(parse_poly("", &v).is_err());
        assert!(parse_poly("t $ u", &v).is_err());
        assert!(parse_fraction("1/(t - t)", &v).is_err());
    }
}
