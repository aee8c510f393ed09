//! Parser for exact expressions such as `"(z - 1)^2/(z + 1/2 i)"` or `"3/4 - 1/2 i"`.
//!
//! Grammar (juxtaposition means multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | 'z' | 'i' | '(' expr ')'
//! ```
//!
//! Decimal literals are rejected so that values stay exact.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::divisor::Point;
use super::gaussian::GQ;
use super::poly::Poly;
use super::ratfun::RF;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Z,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '0'..='9' => {
                let st = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < chars.len()
                    && (chars[i + 1] == '.' || chars[i + 1] == 'e' || chars[i + 1] == 'E')
                {
                    return Err(Error::Parse(format!(
                        "decimal literal rejected in exact field: {s:?}"
                    )));
                }
                let digits: String = chars[st..=i].iter().collect();
                out.push(Tok::Int(
                    digits
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad integer {digits}")))?,
                ));
            }
            '.' => {
                return Err(Error::Parse(format!(
                    "decimal literal rejected in exact field: {s:?}"
                )))
            }
            'z' => out.push(Tok::Z),
            'i' => out.push(Tok::I),
            '+' => out.push(Tok::Plus),
            '-' | '\u{2212}' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
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

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in {:?}", self.src))
    }

    fn expr(&mut self) -> Result<RF> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RF> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = &acc * &d.inv().map_err(|_| self.err("division by zero"))?;
                }
                Some(Tok::Int(_)) | Some(Tok::Z) | Some(Tok::I) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RF> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RF> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.next() {
                Some(Tok::Int(n)) => {
                    i64::try_from(n).map_err(|_| self.err("exponent too large"))?
                }
                _ => return Err(self.err("expected integer exponent")),
            };
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|_| self.err("negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RF> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(RF::constant(GQ::from_real(BigRational::from_integer(n)))),
            Some(Tok::Z) => Ok(RF::z()),
            Some(Tok::I) => Ok(RF::constant(GQ::i())),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("unexpected end or token")),
        }
    }
}

/// Parse a rational function of `z`.
pub fn parse_rf(s: &str) -> Result<RF> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        src: s,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

pub fn parse_poly(s: &str) -> Result<Poly> {
    let f = parse_rf(s)?;
    if !f.is_polynomial() {
        return Err(Error::Parse(format!("expected a polynomial: {s:?}")));
    }
    Ok(f.num().clone())
}

/// Parse a constant in `Q(i)`.
pub fn parse_gq(s: &str) -> Result<GQ> {
    parse_rf(s)?
        .as_constant()
        .ok_or_else(|| Error::Parse(format!("expected a constant: {s:?}")))
}

/// Parse a real rational constant.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let c = parse_gq(s)?;
    if !c.is_real() {
        return Err(Error::Parse(format!("expected a real rational: {s:?}")));
    }
    Ok(c.re)
}

/// Parse a point: `inf` / `infinity` or a Gaussian-rational constant.
pub fn parse_point(s: &str) -> Result<Point> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "\u{221e}" {
        return Ok(Point::Infinity);
    }
    Ok(Point::Finite(parse_gq(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn parses_rational_functions() {
        let f = parse_rf("(z-1)^2/(z+1)").unwrap();
        assert_eq!(f.num(), &Poly::from_ints(&[1, -2, 1]));
        assert_eq!(f.den(), &Poly::from_ints(&[1, 1]));
        assert_eq!(parse_rf("z^-1").unwrap(), RF::linear_power(&GQ::zero(), -1));
        assert_eq!(
            parse_rf("2z + 3").unwrap(),
            RF::from_poly(Poly::from_ints(&[3, 2]))
        );
    }

    #[test]
    fn parses_gaussian_constants() {
        assert_eq!(parse_gq("1/2 + 3/4 i").unwrap(), GQ::from_parts(1, 2, 3, 4));
        assert_eq!(parse_gq("-i").unwrap(), GQ::from_parts(0, 1, -1, 1));
        assert_eq!(
            parse_gq(&GQ::from_parts(-5, 3, -7, 2).to_string()).unwrap(),
            GQ::from_parts(-5, 3, -7, 2)
        );
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        assert!(matches!(parse_rf("0.5 z"), Err(Error::Parse(_))));
        assert!(matches!(parse_rf("1e3"), Err(Error::Parse(_))));
        assert!(matches!(parse_rf("z +"), Err(Error::Parse(_))));
        assert!(matches!(parse_rf("1/(z-z)"), Err(Error::Parse(_))));
        assert!(matches!(parse_gq("z"), Err(Error::Parse(_))));
    }

    #[test]
    fn round_trips_display() {
        for s in ["(z^2 - 1)/z^3", "(z + 1)/z^2", "z^3 - (1/2 + i)*z + 7"] {
            let f = parse_rf(s).unwrap();
            assert_eq!(parse_rf(&f.to_expr()).unwrap(), f);
        }
    }
}
