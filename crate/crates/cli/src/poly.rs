//! Polynomial expression parser: integer literals, `x`, `^`, `*`, `+`, `-`
//! and parentheses, expanded to a coefficient vector.

use num_bigint::BigInt;
use num_traits::Zero;
use powerfree_core::localarith::{poly_invariants, IntPolynomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input where parsing failed.
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(BigInt),
    X,
    Caret,
    Star,
    Plus,
    Minus,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                out.push((start, Token::Number(digits.parse().unwrap())));
            }
            b'x' | b'X' => {
                out.push((i, Token::X));
                i += 1;
            }
            b'^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            b'*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            b'+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            b'(' => {
                out.push((i, Token::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Token::Close));
                i += 1;
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected character {:?}", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(out)
}

/// Dense ascending coefficients; the zero polynomial is the empty vector.
type Poly = Vec<BigInt>;

fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

fn neg(a: &Poly) -> Poly {
    a.iter().map(|c| -c).collect()
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

fn trim(mut p: Poly) -> Poly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(o, _)| o)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn fail<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                neg(&self.term()?)
            }
            Some(Token::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = add(&acc, &self.term()?);
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = add(&acc, &neg(&self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            acc = mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let exp = match self.bump() {
                Some(Token::Number(n)) => n.clone(),
                _ => {
                    self.pos -= 1;
                    return self.fail("expected an exponent after ^");
                }
            };
            let exp: u32 = match exp.try_into() {
                Ok(e) if e <= 64 => e,
                _ => {
                    self.pos -= 1;
                    return self.fail("exponent out of range (0..=64)");
                }
            };
            let mut acc = vec![BigInt::from(1)];
            for _ in 0..exp {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(Token::Number(_)) => {
                let n = match self.bump() {
                    Some(Token::Number(n)) => n.clone(),
                    _ => unreachable!(),
                };
                Ok(if n.is_zero() { Vec::new() } else { vec![n] })
            }
            Some(Token::X) => {
                self.bump();
                Ok(vec![BigInt::zero(), BigInt::from(1)])
            }
            Some(Token::Open) => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek(), Some(Token::Close)) {
                    return self.fail("expected )");
                }
                self.bump();
                Ok(inner)
            }
            Some(Token::Minus) => {
                self.bump();
                Ok(neg(&self.atom()?))
            }
            _ => self.fail("expected a number, x, or ("),
        }
    }
}

/// Parses an expression into an [`IntPolynomial`]. The zero polynomial is
/// rejected (it has no content/discriminant data).
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens: &tokens, pos: 0, end: text.len() };
    if parser.peek().is_none() {
        return parser.fail("empty polynomial");
    }
    let poly = parser.expr()?;
    if parser.peek().is_some() {
        return parser.fail("unexpected trailing input");
    }
    poly_invariants(poly).map_err(|e| ParseError {
        offset: 0,
        message: format!("{e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(text: &str) -> Vec<i64> {
        parse_polynomial(text)
            .unwrap()
            .coefficients()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(coeffs("x^3-3*x-1"), vec![-1, -3, 0, 1]);
        assert_eq!(coeffs("(x+1)*(x-1)"), vec![-1, 0, 1]);
        assert_eq!(coeffs("x"), vec![0, 1]);
        assert_eq!(coeffs("-x^2"), vec![0, 0, -1]);
        assert_eq!(coeffs("4*x^3+4"), vec![4, 0, 0, 4]);
        assert_eq!(coeffs("2 * ( x + 3 )"), vec![6, 2]);
        assert_eq!(coeffs("x*x*x - x - 1"), vec![-1, -1, 0, 1]);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse_polynomial("x^").unwrap_err().offset, 2);
        assert_eq!(parse_polynomial("x^+2").unwrap_err().offset, 2);
        assert_eq!(parse_polynomial("x+*2").unwrap_err().offset, 2);
        assert_eq!(parse_polynomial("(x+1").unwrap_err().offset, 4);
        assert_eq!(parse_polynomial("x$").unwrap_err().offset, 1);
        assert_eq!(parse_polynomial("").unwrap_err().offset, 0);
        assert!(parse_polynomial("0").is_err()); // zero polynomial
    }
}
