//! Text DSL for products and identities, plus text and LaTeX rendering.
//!
//! ```text
//! identity  := product "=" product
//! product   := term { "*" term }
//! term      := "a" integer [ "^" exponent ]
//! exponent  := signed_rational | "(" exp_expr ")"
//! exp_expr  := exp_atom { ("+"|"-") exp_atom }
//! exp_atom  := signed_rational [ "*"? "pi" ] | "pi"
//! signed_rational := ["-"] integer [ "/" integer ]
//! ```
//!
//! Whitespace between tokens is ignored. A lone `1` stands for the empty
//! product, which is also how [`render`] prints it.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::engine::Identity;
use crate::exact::{ExactExponent, Rational};
use crate::model::StringProduct;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    InvalidIndex,
    ZeroDenominator,
}

/// Where parsing stopped, what the parser wanted there and what it saw.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input; at most `input.len()`.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    fn syntax(position: usize, expected: impl Into<String>, found: &Token) -> Self {
        ParseError {
            kind: ParseErrorKind::Syntax,
            position,
            expected: expected.into(),
            found: found.describe(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    A,
    Pi,
    Int(BigInt),
    Caret,
    Star,
    Slash,
    Plus,
    Minus,
    LParen,
    RParen,
    Equals,
    Unknown(char),
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::A => "`a`".into(),
            Token::Pi => "`pi`".into(),
            Token::Int(n) => format!("integer `{n}`"),
            Token::Caret => "`^`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Equals => "`=`".into(),
            Token::Unknown(c) => format!("{c:?}"),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(input: &str) -> Vec<(usize, Token)> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let token = match c {
            b'a' => Token::A,
            b'p' if bytes.get(pos + 1) == Some(&b'i') => {
                pos += 1;
                Token::Pi
            }
            b'0'..=b'9' => {
                while pos + 1 < bytes.len() && bytes[pos + 1].is_ascii_digit() {
                    pos += 1;
                }
                Token::Int(input[start..=pos].parse().expect("ascii digits"))
            }
            b'^' => Token::Caret,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'=' => Token::Equals,
            _ => {
                let ch = input[start..].chars().next().expect("in bounds");
                tokens.push((start, Token::Unknown(ch)));
                // stop at the first unknown character; the parser reports it
                break;
            }
        };
        tokens.push((start, token));
        pos += 1;
    }
    tokens.push((input.len(), Token::End));
    tokens
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
}

impl Parser {
    fn new(input: &str) -> Self {
        Parser { tokens: tokenize(input), cursor: 0 }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.cursor].1
    }

    fn position(&self) -> usize {
        self.tokens[self.cursor].0
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.cursor].1.clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        tok
    }

    fn expect(&mut self, want: Token, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::syntax(self.position(), expected, self.peek())
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Token::End => Ok(()),
            _ => Err(self.error("`*` or end of input")),
        }
    }

    fn identity(&mut self) -> Result<Identity, ParseError> {
        let lhs = self.product()?;
        if *self.peek() != Token::Equals {
            return Err(self.error("`*` or `=`"));
        }
        self.bump();
        let rhs = self.product()?;
        self.finish()?;
        Ok(Identity::new(lhs, rhs))
    }

    fn product(&mut self) -> Result<StringProduct, ParseError> {
        if *self.peek() == Token::Int(BigInt::from(1)) {
            // "1" is the empty product
            self.bump();
            return Ok(StringProduct::one());
        }
        let mut raw = vec![self.term()?];
        while *self.peek() == Token::Star {
            self.bump();
            raw.push(self.term()?);
        }
        Ok(StringProduct::normalize(raw).expect("term() rejects index 0"))
    }

    fn term(&mut self) -> Result<(u64, ExactExponent), ParseError> {
        self.expect(Token::A, "term `a<index>`")?;
        let pos = self.position();
        let index = match self.bump() {
            Token::Int(n) if n.is_zero() => {
                return Err(invalid_index(pos, "0"));
            }
            Token::Int(n) => n.to_u64().ok_or_else(|| ParseError {
                kind: ParseErrorKind::InvalidIndex,
                position: pos,
                expected: "index below 2^64".into(),
                found: format!("integer `{n}`"),
            })?,
            Token::Minus => {
                let found = match self.peek() {
                    Token::Int(n) => format!("-{n}"),
                    other => format!("`-` then {}", other.describe()),
                };
                return Err(invalid_index(pos, &found));
            }
            other => return Err(ParseError::syntax(pos, "term index", &other)),
        };
        let exponent = if *self.peek() == Token::Caret {
            self.bump();
            self.exponent()?
        } else {
            ExactExponent::one()
        };
        Ok((index, exponent))
    }

    fn exponent(&mut self) -> Result<ExactExponent, ParseError> {
        if *self.peek() == Token::LParen {
            self.bump();
            let e = self.exp_expr()?;
            self.expect(Token::RParen, "`)`")?;
            Ok(e)
        } else {
            Ok(ExactExponent::rational(self.signed_rational()?))
        }
    }

    fn exp_expr(&mut self) -> Result<ExactExponent, ParseError> {
        let mut acc = self.exp_atom()?;
        loop {
            let negate = match self.peek() {
                Token::Plus => false,
                Token::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let atom = self.exp_atom()?;
            acc = if negate { &acc - &atom } else { &acc + &atom };
        }
    }

    fn exp_atom(&mut self) -> Result<ExactExponent, ParseError> {
        if *self.peek() == Token::Pi {
            self.bump();
            return Ok(ExactExponent::pi_multiple(Rational::one()));
        }
        let coeff = self.signed_rational()?;
        match self.peek() {
            Token::Pi => {
                self.bump();
                Ok(ExactExponent::pi_multiple(coeff))
            }
            Token::Star => {
                self.bump();
                self.expect(Token::Pi, "`pi`")?;
                Ok(ExactExponent::pi_multiple(coeff))
            }
            _ => Ok(ExactExponent::rational(coeff)),
        }
    }

    fn signed_rational(&mut self) -> Result<Rational, ParseError> {
        let negative = *self.peek() == Token::Minus;
        if negative {
            self.bump();
        }
        let numer = self.integer("integer")?;
        let value = if *self.peek() == Token::Slash {
            self.bump();
            let pos = self.position();
            let denom = self.integer("denominator")?;
            Rational::new(numer, denom).map_err(|_| ParseError {
                kind: ParseErrorKind::ZeroDenominator,
                position: pos,
                expected: "non-zero denominator".into(),
                found: "integer `0`".into(),
            })?
        } else {
            Rational::from_integer(numer)
        };
        Ok(if negative { -value } else { value })
    }

    fn integer(&mut self, expected: &str) -> Result<BigInt, ParseError> {
        match self.peek() {
            Token::Int(_) => match self.bump() {
                Token::Int(n) => Ok(n),
                _ => unreachable!(),
            },
            _ => Err(self.error(expected)),
        }
    }
}

fn invalid_index(position: usize, found: &str) -> ParseError {
    ParseError {
        kind: ParseErrorKind::InvalidIndex,
        position,
        expected: "index >= 1".into(),
        found: found.to_string(),
    }
}

pub fn parse_product(input: &str) -> Result<StringProduct, ParseError> {
    let mut p = Parser::new(input);
    let product = p.product()?;
    p.finish()?;
    Ok(product)
}

pub fn parse_identity(input: &str) -> Result<Identity, ParseError> {
    Parser::new(input).identity()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    Text,
    Latex,
}

/// Renders in canonical (ascending index) order. The text style parses back
/// to the same product.
pub fn render(p: &StringProduct, style: RenderStyle) -> String {
    if p.is_one() {
        return "1".to_string();
    }
    let one = ExactExponent::one();
    let parts: Vec<String> = p
        .factors()
        .iter()
        .map(|f| match style {
            RenderStyle::Text if f.exponent == one => format!("a{}", f.index),
            RenderStyle::Text => format!("a{}^({})", f.index, f.exponent),
            RenderStyle::Latex if f.exponent == one => format!("a_{{{}}}", f.index),
            RenderStyle::Latex => format!("a_{{{}}}^{{{}}}", f.index, f.exponent.to_latex()),
        })
        .collect();
    match style {
        RenderStyle::Text => parts.join("*"),
        RenderStyle::Latex => parts.join(" \\cdot "),
    }
}

pub fn render_identity(id: &Identity, style: RenderStyle) -> String {
    format!("{} = {}", render(&id.lhs, style), render(&id.rhs, style))
}

impl fmt::Display for StringProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, RenderStyle::Text))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_identity(self, RenderStyle::Text))
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn product() -> impl Strategy<Value = StringProduct> {
        let exp = (-50i64..50, 1i64..20, -5i64..5, 1i64..4).prop_map(|(n, d, pn, pd)| {
            ExactExponent::new(Rational::new(n, d).unwrap(), Rational::new(pn, pd).unwrap())
        });
        prop::collection::vec((1u64..1000, exp), 0..8)
            .prop_map(|raw| StringProduct::normalize(raw).unwrap())
    }

    proptest! {
        #[test]
        fn text_round_trip(p in product()) {
            prop_assert_eq!(parse_product(&render(&p, RenderStyle::Text)).unwrap(), p);
        }

        #[test]
        fn never_panics(s in ".{0,40}") {
            let _ = parse_product(&s);
            let _ = parse_identity(&s);
        }

        #[test]
        fn error_position_in_bounds(s in "[a0-9pi^*/+()= -]{0,30}") {
            if let Err(e) = parse_identity(&s) {
                prop_assert!(e.position <= s.len());
            }
        }
    }
}
