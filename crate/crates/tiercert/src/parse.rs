//! Tokenizer and polynomial-expression parser.
//!
//! Grammar: identifiers `[A-Za-z][A-Za-z0-9_]*`, integer literals, rational
//! literals `a/b`, operators `+ - * ^`, parentheses. Variables are bound
//! against the ambient ring; anything else is rejected with its position.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::AmbientRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Equals,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn err_at(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse { line: pos.line, col: pos.col, msg: msg.into() }
}

pub fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                // comment to end of line
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Ident(s), pos });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n: i64 = s
                    .parse()
                    .map_err(|_| err_at(pos, format!("integer literal `{s}` out of range")))?;
                out.push(Spanned { tok: Tok::Int(n), pos });
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '=' => Tok::Equals,
                    other => return Err(err_at(pos, format!("unexpected character `{other}`"))),
                };
                chars.next();
                col += 1;
                out.push(Spanned { tok, pos });
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

pub struct TokenStream {
    toks: Vec<Spanned>,
    pub idx: usize,
}

impl TokenStream {
    pub fn new(toks: Vec<Spanned>) -> TokenStream {
        TokenStream { toks, idx: 0 }
    }

    pub fn peek(&self) -> &Spanned {
        &self.toks[self.idx.min(self.toks.len() - 1)]
    }

    pub fn next(&mut self) -> Spanned {
        let t = self.toks[self.idx.min(self.toks.len() - 1)].clone();
        if self.idx < self.toks.len() - 1 {
            self.idx += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<Spanned> {
        let t = self.peek().clone();
        if &t.tok == tok {
            self.next();
            Ok(t)
        } else {
            Err(err_at(t.pos, format!("expected {what}, found {:?}", t.tok)))
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<(String, Pos)> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) => {
                self.next();
                Ok((s, t.pos))
            }
            _ => Err(err_at(t.pos, format!("expected {what}, found {:?}", t.tok))),
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek().tok, Tok::Eof)
    }

    /// Token at an absolute index, clamped to the trailing Eof.
    pub fn token_at(&self, i: usize) -> Spanned {
        self.toks[i.min(self.toks.len() - 1)].clone()
    }
}

/// Parses a polynomial expression from a token stream against a ring.
pub fn parse_poly_expr(ring: &AmbientRing, ts: &mut TokenStream) -> Result<Poly> {
    let mut acc = parse_term(ring, ts)?;
    loop {
        if ts.eat(&Tok::Plus) {
            let t = parse_term(ring, ts)?;
            acc = ring.add(&acc, &t);
        } else if ts.eat(&Tok::Minus) {
            let t = parse_term(ring, ts)?;
            acc = ring.sub(&acc, &t);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term(ring: &AmbientRing, ts: &mut TokenStream) -> Result<Poly> {
    let mut acc = parse_factor(ring, ts)?;
    while ts.eat(&Tok::Star) {
        let f = parse_factor(ring, ts)?;
        acc = ring.mul(&acc, &f);
    }
    Ok(acc)
}

fn parse_factor(ring: &AmbientRing, ts: &mut TokenStream) -> Result<Poly> {
    let base = parse_atom(ring, ts)?;
    if ts.eat(&Tok::Caret) {
        let t = ts.next();
        match t.tok {
            Tok::Int(n) if (0..=10_000).contains(&n) => Ok(ring.pow(&base, n as u32)),
            _ => Err(err_at(t.pos, "expected exponent in 0..=10000 after `^`")),
        }
    } else {
        Ok(base)
    }
}

fn parse_atom(ring: &AmbientRing, ts: &mut TokenStream) -> Result<Poly> {
    let t = ts.next();
    match t.tok {
        Tok::Minus => {
            let f = parse_factor(ring, ts)?;
            Ok(ring.neg(&f))
        }
        Tok::Ident(name) => match ring.var_index(&name) {
            Some(i) => Ok(ring.var(i)),
            None => Err(err_at(t.pos, format!("unknown variable `{name}`"))),
        },
        Tok::Int(n) => {
            // optional rational literal n/d
            if matches!(ts.peek().tok, Tok::Slash) {
                let save = ts.idx;
                ts.next();
                let dt = ts.next();
                match dt.tok {
                    Tok::Int(d) => {
                        let c = ring
                            .field
                            .from_ratio(n, d)
                            .map_err(|e| err_at(dt.pos, e.to_string()))?;
                        return Ok(ring.constant(c));
                    }
                    _ => {
                        ts.idx = save;
                    }
                }
            }
            Ok(ring.int(n))
        }
        Tok::LParen => {
            let e = parse_poly_expr(ring, ts)?;
            ts.expect(&Tok::RParen, "`)`")?;
            Ok(e)
        }
        other => Err(err_at(t.pos, format!("expected polynomial atom, found {other:?}"))),
    }
}

/// Parses a complete polynomial from text.
pub fn parse_poly(ring: &AmbientRing, text: &str) -> Result<Poly> {
    let mut ts = TokenStream::new(tokenize(text)?);
    let p = parse_poly_expr(ring, &mut ts)?;
    let t = ts.peek().clone();
    if !ts.at_eof() {
        return Err(err_at(t.pos, format!("trailing input: {:?}", t.tok)));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::monomial::MonomialOrder;

    fn ring() -> AmbientRing {
        AmbientRing::new(
            vec!["x".into(), "y".into()],
            FieldSpec::prime_field(5).unwrap(),
            MonomialOrder::GrevLex,
        )
    }

    #[test]
    fn parses_cusp_equation() {
        let r = ring();
        let p = parse_poly(&r, "y^2 - x^3").unwrap();
        assert_eq!(r.poly_string(&p), "4*x^3 + y^2");
    }

    #[test]
    fn display_reparses_to_same_poly() {
        let r = ring();
        let p = parse_poly(&r, "(x + 2*y)*(x - 2*y) + 3").unwrap();
        let q = parse_poly(&r, &r.poly_string(&p)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn unknown_variable_is_an_error_with_position() {
        let r = ring();
        match parse_poly(&r, "x + z") {
            Err(Error::Parse { line: 1, col: 5, .. }) => {}
            other => panic!("expected parse error at 1:5, got {other:?}"),
        }
    }

    #[test]
    fn rational_literal_in_f5() {
        let r = ring();
        // 1/2 = 3 mod 5
        let p = parse_poly(&r, "1/2*x").unwrap();
        assert_eq!(r.poly_string(&p), "3*x");
    }

    #[test]
    fn unary_minus_binds_to_power() {
        let r = ring();
        let p = parse_poly(&r, "-x^2").unwrap();
        assert_eq!(r.poly_string(&p), "4*x^2");
    }

    #[test]
    fn rejects_garbage() {
        let r = ring();
        assert!(parse_poly(&r, "x +").is_err());
        assert!(parse_poly(&r, "^2").is_err());
        assert!(parse_poly(&r, "x y").is_err());
        assert!(parse_poly(&r, "2 ** x").is_err());
    }
}
