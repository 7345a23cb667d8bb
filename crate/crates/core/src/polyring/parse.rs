//! Polynomial text grammar.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor (['*' | '/'] factor)*      -- '*' may be omitted
//! factor := '-' factor | atom ['^' integer]
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Division is only by nonzero constants, so `3/2*x^2*y - y + 1` and
//! `2x` both parse.

use num_bigint::BigInt;

use super::{Ctx, Poly};
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

pub(crate) fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^(),;:{}=|>".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// Recursive-descent polynomial parser over a token slice; shared with
/// the presentation-document parser.
pub(crate) struct PolyParser<'a> {
    ctx: &'a Ctx,
    toks: &'a [(usize, Tok)],
    pub(crate) pos: usize,
    end: usize,
}

impl<'a> PolyParser<'a> {
    pub(crate) fn new(ctx: &'a Ctx, toks: &'a [(usize, Tok)], pos: usize, end: usize) -> Self {
        PolyParser { ctx, toks, pos, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    pub(crate) fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Sym('+')) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.factor()?;
                    let inv = d.as_constant().and_then(|c| c.inverse()).ok_or(Error::Parse {
                        pos: at,
                        msg: "division only by a nonzero constant".into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        if let Some(Tok::Sym('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Int(n)) => u32::try_from(n.clone()).ok().filter(|e| *e <= MAX_EXPONENT),
                _ => return self.err("expected an integer exponent"),
            };
            let Some(e) = e else {
                return self.err(format!("exponent exceeds {MAX_EXPONENT}"));
            };
            self.pos += 1;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.ctx, self.ctx.field().from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => match self.ctx.index_of(&name) {
                Some(i) => {
                    self.pos += 1;
                    Poly::var(self.ctx, i)
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a complete polynomial over `ctx`.
pub fn parse_poly(ctx: &Ctx, src: &str) -> Result<Poly> {
    let toks = lex(src)?;
    let mut p = PolyParser::new(ctx, &toks, 0, src.len());
    let out = p.expr()?;
    if p.pos != toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Identifiers in order of first appearance; used to infer a variable list.
pub fn scan_identifiers(src: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in lex(src)? {
        if let Tok::Ident(s) = t {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{Field, MonomialOrder, PolyContext};

    fn ctx() -> Ctx {
        PolyContext::new(["x", "y"], Field::Rationals, MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn parses_and_prints_canonically() {
        let c = ctx();
        let p = parse_poly(&c, "3/2*x^2*y - y + 1").unwrap();
        assert_eq!(p.to_string(), "3/2*x^2*y - y + 1");
        assert_eq!(parse_poly(&c, "2x").unwrap().to_string(), "2*x");
        assert_eq!(parse_poly(&c, "(x+1)(x-1)").unwrap().to_string(), "x^2 - 1");
        assert_eq!(parse_poly(&c, "-x^2").unwrap().to_string(), "-x^2");
        assert_eq!(parse_poly(&c, "x y - y x").unwrap().to_string(), "0");
        assert_eq!(parse_poly(&c, "x/2 - 1/3").unwrap().to_string(), "1/2*x - 1/3");
    }

    #[test]
    fn reports_positions() {
        let c = ctx();
        assert_eq!(
            parse_poly(&c, "x + z").unwrap_err(),
            Error::Parse { pos: 4, msg: "unknown variable `z`".into() }
        );
        assert!(matches!(parse_poly(&c, "x +"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_poly(&c, "x / y"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_poly(&c, "x $"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_poly(&c, "(x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(&c, "x^99999"), Err(Error::Parse { .. })));
    }

    #[test]
    fn prime_field_printing() {
        let c = PolyContext::new(["x"], Field::Prime(5), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(parse_poly(&c, "x - 1").unwrap().to_string(), "x + 4");
        assert_eq!(parse_poly(&c, "x/2").unwrap().to_string(), "3*x");
    }

    #[test]
    fn scans_identifiers_in_order() {
        assert_eq!(scan_identifiers("y^2 + x*y + 3").unwrap(), vec!["y", "x"]);
        assert!(scan_identifiers("5").unwrap().is_empty());
    }
}
