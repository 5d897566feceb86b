//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' integer)?
//! base   := number | ident | func '(' expr ')' | '(' expr ')' | '-' base
//! number := integer ('/' integer)? | decimal literal
//! ```
//!
//! `number` binds tighter than division, so `x/2/3` reads as `x/(2/3)`, and
//! unary minus binds tighter than `^`, so `-x^2` reads as `(-x)^2`.

use num_bigint::BigInt;
use thiserror::Error;

use super::expr::{Expr, FuncKind, Symbol};
use super::raw::RawExpr;
use super::rational::Rational;

/// Largest accepted literal exponent.
pub const MAX_EXPONENT: u32 = 16;
/// Largest accepted nesting depth of `base`.
pub const MAX_DEPTH: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("division by zero")]
    ZeroDivision,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal(Rational),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() {
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            let mut is_decimal = false;
            if end + 1 < bytes.len() && bytes[end] == b'.' && bytes[end + 1].is_ascii_digit() {
                is_decimal = true;
                end += 1;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
            }
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut k = end + 1;
                if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    k += 1;
                }
                if k < bytes.len() && bytes[k].is_ascii_digit() {
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    is_decimal = true;
                    end = k;
                }
            }
            let text = &self.src[start..end];
            self.pos = end;
            if is_decimal {
                return Ok((Tok::Decimal(decimal_to_rational(text, start)?), start));
            }
            let v: BigInt = text.parse().map_err(|_| syntax(start, "bad integer literal"))?;
            return Ok((Tok::Int(v), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.pos = end;
            return Ok((Tok::Ident(self.src[start..end].to_string()), start));
        }
        if matches!(c, b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')') {
            self.pos += 1;
            return Ok((Tok::Op(c as char), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(syntax(start, &format!("unexpected character {ch:?}")))
    }
}

fn syntax(offset: usize, message: &str) -> ParseError {
    ParseError::Syntax { offset, message: message.to_string() }
}

fn decimal_to_rational(text: &str, offset: usize) -> Result<Rational, ParseError> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().map_err(|_| syntax(offset, "bad exponent"))?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| syntax(offset, "bad decimal literal"))?;
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 400 {
        return Err(syntax(offset, "decimal exponent out of range"));
    }
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        Rational::from_bigints(digits * pow, BigInt::from(1))
    } else {
        Rational::from_bigints(digits, pow)
    })
}

struct Parser<'a, F> {
    lex: Lexer<'a>,
    tok: Tok,
    offset: usize,
    peeked: Option<(Tok, usize)>,
    resolve: F,
    depth: usize,
}

impl<'a, F> Parser<'a, F>
where
    F: Fn(&str) -> Option<Symbol>,
{
    fn bump(&mut self) -> Result<(), ParseError> {
        let (t, o) = match self.peeked.take() {
            Some(p) => p,
            None => self.lex.next()?,
        };
        self.tok = t;
        self.offset = o;
        Ok(())
    }

    fn peek(&mut self) -> Result<&Tok, ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex.next()?);
        }
        Ok(&self.peeked.as_ref().unwrap().0)
    }

    fn expr(&mut self) -> Result<RawExpr, ParseError> {
        let mut items = vec![self.term()?];
        loop {
            match self.tok {
                Tok::Op('+') => {
                    self.bump()?;
                    items.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump()?;
                    items.push(RawExpr::neg(self.term()?));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { RawExpr::Sum(items) })
    }

    fn term(&mut self) -> Result<RawExpr, ParseError> {
        let mut items = vec![self.factor()?];
        loop {
            match self.tok {
                Tok::Op('*') => {
                    self.bump()?;
                    items.push(self.factor()?);
                }
                Tok::Op('/') => {
                    self.bump()?;
                    items.push(RawExpr::recip(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { RawExpr::Product(items) })
    }

    fn factor(&mut self) -> Result<RawExpr, ParseError> {
        let base = self.base()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let Tok::Int(k) = &self.tok else {
                return Err(syntax(self.offset, "expected an integer exponent"));
            };
            let k = u32::try_from(k.clone())
                .ok()
                .filter(|k| *k <= MAX_EXPONENT)
                .ok_or_else(|| syntax(self.offset, "exponent too large"))?;
            self.bump()?;
            return Ok(RawExpr::Pow(Box::new(base), k as i64));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RawExpr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(syntax(self.offset, "expression nested too deeply"));
        }
        let out = self.base_inner();
        self.depth -= 1;
        out
    }

    fn base_inner(&mut self) -> Result<RawExpr, ParseError> {
        let offset = self.offset;
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Int(n) => {
                self.bump()?;
                if self.tok == Tok::Op('/') && matches!(self.peek()?, Tok::Int(_)) {
                    self.bump()?;
                    let Tok::Int(d) = std::mem::replace(&mut self.tok, Tok::End) else { unreachable!() };
                    if d == BigInt::from(0) {
                        return Err(ParseError::ZeroDivision);
                    }
                    self.bump()?;
                    return Ok(RawExpr::Num(Rational::from_bigints(n, d)));
                }
                Ok(RawExpr::Num(Rational::from_bigints(n, BigInt::from(1))))
            }
            Tok::Decimal(r) => {
                self.bump()?;
                Ok(RawExpr::Num(r))
            }
            Tok::Ident(name) => {
                self.bump()?;
                if let Some(kind) = FuncKind::from_name(&name) {
                    if self.tok != Tok::Op('(') {
                        return Err(syntax(self.offset, &format!("expected '(' after `{name}`")));
                    }
                    self.bump()?;
                    let arg = self.expr()?;
                    self.expect_close()?;
                    return Ok(RawExpr::Func(kind, Box::new(arg)));
                }
                match (self.resolve)(&name) {
                    Some(s) => Ok(RawExpr::Sym(s)),
                    None => Err(ParseError::UnknownIdentifier { name, offset }),
                }
            }
            Tok::Op('(') => {
                self.bump()?;
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            Tok::Op('-') => {
                self.bump()?;
                Ok(RawExpr::neg(self.base()?))
            }
            Tok::End => Err(syntax(offset, "unexpected end of input")),
            Tok::Op(c) => Err(syntax(offset, &format!("unexpected '{c}'"))),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::Op(')') {
            return Err(syntax(self.offset, "expected ')'"));
        }
        self.bump()
    }
}

/// Parse `text` into an uncanonicalised tree; identifiers are resolved with
/// `resolve`.
pub fn parse_raw<F>(text: &str, resolve: F) -> Result<RawExpr, ParseError>
where
    F: Fn(&str) -> Option<Symbol>,
{
    let mut p = Parser {
        lex: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        offset: 0,
        peeked: None,
        resolve,
        depth: 0,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(syntax(p.offset, "unexpected trailing input"));
    }
    Ok(e)
}

/// Parse and canonicalise.
pub fn parse_with<F>(text: &str, resolve: F) -> Result<Expr, ParseError>
where
    F: Fn(&str) -> Option<Symbol>,
{
    parse_raw(text, resolve)?.canonicalize().map_err(|_| ParseError::ZeroDivision)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(name: &str) -> Option<Symbol> {
        match name {
            "t1" => Some(Symbol::new(0, "t1")),
            "x1" => Some(Symbol::new(1, "x1")),
            "x2" => Some(Symbol::new(2, "x2")),
            "p1_1" => Some(Symbol::new(3, "p1_1")),
            _ => None,
        }
    }

    fn parse(s: &str) -> Result<Expr, ParseError> {
        parse_with(s, table)
    }

    #[test]
    fn literal_examples() {
        assert!(parse("0").unwrap().is_zero());
        assert_eq!(parse("sin(x1)^2 + cos(x1)^2").unwrap(), Expr::one());
        assert!(parse("2*t1 - t1 - t1").unwrap().is_zero());
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("1 + 2*3^2").unwrap(), Expr::int(19));
        assert_eq!(parse("(1+2)*3").unwrap(), Expr::int(9));
        assert_eq!(parse("-2^2").unwrap(), Expr::int(4));
        assert_eq!(parse("12/2/3").unwrap(), Expr::int(2));
        assert_eq!(parse("t1/2/3").unwrap(), parse("3/2*t1").unwrap());
        assert_eq!(parse("12/(2*3)").unwrap(), Expr::int(2));
        assert_eq!(parse("0.25 + 1e-1").unwrap(), Expr::frac(7, 20));
        assert_eq!(parse("2.5e2").unwrap(), Expr::int(250));
    }

    #[test]
    fn errors_carry_offsets_and_names() {
        assert_eq!(
            parse("t1 + y").unwrap_err(),
            ParseError::UnknownIdentifier { name: "y".into(), offset: 5 }
        );
        match parse("t1 + ").unwrap_err() {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 5),
            e => panic!("{e:?}"),
        }
        match parse("sin x1").unwrap_err() {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 4),
            e => panic!("{e:?}"),
        }
        assert!(matches!(parse("t1 $"), Err(ParseError::Syntax { offset: 3, .. })));
        assert_eq!(parse("1/0").unwrap_err(), ParseError::ZeroDivision);
        assert_eq!(parse("1/(t1-t1)").unwrap_err(), ParseError::ZeroDivision);
        assert!(matches!(parse("x1^17"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "-x1^2 + 3/2*t1",
            "-(x1^2)",
            "sin(x1)^-1",
            "cos(x1)/sin(x1) - 2*p1_1/(1 + t1^2)",
            "exp(2*t1)*sqrt(x1)",
            "1/(t1 + x1)^2 - t1/3",
        ] {
            let Ok(e) = parse(s) else { continue };
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
