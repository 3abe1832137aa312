//! Text form of expressions.
//!
//! Grammar (precedence climbing): `+ -` < `* /` < unary minus < `^` with `^`
//! right-associative and allowing a signed exponent, so `cosh(x)^-2` parses.
//! Numeric literals (integer, decimal, scientific) convert to exact
//! rationals: `0.005` is `1/200`. The name `pi` is the constant; a known
//! function name followed by `(` is a call; `Diff(e, x, 2, z)` applies total
//! derivatives.
//!
//! Identifiers with one underscore are jet coordinates. The suffix is split
//! into differentiation indices by greedy longest match against the declared
//! independents of the [`ParseContext`] (single characters when none are
//! declared), and a bare declared dependent becomes its order-zero jet.

use super::poly::int_pow;
use super::{Expr, Func, Irr, JetVar, Q, Symbol};
use num_bigint::BigInt;
use std::fmt;

#[derive(Debug, Clone)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Declares which names are independent and dependent variables.
#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    pub independents: Vec<Symbol>,
    pub dependents: Vec<Symbol>,
}

impl ParseContext {
    pub fn new(independents: &[&str], dependents: &[&str]) -> Self {
        ParseContext {
            independents: independents.iter().map(|s| Symbol::new(s)).collect(),
            dependents: dependents.iter().map(|s| Symbol::new(s)).collect(),
        }
    }
}

/// Parses with the default (empty) context.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parse_with(src, &ParseContext::default())
}

pub fn parse_with(src: &str, ctx: &ParseContext) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ctx,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            ',' => {
                out.push((i, Tok::Comma));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part = &src[start..i];
                let mut frac_part = "";
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let fs = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    frac_part = &src[fs..i];
                    if frac_part.is_empty() {
                        return Err(ParseError {
                            pos: i,
                            msg: "digits expected after decimal point".into(),
                        });
                    }
                }
                let mut exp10: i64 = 0;
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    // Only a real exponent: digits, optionally signed.
                    let save = i;
                    let mut j = i + 1;
                    let mut sign = 1i64;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        if bytes[j] == b'-' {
                            sign = -1;
                        }
                        j += 1;
                    }
                    let ds = j;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j > ds {
                        exp10 = sign
                            * src[ds..j].parse::<i64>().map_err(|_| ParseError {
                                pos: ds,
                                msg: "exponent overflow".into(),
                            })?;
                        i = j;
                    } else {
                        i = save; // the 'e' begins an identifier, not an exponent
                    }
                }
                let digits = format!("{int_part}{frac_part}");
                let mantissa: BigInt = digits.parse().map_err(|_| ParseError {
                    pos: start,
                    msg: "bad number".into(),
                })?;
                let shift = exp10 - frac_part.len() as i64;
                let ten = BigInt::from(10);
                let q = if shift >= 0 {
                    Q::from_integer(mantissa * int_pow(&ten, shift.unsigned_abs() as u32))
                } else {
                    Q::new(mantissa, int_pow(&ten, shift.unsigned_abs() as u32))
                };
                out.push((start, Tok::Num(q)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = &src[start..i];
                if name.matches('_').count() > 1 || name.ends_with('_') {
                    return Err(ParseError {
                        pos: start,
                        msg: format!("malformed identifier {name}"),
                    });
                }
                out.push((start, Tok::Ident(name.to_string())));
            }
            other => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    ctx: &'a ParseContext,
    end: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        let pos = self
            .toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end);
        ParseError {
            pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term()?;
                acc = acc + rhs;
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term()?;
                acc = acc - rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                let rhs = self.unary()?;
                acc = acc * rhs;
            } else if self.eat(&Tok::Slash) {
                let rhs = self.unary()?;
                acc = acc / rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            let exp = self.exponent()?;
            Ok(Expr::pow(base, exp))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            Ok(-self.exponent()?)
        } else {
            self.power()
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Expr::Num(q))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen, ")")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.ident(&name)
            }
            _ => Err(self.err("expected a value")),
        }
    }

    fn ident(&mut self, name: &str) -> Result<Expr, ParseError> {
        if name == "Diff" && self.peek() == Some(&Tok::LParen) {
            return self.diff_form();
        }
        if let Some(f) = Func::from_name(name) {
            if self.peek() == Some(&Tok::LParen) {
                self.pos += 1;
                let mut args = vec![self.expr()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.expr()?);
                }
                self.expect(&Tok::RParen, ")")?;
                if args.len() != 1 {
                    return Err(self.err(&format!("{name} takes one argument")));
                }
                return Ok(Expr::call(f, args));
            }
        }
        if name == "pi" {
            return Ok(Expr::Irr(Irr::Pi));
        }
        if let Some(idx) = name.find('_') {
            let (base, suffix) = (&name[..idx], &name[idx + 1..]);
            return self.jet_from_parts(base, suffix);
        }
        let s = Symbol::new(name);
        if self.ctx.dependents.contains(&s) {
            Ok(Expr::Jet(JetVar::new(s, vec![])))
        } else {
            Ok(Expr::Sym(s))
        }
    }

    fn jet_from_parts(&self, base: &str, suffix: &str) -> Result<Expr, ParseError> {
        let b = Symbol::new(base);
        if !self.ctx.dependents.is_empty() && !self.ctx.dependents.contains(&b) {
            return Err(self.err(&format!("{base} is not a declared dependent")));
        }
        let mut derivs = Vec::new();
        let mut rest = suffix;
        // Greedy longest match against declared independents; single
        // characters when none are declared.
        let mut names: Vec<&str> = self
            .ctx
            .independents
            .iter()
            .map(|s| s.name())
            .collect();
        names.sort_by_key(|n| std::cmp::Reverse(n.len()));
        while !rest.is_empty() {
            if names.is_empty() {
                let ch_len = rest.chars().next().unwrap().len_utf8();
                derivs.push(Symbol::new(&rest[..ch_len]));
                rest = &rest[ch_len..];
                continue;
            }
            match names.iter().find(|n| rest.starts_with(**n)) {
                Some(n) => {
                    derivs.push(Symbol::new(n));
                    rest = &rest[n.len()..];
                }
                None => {
                    return Err(self.err(&format!(
                        "cannot split jet suffix {suffix} over the declared independents"
                    )))
                }
            }
        }
        Ok(Expr::Jet(JetVar::new(b, derivs)))
    }

    fn diff_form(&mut self) -> Result<Expr, ParseError> {
        self.expect(&Tok::LParen, "(")?;
        let mut e = self.expr()?;
        let mut last_var: Option<Symbol> = None;
        let deps = self.ctx.dependents.clone();
        let mut applied_any = false;
        while self.eat(&Tok::Comma) {
            match self.peek().cloned() {
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    let v = Symbol::new(&name);
                    e = super::diff::total_derivative_syntactic(&e, &v, &deps);
                    last_var = Some(v);
                    applied_any = true;
                }
                Some(Tok::Num(q)) => {
                    self.pos += 1;
                    let var = last_var
                        .clone()
                        .ok_or_else(|| self.err("repeat count before any variable"))?;
                    if !q.is_integer() {
                        return Err(self.err("repeat count must be an integer"));
                    }
                    let n: u32 = q
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.err("repeat count out of range"))?;
                    if n == 0 {
                        return Err(self.err("repeat count must be positive"));
                    }
                    for _ in 1..n {
                        e = super::diff::total_derivative_syntactic(&e, &var, &deps);
                    }
                }
                _ => return Err(self.err("expected a variable or repeat count")),
            }
        }
        self.expect(&Tok::RParen, ")")?;
        if !applied_any {
            return Err(self.err("Diff needs at least one variable"));
        }
        Ok(e)
    }
}
