//! Tokens and recursive-descent helpers shared by every text format.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::constraint::{Constraint, ConstraintSet, Rel};
use crate::term::{LinearTerm, Rational, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lower-case identifier: predicate names and keywords.
    Ident(String),
    /// Upper-case or underscore-initial identifier.
    Var(String),
    Number(Rational),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Semicolon,
    Arrow,
    Turnstile,
    Plus,
    Minus,
    Star,
    Rel(Rel),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{}`", crate::term::fmt_rational(n)),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semicolon => f.write_str("`;`"),
            Tok::Arrow => f.write_str("`<-`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Rel(r) => write!(f, "`{r}`"),
        }
    }
}

pub fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if c.is_ascii_lowercase() { Tok::Ident(word) } else { Tok::Var(word) };
            out.push((tok, pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let n = lex_number(&chars, &mut i).ok_or_else(|| ParseError::new(pos, "malformed number"))?;
            col += i - start;
            out.push((Tok::Number(n), pos));
            continue;
        }
        let (tok, width) = match (c, next) {
            ('<', Some('-')) => (Tok::Arrow, 2),
            ('<', Some('=')) => (Tok::Rel(Rel::Le), 2),
            ('>', Some('=')) => (Tok::Rel(Rel::Ge), 2),
            ('!', Some('=')) => (Tok::Rel(Rel::Ne), 2),
            ('|', Some('-')) => (Tok::Turnstile, 2),
            ('<', _) => (Tok::Rel(Rel::Lt), 1),
            ('>', _) => (Tok::Rel(Rel::Gt), 1),
            ('=', _) => (Tok::Rel(Rel::Eq), 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            ('.', _) => (Tok::Dot, 1),
            (':', _) => (Tok::Colon, 1),
            (';', _) => (Tok::Semicolon, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            _ => return Err(ParseError::new(pos, format!("unexpected character `{c}`"))),
        };
        out.push((tok, pos));
        adv(width, &mut i, &mut col);
    }
    Ok(out)
}

fn digits(chars: &[char], i: &mut usize) -> String {
    let start = *i;
    while *i < chars.len() && chars[*i].is_ascii_digit() {
        *i += 1;
    }
    chars[start..*i].iter().collect()
}

/// `123`, `1.25` or `3/4`. A dot not followed by a digit ends the number, so
/// a fact like `p(1).` lexes as expected.
fn lex_number(chars: &[char], i: &mut usize) -> Option<Rational> {
    let int: BigInt = digits(chars, i).parse().ok()?;
    let at = |k: usize| chars.get(k).copied();
    if at(*i) == Some('.') && at(*i + 1).is_some_and(|c| c.is_ascii_digit()) {
        *i += 1;
        let frac = digits(chars, i);
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let numer = int * &scale + frac.parse::<BigInt>().ok()?;
        return Some(Rational::new(numer, scale));
    }
    if at(*i) == Some('/') && at(*i + 1).is_some_and(|c| c.is_ascii_digit()) {
        *i += 1;
        let den: BigInt = digits(chars, i).parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(int, den));
    }
    Some(Rational::from_integer(int))
}

/// A cursor over a token stream.
pub struct Cursor {
    toks: Vec<(Tok, Pos)>,
    idx: usize,
    end: Pos,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        let toks = tokenize(src)?;
        let lines = src.split('\n').count();
        let last = src.rsplit('\n').next().unwrap_or("");
        Ok(Cursor {
            toks,
            idx: 0,
            end: Pos {
                line: lines,
                col: last.chars().count() + 1,
            },
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.idx + k).map(|(t, _)| t)
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.idx).map_or(self.end, |(_, p)| *p)
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}")))
        }
    }

    pub fn error(&self, what: impl Into<String>) -> ParseError {
        let found = match self.peek() {
            Some(t) => format!(", found {t}"),
            None => ", found end of input".to_string(),
        };
        ParseError::new(self.pos(), format!("{}{found}", what.into()))
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.idx += 1;
                Ok(s)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    /// `[+|-] prod {(+|-) prod}` with `prod ::= number | var | number * var`.
    pub fn term(&mut self) -> Result<LinearTerm, ParseError> {
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        self.term_tail(neg)
    }

    fn term_tail(&mut self, first_negated: bool) -> Result<LinearTerm, ParseError> {
        let mut acc = self.product()?;
        if first_negated {
            acc = -acc;
        }
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.product()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<LinearTerm, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Number(n)) => {
                self.idx += 1;
                if self.eat(&Tok::Star) {
                    match self.bump() {
                        Some(Tok::Var(v)) => Ok(LinearTerm::scaled_var(Var::new(v), n)),
                        _ => {
                            self.idx -= 1;
                            Err(self.error("expected a variable after `*`"))
                        }
                    }
                } else {
                    Ok(LinearTerm::constant(n))
                }
            }
            Some(Tok::Var(v)) => {
                self.idx += 1;
                Ok(LinearTerm::var(Var::new(v)))
            }
            _ => Err(self.error("expected a number or a variable")),
        }
    }

    /// `term rel term`. The lexer reads `X<-1` as `X`, `<-`, `1`, which is
    /// reinterpreted here as `X < -1`.
    pub fn constraint(&mut self) -> Result<Constraint, ParseError> {
        let lhs = self.term()?;
        match self.peek().cloned() {
            Some(Tok::Rel(rel)) => {
                self.idx += 1;
                let rhs = self.term()?;
                Ok(Constraint::new(lhs, rel, rhs))
            }
            Some(Tok::Arrow) => {
                self.idx += 1;
                let rhs = self.term_tail(true)?;
                Ok(Constraint::new(lhs, Rel::Lt, rhs))
            }
            _ => Err(self.error("expected a relation")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}

pub fn parse_term(src: &str) -> Result<LinearTerm, ParseError> {
    let mut c = Cursor::new(src)?;
    let t = c.term()?;
    c.finish()?;
    Ok(t)
}

pub fn parse_constraint(src: &str) -> Result<Constraint, ParseError> {
    let mut c = Cursor::new(src)?;
    let t = c.constraint()?;
    c.finish()?;
    Ok(t)
}

/// Comma-separated constraints, optionally wrapped in braces.
pub fn parse_constraint_set(src: &str) -> Result<ConstraintSet, ParseError> {
    let mut c = Cursor::new(src)?;
    let braced = c.eat(&Tok::LBrace);
    let mut out = ConstraintSet::new();
    let empty = c.at_end() || (braced && c.peek() == Some(&Tok::RBrace));
    if !empty {
        loop {
            out.insert(c.constraint()?);
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
    }
    if braced {
        c.expect(&Tok::RBrace)?;
    }
    c.finish()?;
    Ok(out)
}
