//! Polynomial expressions: integers, rationals `p/q`, declared variables,
//! `+ - * / ^` and parentheses. Division is only allowed by nonzero constants
//! and exponents must be non-negative integer literals.

use std::fmt;

use super::{MPoly, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "syntax error at {}:{}: {msg}", self.line, self.column)
            }
            ParseErrorKind::UnknownVariable(v) => {
                write!(f, "unknown variable `{v}` at {}:{}", self.line, self.column)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Op(char),
    End,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
    line: usize,
    col0: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, col: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col0 + col,
            kind,
        }
    }

    fn syntax(&self, col: usize, msg: impl Into<String>) -> ParseError {
        self.err(col, ParseErrorKind::Syntax(msg.into()))
    }

    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Op('+') => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Op('-') => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().0 {
                Tok::Op('*') => {
                    self.next();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Op('/') => {
                    let col = self.next().1;
                    let d = self.unary()?;
                    match d.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => return Err(self.syntax(col, "division by a non-constant or zero")),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly, ParseError> {
        match self.peek().0 {
            Tok::Op('-') => {
                self.next();
                Ok(self.unary()?.neg())
            }
            Tok::Op('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MPoly, ParseError> {
        let base = self.atom()?;
        if self.peek().0 == Tok::Op('^') {
            self.next();
            let (tok, col) = self.next();
            let Tok::Int(digits) = tok else {
                return Err(self.syntax(col, "expected a non-negative integer exponent"));
            };
            let k: u32 = digits
                .parse()
                .map_err(|_| self.syntax(col, "exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, ParseError> {
        let (tok, col) = self.next();
        match tok {
            Tok::Int(digits) => {
                let c: Rat = digits
                    .parse()
                    .map_err(|_| self.syntax(col, "bad integer literal"))?;
                Ok(MPoly::constant(self.vars, c))
            }
            Tok::Ident(name) => {
                if self.vars.contains(&name) {
                    Ok(MPoly::var(self.vars, &name))
                } else {
                    Err(self.err(col, ParseErrorKind::UnknownVariable(name)))
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                let (close, ccol) = self.next();
                if close != Tok::Op(')') {
                    return Err(self.syntax(ccol, "expected `)`"));
                }
                Ok(inner)
            }
            Tok::End => Err(self.syntax(col, "unexpected end of expression")),
            Tok::Op(c) => Err(self.syntax(col, format!("unexpected `{c}`"))),
        }
    }
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            toks.push((Tok::Int(chars[start..i].iter().collect()), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ParseError {
                line,
                column: col0 + col,
                kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
            });
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(toks)
}

impl MPoly {
    /// Parses `text` as a polynomial over `vars`.
    pub fn parse(text: &str, vars: &[String]) -> Result<MPoly, ParseError> {
        MPoly::parse_at(text, vars, 1, 0)
    }

    /// Like [`MPoly::parse`], reporting positions as if `text` started at
    /// column `col0 + 1` of line `line`.
    pub fn parse_at(
        text: &str,
        vars: &[String],
        line: usize,
        col0: usize,
    ) -> Result<MPoly, ParseError> {
        let toks = tokenize(text, line, col0)?;
        let mut p = Parser {
            toks,
            pos: 0,
            vars,
            line,
            col0,
        };
        let out = p.expr()?;
        let (tok, col) = p.peek().clone();
        if tok != Tok::End {
            return Err(p.syntax(col, "trailing input"));
        }
        Ok(out)
    }
}
