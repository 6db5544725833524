//! Polynomial expression grammar shared by field specs, jets, systems and sessions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' INT)?
//! atom  := INT | IDENT | '(' expr ')'
//! ```
//!
//! Positions are 1-based and can be offset so that expressions embedded in a
//! larger line report columns relative to that line.

use num_bigint::BigInt;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn at(span: Span, message: impl Into<String>) -> Self {
        ParseError {
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String, Span),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Span),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(src: &str, origin: Span) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line = origin.line;
    let mut col = origin.col;
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Int(text.parse().expect("digits")),
                span,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                span,
            });
            continue;
        }
        if "+-*/^(),;[]:=".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                span,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError::at(span, format!("unexpected character '{c}'")));
    }
    Ok(out)
}

/// Recursive-descent parser over a token slice.
pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: Span,
}

impl Parser {
    pub fn new(src: &str, origin: Span) -> Result<Self, ParseError> {
        let toks = tokenize(src, origin)?;
        let end = Span {
            line: origin.line + src.matches('\n').count(),
            col: src.rsplit('\n').next().map_or(0, |l| l.chars().count())
                + if src.contains('\n') { 1 } else { origin.col },
        };
        Ok(Parser { toks, pos: 0, end })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |t| t.span)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = match self.peek() {
                None => "end of input".to_string(),
                Some(t) => format!("{}", DisplayTok(t)),
            };
            let msg = if c == ')' {
                format!("unbalanced parenthesis: expected ')', found {found}")
            } else {
                format!("expected '{c}', found {found}")
            };
            Err(ParseError::at(self.span(), msg))
        }
    }

    pub fn ident(&mut self) -> Result<(String, Span), ParseError> {
        let span = self.span();
        match self.bump() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => Ok((s, span)),
            _ => Err(ParseError::at(span, "expected identifier")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::at(
                self.span(),
                format!("unexpected {}", DisplayTok(t)),
            )),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat('-') {
                let rhs = self.term()?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let span = self.span();
                self.pos += 1;
                let rhs = self.unary()?;
                lhs = Expr::Div(Box::new(lhs), Box::new(rhs), span);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let span = self.span();
            match self.bump() {
                Some(Token {
                    tok: Tok::Int(n), ..
                }) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| ParseError::at(span, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(ParseError::at(span, "expected integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        match self.bump() {
            Some(Token {
                tok: Tok::Int(n), ..
            }) => Ok(Expr::Int(n)),
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => Ok(Expr::Var(s, span)),
            Some(Token {
                tok: Tok::Sym('('),
                ..
            }) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(t) => Err(ParseError::at(
                span,
                format!("expected expression, found {}", DisplayTok(&t.tok)),
            )),
            None => Err(ParseError::at(span, "expected expression, found end of input")),
        }
    }

    /// `( expr, expr, ... )`; the empty tuple `()` is allowed.
    pub fn tuple(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect('(')?;
        let mut items = Vec::new();
        if self.eat(')') {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.eat(',') {
                continue;
            }
            self.expect(')')?;
            return Ok(items);
        }
    }
}

struct DisplayTok<'a>(&'a Tok);

impl fmt::Display for DisplayTok<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src, Span { line: 1, col: 1 })?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_tuple(src: &str) -> Result<Vec<Expr>, ParseError> {
    let mut p = Parser::new(src, Span { line: 1, col: 1 })?;
    let e = p.tuple()?;
    p.finish()?;
    Ok(e)
}

/// Interprets an [`Expr`] in some algebra.
pub trait Evaluator {
    type Value: Clone;
    fn int(&self, n: &BigInt) -> Self::Value;
    fn var(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, String>;

    fn pow(&self, a: Self::Value, e: u32) -> Self::Value {
        let mut acc = self.int(&BigInt::from(1));
        for _ in 0..e {
            acc = self.mul(acc, a.clone());
        }
        acc
    }
}

impl Expr {
    pub fn eval<E: Evaluator>(&self, ev: &E) -> Result<E::Value, ParseError> {
        Ok(match self {
            Expr::Int(n) => ev.int(n),
            Expr::Var(name, span) => ev
                .var(name)
                .ok_or_else(|| ParseError::at(*span, format!("unknown name '{name}'")))?,
            Expr::Neg(a) => ev.neg(a.eval(ev)?),
            Expr::Add(a, b) => ev.add(a.eval(ev)?, b.eval(ev)?),
            Expr::Sub(a, b) => ev.sub(a.eval(ev)?, b.eval(ev)?),
            Expr::Mul(a, b) => ev.mul(a.eval(ev)?, b.eval(ev)?),
            Expr::Div(a, b, span) => ev
                .div(a.eval(ev)?, b.eval(ev)?)
                .map_err(|m| ParseError::at(*span, m))?,
            Expr::Pow(a, e) => ev.pow(a.eval(ev)?, *e),
        })
    }

    /// Names of all variables referenced, in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Int(_) => {}
                Expr::Var(n, _) => {
                    if !out.contains(n) {
                        out.push(n.clone())
                    }
                }
                Expr::Neg(a) | Expr::Pow(a, _) => walk(a, out),
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                    walk(a, out);
                    walk(b, out)
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse_expr("-x^2+3*y").unwrap();
        match e {
            Expr::Add(a, _) => assert!(matches!(*a, Expr::Neg(_))),
            _ => panic!("{e:?}"),
        }
    }

    #[test]
    fn unbalanced_reports_position() {
        let err = parse_tuple("(x^2").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 5);
        assert!(err.message.contains("unbalanced"));
    }

    #[test]
    fn bad_char() {
        let err = parse_expr("x $ y").unwrap_err();
        assert_eq!((err.line, err.col), (1, 3));
    }

    #[test]
    fn empty_tuple() {
        assert!(parse_tuple("()").unwrap().is_empty());
        assert_eq!(parse_tuple("(x, y*x)").unwrap().len(), 2);
    }
}
