//! Scalar expressions of one variable.
//!
//! Grammar, from loosest to tightest binding:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ('-')* primary)*
//! primary := number | 'pi' | 'e' | var | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! All binary operators associate to the left, `^` included. An exponent that
//! does not mention the variable is folded to a constant; otherwise
//! `a^b` is rewritten as `exp(b*log(a))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::jet::Jet4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Asin,
    Acos,
    Atan,
}

impl Func {
    pub const ALL: [Func; 12] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Asin,
        Func::Acos,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Asin => "asin",
            Func::Acos => "acos",
            Func::Atan => "atan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn check(self, u: f64) -> Result<()> {
        let bad = match self {
            Func::Log => u <= 0.0,
            Func::Sqrt => u < 0.0,
            Func::Asin | Func::Acos => u.abs() > 1.0,
            Func::Tan => u.cos() == 0.0,
            _ => false,
        };
        if bad {
            Err(Error::domain(self.name(), u))
        } else {
            Ok(())
        }
    }

    fn apply_f64(self, u: f64) -> f64 {
        match self {
            Func::Sin => u.sin(),
            Func::Cos => u.cos(),
            Func::Tan => u.tan(),
            Func::Sinh => u.sinh(),
            Func::Cosh => u.cosh(),
            Func::Tanh => u.tanh(),
            Func::Exp => u.exp(),
            Func::Log => u.ln(),
            Func::Sqrt => u.sqrt(),
            Func::Asin => u.asin(),
            Func::Acos => u.acos(),
            Func::Atan => u.atan(),
        }
    }

    fn apply_jet(self, u: &Jet4) -> Jet4 {
        match self {
            Func::Sin => u.sin(),
            Func::Cos => u.cos(),
            Func::Tan => u.tan(),
            Func::Sinh => u.sinh(),
            Func::Cosh => u.cosh(),
            Func::Tanh => u.tanh(),
            Func::Exp => u.exp(),
            Func::Log => u.ln(),
            Func::Sqrt => u.sqrt(),
            Func::Asin => u.asin(),
            Func::Acos => u.acos(),
            Func::Atan => u.atan(),
        }
    }
}

/// Abstract syntax tree of a scalar expression in one free variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Power with a constant exponent.
    Pow(Box<Expr>, f64),
    Func(Func, Box<Expr>),
}

/// Variable names accepted by [`parse`] when no name is prescribed.
pub const DEFAULT_VARIABLES: [&str; 3] = ["t", "s", "x"];

/// Parses `source`, accepting any single one of [`DEFAULT_VARIABLES`] as the
/// free variable.
pub fn parse(source: &str) -> Result<Expr> {
    Parser::new(source, &DEFAULT_VARIABLES).run()
}

/// Parses `source` with `var` as the only admissible free variable.
pub fn parse_in(source: &str, var: &str) -> Result<Expr> {
    Parser::new(source, &[var]).run()
}

/// Evaluates `e` as a jet seeded with the identity at `x`.
pub fn eval_jet(e: &Expr, x: f64) -> Result<Jet4> {
    e.eval_jet_at(&Jet4::variable(x))
}

impl Expr {
    pub fn constant(v: f64) -> Self {
        Expr::Const(v)
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.contains_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_var() || b.contains_var()
            }
        }
    }

    /// Plain floating-point evaluation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let num = a.eval(x)?;
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(Error::domain("division", den));
                }
                num / den
            }
            Expr::Pow(a, p) => {
                let base = a.eval(x)?;
                check_pow(base, *p)?;
                base.powf(*p)
            }
            Expr::Func(f, a) => {
                let u = a.eval(x)?;
                f.check(u)?;
                f.apply_f64(u)
            }
        };
        finite(v, self)
    }

    /// Evaluates the expression with the variable replaced by the jet `x`.
    /// This composes the expression with whatever function `x` carries.
    pub fn eval_jet_at(&self, x: &Jet4) -> Result<Jet4> {
        let j = match self {
            Expr::Const(c) => Jet4::constant(*c),
            Expr::Var => *x,
            Expr::Neg(a) => -a.eval_jet_at(x)?,
            Expr::Add(a, b) => a.eval_jet_at(x)? + b.eval_jet_at(x)?,
            Expr::Sub(a, b) => a.eval_jet_at(x)? - b.eval_jet_at(x)?,
            Expr::Mul(a, b) => a.eval_jet_at(x)? * b.eval_jet_at(x)?,
            Expr::Div(a, b) => {
                let num = a.eval_jet_at(x)?;
                let den = b.eval_jet_at(x)?;
                if den.value() == 0.0 {
                    return Err(Error::domain("division", den.value()));
                }
                num / den
            }
            Expr::Pow(a, p) => {
                let base = a.eval_jet_at(x)?;
                check_pow(base.value(), *p)?;
                base.powf(*p)
            }
            Expr::Func(f, a) => {
                let u = a.eval_jet_at(x)?;
                f.check(u.value())?;
                f.apply_jet(&u)
            }
        };
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::NonFinite(format!(
                "non-finite jet at node `{}` (x = {})",
                self.node_name(),
                x.value()
            )))
        }
    }

    fn node_name(&self) -> &'static str {
        match self {
            Expr::Const(_) => "constant",
            Expr::Var => "variable",
            Expr::Neg(_) => "negation",
            Expr::Add(..) => "addition",
            Expr::Sub(..) => "subtraction",
            Expr::Mul(..) => "multiplication",
            Expr::Div(..) => "division",
            Expr::Pow(..) => "power",
            Expr::Func(f, _) => f.name(),
        }
    }

    /// Renders the expression, fully parenthesised, with `var` as the name of
    /// the free variable. The output parses back to an equal tree.
    pub fn to_source(&self, var: &str) -> String {
        let mut out = String::new();
        self.write_source(var, &mut out);
        out
    }

    fn write_source(&self, var: &str, out: &mut String) {
        use std::fmt::Write;
        match self {
            Expr::Const(c) => {
                if *c < 0.0 {
                    let _ = write!(out, "(-{:?})", -c);
                } else {
                    let _ = write!(out, "{:?}", c);
                }
            }
            Expr::Var => out.push_str(var),
            Expr::Neg(a) => {
                out.push_str("(-");
                a.write_source(var, out);
                out.push(')');
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => '+',
                    Expr::Sub(..) => '-',
                    Expr::Mul(..) => '*',
                    _ => '/',
                };
                out.push('(');
                a.write_source(var, out);
                out.push(op);
                b.write_source(var, out);
                out.push(')');
            }
            Expr::Pow(a, p) => {
                out.push('(');
                a.write_source(var, out);
                if *p < 0.0 {
                    let _ = write!(out, "^(-{:?}))", -p);
                } else {
                    let _ = write!(out, "^{:?})", p);
                }
            }
            Expr::Func(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write_source(var, out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_source("x"))
    }
}

fn check_pow(base: f64, p: f64) -> Result<()> {
    if base < 0.0 && p.fract() != 0.0 {
        return Err(Error::domain("power", base));
    }
    if base == 0.0 && p < 0.0 {
        return Err(Error::domain("power", base));
    }
    Ok(())
}

fn finite(v: f64, node: &Expr) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!(
            "non-finite value at node `{}`",
            node.node_name()
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    allowed: &'a [&'a str],
    var: Option<String>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, allowed: &'a [&'a str]) -> Self {
        Parser {
            src,
            allowed,
            var: None,
            toks: Vec::new(),
            pos: 0,
        }
    }

    fn run(mut self) -> Result<Expr> {
        if self.src.trim().is_empty() {
            return Err(Error::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        self.toks = tokenize(self.src)?;
        let e = self.expr()?;
        if let Some((tok, off)) = self.toks.get(self.pos) {
            let message = if *tok == Tok::RParen {
                "unbalanced `)`".to_string()
            } else {
                format!("unexpected token {tok:?}")
            };
            return Err(Error::Syntax {
                offset: *off,
                message,
            });
        }
        Ok(e)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, o)| *o)
            .unwrap_or(self.src.len())
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp_offset = self.offset();
            let exponent = self.signed_primary()?;
            base = make_pow(base, exponent, exp_offset)?;
        }
        Ok(base)
    }

    fn signed_primary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.signed_primary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let Some((tok, off)) = self.toks.get(self.pos).cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if let Some(f) = Func::from_name(&name) {
                    if self.peek() != Some(&Tok::LParen) {
                        return self.err(format!("expected `(` after `{name}`"));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Func(f, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => Ok(Expr::Const(std::f64::consts::E)),
                    _ => self.variable(&name, off),
                }
            }
            Tok::RParen => self.err("unbalanced `)`"),
            _ => self.err(format!("dangling operator before {tok:?}")),
        }
    }

    fn variable(&mut self, name: &str, off: usize) -> Result<Expr> {
        let known = self.allowed.contains(&name);
        match &self.var {
            Some(v) if v == name => Ok(Expr::Var),
            None if known => {
                self.var = Some(name.to_string());
                Ok(Expr::Var)
            }
            _ => Err(Error::Syntax {
                offset: off,
                message: format!("unknown identifier `{name}`"),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            None => self.err("unexpected end of input, expected `)`"),
            Some(_) => self.err("expected `)`"),
        }
    }
}

fn make_pow(base: Expr, exponent: Expr, offset: usize) -> Result<Expr> {
    if exponent.contains_var() {
        let log = Expr::Func(Func::Log, Box::new(base));
        return Ok(Expr::Func(
            Func::Exp,
            Box::new(Expr::Mul(Box::new(exponent), Box::new(log))),
        ));
    }
    let p = exponent.eval(0.0).map_err(|e| Error::Syntax {
        offset,
        message: format!("exponent does not evaluate: {e}"),
    })?;
    Ok(Expr::Pow(Box::new(base), p))
}
