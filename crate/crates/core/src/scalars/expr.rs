//! A small expression language for coefficient functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' int)?
//! base   := rational | 't' | ident | '(' expr ')' | ('exp' | 'sqrt') '(' expr ')'
//! ```
//!
//! `a/b` with integer `a`, `b` is a single rational literal unless `a` itself
//! follows a `/` or `^`. Identifiers may end in apostrophes (`p8'`), which
//! denote derivatives of coefficient functions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::diffpoly::{DiffPoly, Var};
use super::exact::ExactScalar;
use super::jet::Jet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(BigRational),
    T,
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out: Vec<(usize, Tok)> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(parse_decimal(&text, start)?)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(merge_rationals(out))
}

fn parse_decimal(text: &str, pos: usize) -> Result<BigRational> {
    let bad = || Error::Parse { pos, msg: format!("malformed number `{text}`") };
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(n, d))
}

/// Fuse `int / int` into one rational literal when the numerator does not
/// follow `/` or `^`.
fn merge_rationals(toks: Vec<(usize, Tok)>) -> Vec<(usize, Tok)> {
    let mut out: Vec<(usize, Tok)> = Vec::with_capacity(toks.len());
    let mut i = 0;
    while i < toks.len() {
        let is_int = |t: &Tok| matches!(t, Tok::Num(q) if q.is_integer());
        let prev_blocks = matches!(out.last(), Some((_, Tok::Op('/'))) | Some((_, Tok::Op('^'))));
        if i + 2 < toks.len()
            && is_int(&toks[i].1)
            && toks[i + 1].1 == Tok::Op('/')
            && is_int(&toks[i + 2].1)
            && !prev_blocks
        {
            if let (Tok::Num(a), Tok::Num(b)) = (&toks[i].1, &toks[i + 2].1) {
                if !b.is_zero() {
                    out.push((toks[i].0, Tok::Num(a / b)));
                    i += 3;
                    continue;
                }
            }
        }
        out.push(toks[i].clone());
        i += 1;
    }
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat('^') {
            let negative = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Num(q)) if q.is_integer() => {
                    self.pos += 1;
                    let n = q
                        .to_integer()
                        .to_i32()
                        .ok_or_else(|| Error::Parse { pos: self.here(), msg: "exponent too large".into() })?;
                    Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
                }
                _ => self.err("expected an integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Expr::Num(q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "t" => Ok(Expr::T),
                    "exp" | "sqrt" => {
                        self.expect('(')?;
                        let inner = self.expr()?;
                        self.expect(')')?;
                        Ok(if name == "exp" {
                            Expr::Exp(Box::new(inner))
                        } else {
                            Expr::Sqrt(Box::new(inner))
                        })
                    }
                    _ => Ok(Expr::Ident(name)),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let toks = lex(src)?;
        let mut p = Parser { toks, pos: 0, end: src.chars().count() };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }

    pub fn num(q: BigRational) -> Expr {
        if q.is_negative() {
            Expr::Neg(Box::new(Expr::Num(-q)))
        } else {
            Expr::Num(q)
        }
    }

    pub fn integer(n: i64) -> Expr {
        Self::num(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ident(name: &str) -> Expr {
        Expr::Ident(name.to_string())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Num(q) if q.is_one())
    }

    /// Product that drops unit factors; used when assembling coefficients.
    pub fn times(a: Expr, b: Expr) -> Expr {
        if a.is_one() {
            b
        } else if b.is_one() {
            a
        } else {
            Expr::Mul(Box::new(a), Box::new(b))
        }
    }

    /// Sum that turns `a + (-b)` into `a - b`.
    pub fn plus(a: Expr, b: Expr) -> Expr {
        match b {
            Expr::Neg(inner) => Expr::Sub(Box::new(a), inner),
            b => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn negated(self) -> Expr {
        match self {
            Expr::Neg(inner) => *inner,
            e => Expr::Neg(Box::new(e)),
        }
    }

    /// Names of identifiers in the tree, in order of first appearance.
    pub fn identifiers(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit_idents(&mut |s| {
            if !out.iter().any(|x: &String| x == s) {
                out.push(s.to_string());
            }
        });
        out
    }

    fn visit_idents(&self, f: &mut impl FnMut(&str)) {
        match self {
            Expr::Ident(s) => f(s),
            Expr::Num(_) | Expr::T => {}
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sqrt(a) => a.visit_idents(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit_idents(f);
                b.visit_idents(f);
            }
        }
    }

    pub fn depends_on_t(&self) -> bool {
        match self {
            Expr::T => true,
            Expr::Num(_) | Expr::Ident(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sqrt(a) => a.depends_on_t(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on_t() || b.depends_on_t()
            }
        }
    }

    /// First-order jet at `t`; named parameters are constants.
    pub fn eval_jet(&self, t: f64, params: &BTreeMap<String, f64>) -> Result<Jet> {
        Ok(self.eval_jet_order(t, params, 2)?.truncate(1))
    }

    /// Jet of the given order (at most 2) at `t`.
    pub fn eval_jet_order(&self, t: f64, params: &BTreeMap<String, f64>, order: u8) -> Result<Jet> {
        let j = self.jet_rec(t, params)?;
        Ok(j.truncate(order))
    }

    fn jet_rec(&self, t: f64, params: &BTreeMap<String, f64>) -> Result<Jet> {
        Ok(match self {
            Expr::Num(q) => Jet::constant(q.to_f64().unwrap_or(f64::NAN)),
            Expr::T => Jet::variable(t),
            Expr::Ident(name) => Jet::constant(
                *params
                    .get(name)
                    .ok_or_else(|| Error::Eval(format!("no value for parameter `{name}`")))?,
            ),
            Expr::Neg(a) => -a.jet_rec(t, params)?,
            Expr::Add(a, b) => a.jet_rec(t, params)? + b.jet_rec(t, params)?,
            Expr::Sub(a, b) => a.jet_rec(t, params)? - b.jet_rec(t, params)?,
            Expr::Mul(a, b) => a.jet_rec(t, params)? * b.jet_rec(t, params)?,
            Expr::Div(a, b) => {
                let d = b.jet_rec(t, params)?;
                a.jet_rec(t, params)? * d.recip()?
            }
            Expr::Pow(a, n) => a.jet_rec(t, params)?.powi(*n)?,
            Expr::Exp(a) => a.jet_rec(t, params)?.exp(),
            Expr::Sqrt(a) => a.jet_rec(t, params)?.sqrt()?,
        })
    }

    /// Plain value at `t`.
    pub fn eval(&self, t: f64, params: &BTreeMap<String, f64>) -> Result<f64> {
        Ok(self.jet_rec(t, params)?.value())
    }

    /// Constant value in ℚ(√m); fails on `t`, identifiers and `exp`.
    pub fn to_exact(&self) -> Result<ExactScalar> {
        let not_const = |what: &str| Error::Eval(format!("{what} is not an exact constant"));
        Ok(match self {
            Expr::Num(q) => ExactScalar::rational(q.clone()),
            Expr::T => return Err(not_const("t")),
            Expr::Ident(s) => return Err(not_const(s)),
            Expr::Neg(a) => -a.to_exact()?,
            Expr::Add(a, b) => a.to_exact()?.checked_add(&b.to_exact()?)?,
            Expr::Sub(a, b) => a.to_exact()?.checked_sub(&b.to_exact()?)?,
            Expr::Mul(a, b) => a.to_exact()?.checked_mul(&b.to_exact()?)?,
            Expr::Div(a, b) => a.to_exact()?.checked_div(&b.to_exact()?)?,
            Expr::Pow(a, n) => {
                let base = a.to_exact()?;
                if *n >= 0 {
                    base.pow(*n as u32)
                } else {
                    base.inv()?.pow(n.unsigned_abs())
                }
            }
            Expr::Exp(_) => return Err(not_const("exp")),
            Expr::Sqrt(a) => {
                let inner = a.to_exact()?;
                let q = inner
                    .as_rational()
                    .ok_or_else(|| Error::Eval("sqrt of an irrational value".into()))?;
                ExactScalar::sqrt_rational(q)?
            }
        })
    }

    /// Polynomial in coefficient functions; identifiers become symbols and
    /// trailing apostrophes derivative orders.
    pub fn to_diffpoly(&self) -> Result<DiffPoly> {
        if let Ok(c) = self.to_exact() {
            return Ok(DiffPoly::constant(c));
        }
        Ok(match self {
            Expr::Num(_) | Expr::Sqrt(_) => unreachable!("constants handled above"),
            Expr::T => return Err(Error::Eval("`t` cannot appear in a polynomial coefficient".into())),
            Expr::Exp(_) => return Err(Error::Eval("exp is not polynomial".into())),
            Expr::Ident(s) => {
                let base = s.trim_end_matches('\'');
                let order = (s.len() - base.len()) as u32;
                DiffPoly::var(Var::new(base, order))
            }
            Expr::Neg(a) => -a.to_diffpoly()?,
            Expr::Add(a, b) => a.to_diffpoly()?.checked_add(&b.to_diffpoly()?)?,
            Expr::Sub(a, b) => a.to_diffpoly()?.checked_add(&(-b.to_diffpoly()?))?,
            Expr::Mul(a, b) => a.to_diffpoly()?.checked_mul(&b.to_diffpoly()?)?,
            Expr::Div(a, b) => {
                let d = b.to_exact().map_err(|_| {
                    Error::Eval("division by a non-constant in a polynomial coefficient".into())
                })?;
                a.to_diffpoly()?.scale(&d.inv()?)
            }
            Expr::Pow(a, n) if *n >= 0 => a.to_diffpoly()?.pow(*n as u32),
            Expr::Pow(..) => return Err(Error::Eval("negative power is not polynomial".into())),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(q) if !q.is_integer() => 2,
            _ => 5,
        }
    }

    fn starts_with_digit(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) | Expr::Div(a, _) | Expr::Pow(a, _) => {
                a.starts_with_digit()
            }
            _ => false,
        }
    }

    fn ends_with_integer(&self) -> bool {
        match self {
            Expr::Num(q) => q.is_integer(),
            Expr::Add(_, b) | Expr::Sub(_, b) | Expr::Mul(_, b) | Expr::Div(_, b) => b.ends_with_integer(),
            Expr::Neg(a) => a.ends_with_integer(),
            Expr::Pow(..) => true,
            _ => false,
        }
    }
}

fn wrap(e: &Expr, parens: bool) -> String {
    if parens {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Expr::T => f.write_str("t"),
            Expr::Ident(s) => f.write_str(s),
            Expr::Neg(a) => write!(f, "-{}", wrap(a, a.precedence() < 3)),
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, a.precedence() < 1), wrap(b, b.precedence() <= 1)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, a.precedence() < 1), wrap(b, b.precedence() <= 1)),
            Expr::Mul(a, b) => {
                // a rational on the right would absorb a following `/`
                write!(f, "{}*{}", wrap(a, a.precedence() < 2), wrap(b, b.precedence() <= 2))
            }
            Expr::Div(a, b) => {
                let lhs = wrap(a, a.precedence() < 2);
                let rhs_paren = b.precedence() <= 2 || (a.ends_with_integer() && b.starts_with_digit());
                write!(f, "{}/{}", lhs, wrap(b, rhs_paren))
            }
            Expr::Pow(a, n) => write!(f, "{}^{}", wrap(a, a.precedence() <= 4), n),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}
