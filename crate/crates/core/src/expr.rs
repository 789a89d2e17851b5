//! Polynomial expression front end.
//!
//! Grammar: integers, rationals `p/q`, identifiers `[a-z][a-z0-9]*`, binary
//! `+ - * / ^` with the usual precedence, unary minus, parentheses. Division
//! is only by nonzero constants; exponents are nonnegative integer literals.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::weyl::{Signature, WeylElement};

#[derive(Debug, Clone, PartialEq)]
enum Ast {
    Num(Rational),
    Var(String, usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(src[st..i].parse().expect("digits")), st));
        } else if c.is_ascii_lowercase() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_lowercase() || b[i].is_ascii_digit()) {
                i += 1;
            }
            out.push((Tok::Ident(src[st..i].to_string()), st));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.here();
                self.pos += 1;
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.here();
            match self.toks.get(self.pos) {
                Some((Tok::Num(n), _)) => {
                    let k: u32 = n
                        .try_into()
                        .map_err(|_| err(at, "exponent too large"))?;
                    self.pos += 1;
                    return Ok(Ast::Pow(Box::new(base), k));
                }
                _ => return Err(err(at, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Num(n), _)) => {
                self.pos += 1;
                Ok(Ast::Num(Rational::from(n)))
            }
            Some((Tok::Ident(s), p)) => {
                self.pos += 1;
                Ok(Ast::Var(s, p))
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.here(), "expected `)`"));
                }
                Ok(e)
            }
            Some((Tok::Op(c), _)) => Err(err(at, format!("unexpected `{c}`"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

fn parse_ast(src: &str) -> Result<Ast> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

fn collect_vars(a: &Ast, out: &mut Vec<String>) {
    match a {
        Ast::Num(_) => {}
        Ast::Var(s, _) => {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
        Ast::Neg(x) | Ast::Pow(x, _) => collect_vars(x, out),
        Ast::Add(x, y) | Ast::Sub(x, y) | Ast::Mul(x, y) | Ast::Div(x, y, _) => {
            collect_vars(x, out);
            collect_vars(y, out);
        }
    }
}

/// Operations the evaluator needs from a ring.
trait Ring: Sized + Clone {
    fn constant(&self, c: Rational) -> Self;
    fn var(&self, name: &str, pos: usize) -> Result<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn as_constant(&self) -> Option<Rational>;
}

fn eval<R: Ring>(a: &Ast, ctx: &R) -> Result<R> {
    Ok(match a {
        Ast::Num(c) => ctx.constant(c.clone()),
        Ast::Var(s, p) => ctx.var(s, *p)?,
        Ast::Neg(x) => ctx.constant(Rational::zero()).sub(&eval(x, ctx)?),
        Ast::Add(x, y) => eval(x, ctx)?.add(&eval(y, ctx)?),
        Ast::Sub(x, y) => eval(x, ctx)?.sub(&eval(y, ctx)?),
        Ast::Mul(x, y) => eval(x, ctx)?.mul(&eval(y, ctx)?),
        Ast::Div(x, y, p) => {
            let d = eval(y, ctx)?
                .as_constant()
                .ok_or_else(|| err(*p, "division only by constants"))?;
            if d.is_zero() {
                return Err(err(*p, "division by zero"));
            }
            eval(x, ctx)?.mul(&ctx.constant(d.recip()))
        }
        Ast::Pow(x, k) => {
            let b = eval(x, ctx)?;
            let mut out = ctx.constant(Rational::one());
            for _ in 0..*k {
                out = out.mul(&b);
            }
            out
        }
    })
}

impl Ring for MultiPoly {
    fn constant(&self, c: Rational) -> Self {
        MultiPoly::constant(self.vars(), c)
    }
    fn var(&self, name: &str, pos: usize) -> Result<Self> {
        if self.var_index(name).is_none() {
            return Err(err(pos, format!("unknown variable `{name}`")));
        }
        Ok(MultiPoly::var(self.vars(), name))
    }
    fn add(&self, o: &Self) -> Self {
        MultiPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        MultiPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MultiPoly::mul(self, o)
    }
    fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }
}

impl Ring for WeylElement {
    fn constant(&self, c: Rational) -> Self {
        WeylElement::constant(self.signature(), c)
    }
    fn var(&self, name: &str, pos: usize) -> Result<Self> {
        WeylElement::gen(self.signature(), name)
            .map_err(|_| err(pos, format!("unknown generator `{name}`")))
    }
    fn add(&self, o: &Self) -> Self {
        WeylElement::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        WeylElement::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        WeylElement::mul(self, o)
    }
    fn as_constant(&self) -> Option<Rational> {
        let zero = vec![0; self.signature().nvars()];
        match self.num_terms() {
            0 => Some(Rational::zero()),
            1 if self.coeff(&zero) != Rational::zero() => Some(self.coeff(&zero)),
            _ => None,
        }
    }
}

/// Parse over the identifiers that occur, sorted by name.
pub fn parse_poly(src: &str) -> Result<MultiPoly> {
    let ast = parse_ast(src)?;
    let mut vars = Vec::new();
    collect_vars(&ast, &mut vars);
    vars.sort();
    eval(&ast, &MultiPoly::zero(&vars))
}

/// Parse over a fixed variable list; unknown identifiers are errors.
pub fn parse_poly_in(src: &str, vars: &[impl AsRef<str>]) -> Result<MultiPoly> {
    let ast = parse_ast(src)?;
    eval(&ast, &MultiPoly::zero(vars))
}

/// Parse a written product of generators and normal-order it.
pub fn parse_weyl(sig: &Arc<Signature>, src: &str) -> Result<WeylElement> {
    let ast = parse_ast(src)?;
    eval(&ast, &WeylElement::zero(sig))
}
