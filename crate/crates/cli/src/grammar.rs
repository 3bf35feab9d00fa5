//! Textual input grammar.
//!
//! ```text
//! class    = "0" | symbol { "+" symbol } ;
//! symbol   = "sym" "(" expr "," expr ")" ;
//! form     = "0" | [ "-" ] fterm { ( "+" | "-" ) fterm } ;
//! fterm    = ffactor { ( "*" | "/" ) ffactor } ;      (exactly one dpair per term)
//! ffactor  = dpair | power ;
//! dpair    = "d" name "^" "d" name ;
//! list     = expr { "," expr } ;
//! expr     = [ "-" ] term { ( "+" | "-" ) term } ;
//! term     = unary { ( "*" | "/" ) unary } ;
//! unary    = "-" unary | power ;
//! power    = atom [ "^" [ "-" ] integer ] ;
//! atom     = integer | name | "pi" | "(" expr ")" ;
//! name     = letter { letter | digit | "_" } ;
//! ```
//!
//! Expressions are evaluated exactly over `Z` with overflow checks. Residue
//! field inputs reduce coefficients mod `p` afterwards and reject `pi`; model
//! inputs read `pi` as the integer `p`.

use std::collections::BTreeMap;
use std::fmt;

use brauer_core::brauer::BrauerClass;
use brauer_core::cdvf::{CdvfElement, CdvfModel};
use brauer_core::differentials::Omega2Form;
use brauer_core::milnor::SymbolSum;
use brauer_core::{FieldDescriptor, Poly, RatFunc};

const MAX_EXPONENT: i64 = 256;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i128),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Name(s) => write!(f, "name `{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut text = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                text.push(d);
                chars.next();
                column += 1;
            }
            let n = text
                .parse::<i128>()
                .map_err(|_| pos.error(format!("integer {text} is too large")))?;
            out.push((Tok::Int(n), pos));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut text = String::new();
            while let Some(&d) = chars
                .peek()
                .filter(|d| d.is_ascii_alphanumeric() || **d == '_')
            {
                text.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Name(text), pos));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return Err(pos.error(format!("unexpected character {c:?}"))),
        };
        chars.next();
        column += 1;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

/// Integer polynomial, keyed by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl IntPoly {
    fn constant(nvars: usize, c: i128) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; nvars], c);
        }
        IntPoly { nvars, terms }
    }

    fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        IntPoly {
            nvars,
            terms: BTreeMap::from([(e, 1)]),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn neg(&self) -> Option<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Some((e.clone(), c.checked_neg()?)))
            .collect::<Option<_>>()?;
        Some(IntPoly {
            nvars: self.nvars,
            terms,
        })
    }

    fn add(&self, other: &Self) -> Option<Self> {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert(0);
            *slot = slot.checked_add(*c)?;
            if *slot == 0 {
                terms.remove(e);
            }
        }
        Some(IntPoly {
            nvars: self.nvars,
            terms,
        })
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        let mut out = IntPoly::constant(self.nvars, 0);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let exps = e
                    .iter()
                    .zip(f)
                    .map(|(a, b)| a.checked_add(*b))
                    .collect::<Option<Vec<u32>>>()?;
                let slot = out.terms.entry(exps.clone()).or_insert(0);
                *slot = slot.checked_add(c.checked_mul(*d)?)?;
                if *slot == 0 {
                    out.terms.remove(&exps);
                }
            }
        }
        Some(out)
    }

    fn content(&self) -> i128 {
        self.terms.values().fold(0i128, |g, c| gcd(g, c.abs()))
    }

    fn div_integer(&self, k: i128) -> Self {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / k)).collect(),
        }
    }

    fn to_terms(&self) -> Vec<(Vec<u32>, i128)> {
        self.terms.iter().map(|(e, c)| (e.clone(), *c)).collect()
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `num / den` over `Z`, with a nonzero denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntRat {
    num: IntPoly,
    den: IntPoly,
}

impl IntRat {
    fn from_poly(num: IntPoly) -> Self {
        let den = IntPoly::constant(num.nvars, 1);
        IntRat { num, den }
    }

    /// Divides out the common integer content.
    fn tidy(self) -> Self {
        let g = gcd(self.num.content(), self.den.content());
        if g <= 1 {
            return self;
        }
        IntRat {
            num: self.num.div_integer(g),
            den: self.den.div_integer(g),
        }
    }

    fn add(&self, other: &Self) -> Option<Self> {
        if self.den == other.den {
            return Some(IntRat {
                num: self.num.add(&other.num)?,
                den: self.den.clone(),
            });
        }
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        Some(
            IntRat {
                num,
                den: self.den.mul(&other.den)?,
            }
            .tidy(),
        )
    }

    fn neg(&self) -> Option<Self> {
        Some(IntRat {
            num: self.num.neg()?,
            den: self.den.clone(),
        })
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        Some(
            IntRat {
                num: self.num.mul(&other.num)?,
                den: self.den.mul(&other.den)?,
            }
            .tidy(),
        )
    }

    /// Callers check for a zero numerator first.
    fn inv(&self) -> Self {
        IntRat {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }
}

const OVERFLOW: &str = "integer overflow while evaluating";

/// Which field the names and `pi` are read in.
#[derive(Clone, Copy)]
struct Scope<'a> {
    names: &'a [String],
    allow_pi: Option<i128>,
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    scope: Scope<'a>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, scope: Scope<'a>) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
            scope,
        })
    }

    fn nvars(&self) -> usize {
        self.scope.names.len()
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self
                .pos()
                .error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::End)
    }

    fn expr(&mut self) -> Result<IntRat, ParseError> {
        let pos = self.pos();
        let mut acc = self.term()?;
        loop {
            let negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let mut rhs = self.term()?;
            if negate {
                rhs = rhs.neg().ok_or_else(|| pos.error(OVERFLOW))?;
            }
            acc = acc.add(&rhs).ok_or_else(|| pos.error(OVERFLOW))?;
        }
    }

    fn term(&mut self) -> Result<IntRat, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs).ok_or_else(|| pos.error(OVERFLOW))?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = divide(&acc, &rhs, pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<IntRat, ParseError> {
        let pos = self.pos();
        if self.eat(&Tok::Minus) {
            return self.unary()?.neg().ok_or_else(|| pos.error(OVERFLOW));
        }
        self.power()
    }

    fn power(&mut self) -> Result<IntRat, ParseError> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let negative = self.eat(&Tok::Minus);
        let epos = self.pos();
        let k = match self.bump().0 {
            Tok::Int(k) => k,
            other => return Err(epos.error(format!("expected an integer exponent, found {other}"))),
        };
        if k > MAX_EXPONENT as i128 {
            return Err(epos.error(format!("exponent {k} exceeds {MAX_EXPONENT}")));
        }
        let mut acc = IntRat::from_poly(IntPoly::constant(self.nvars(), 1));
        for _ in 0..k {
            acc = acc.mul(&base).ok_or_else(|| pos.error(OVERFLOW))?;
        }
        if negative {
            if base.num.is_zero() {
                return Err(pos.error("zero raised to a negative power"));
            }
            acc = acc.inv();
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<IntRat, ParseError> {
        let n = self.nvars();
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(c) => Ok(IntRat::from_poly(IntPoly::constant(n, c))),
            Tok::Name(name) if name == "pi" => match self.scope.allow_pi {
                Some(p) => Ok(IntRat::from_poly(IntPoly::constant(n, p))),
                None => Err(pos.error("`pi` is not an element of the residue field")),
            },
            Tok::Name(name) => match self.scope.names.iter().position(|v| *v == name) {
                Some(j) => Ok(IntRat::from_poly(IntPoly::var(n, j))),
                None => Err(pos.error(format!("unknown variable `{name}`"))),
            },
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(pos.error(format!("expected a value, found {other}"))),
        }
    }

    /// Index of `name` when the token at offset `k` reads `d<name>`.
    fn differential_at(&self, k: usize) -> Option<usize> {
        match self.peek_at(k) {
            Tok::Name(s) => {
                let rest = s.strip_prefix('d')?;
                self.scope.names.iter().position(|v| v == rest)
            }
            _ => None,
        }
    }

    fn at_dpair(&self) -> bool {
        self.differential_at(0).is_some()
            && self.peek_at(1) == &Tok::Caret
            && self.differential_at(2).is_some()
    }

    /// A form term: its coefficient and differential slots.
    fn form_term(&mut self) -> Result<(IntRat, (usize, usize)), ParseError> {
        let start = self.pos();
        let mut coeff = IntRat::from_poly(IntPoly::constant(self.nvars(), 1));
        let mut slots = None;
        let mut divide_next = false;
        loop {
            let pos = self.pos();
            if self.at_dpair() {
                if divide_next {
                    return Err(pos.error("cannot divide by a differential"));
                }
                if slots.is_some() {
                    return Err(pos.error("a term holds a single dt_i^dt_j"));
                }
                let i = self.differential_at(0).expect("checked");
                let j = self.differential_at(2).expect("checked");
                self.bump();
                self.bump();
                self.bump();
                slots = Some((i, j));
            } else {
                let f = self.power()?;
                coeff = if divide_next {
                    divide(&coeff, &f, pos)?
                } else {
                    coeff.mul(&f).ok_or_else(|| pos.error(OVERFLOW))?
                };
            }
            divide_next = match self.peek() {
                Tok::Star => false,
                Tok::Slash => true,
                _ => break,
            };
            self.bump();
        }
        let slots =
            slots.ok_or_else(|| start.error("expected a term of the form (c) * dt1^dt2"))?;
        Ok((coeff, slots))
    }
}

fn divide(a: &IntRat, b: &IntRat, pos: Pos) -> Result<IntRat, ParseError> {
    if b.num.is_zero() {
        return Err(pos.error("division by zero"));
    }
    a.mul(&b.inv()).ok_or_else(|| pos.error(OVERFLOW))
}

fn to_residue(x: &IntRat, field: &FieldDescriptor, pos: Pos) -> Result<RatFunc, ParseError> {
    let p = field.p() as i128;
    let reduce = |f: &IntPoly| {
        Poly::from_terms(
            field.nvars(),
            field.p(),
            f.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.rem_euclid(p) as i64)),
        )
    };
    RatFunc::new(reduce(&x.num), reduce(&x.den))
        .map_err(|_| pos.error(format!("denominator vanishes modulo {p}")))
}

fn to_element(x: &IntRat, model: &CdvfModel, pos: Pos) -> Result<CdvfElement, ParseError> {
    if x.num.is_zero() {
        return Err(pos.error("symbol entry is zero"));
    }
    model
        .from_integer_terms(&x.num.to_terms(), &x.den.to_terms())
        .map_err(|e| pos.error(e.to_string()))
}

fn residue_scope(field: &FieldDescriptor) -> Scope<'_> {
    Scope {
        names: field.var_names(),
        allow_pi: None,
    }
}

fn model_scope(model: &CdvfModel) -> Scope<'_> {
    Scope {
        names: model.residue().var_names(),
        allow_pi: Some(model.p() as i128),
    }
}

/// `sym(a, b) + ...` or `0`, as raw integer data with argument positions.
/// A parsed symbol argument with the position it started at.
type Arg = (IntRat, Pos);

fn symbols(p: &mut Parser<'_>) -> Result<Vec<(Arg, Arg)>, ParseError> {
    let mut out = Vec::new();
    if p.peek() == &Tok::Int(0) {
        p.bump();
        p.finish()?;
        return Ok(out);
    }
    loop {
        let pos = p.pos();
        match p.bump().0 {
            Tok::Name(s) if s == "sym" => {}
            other => return Err(pos.error(format!("expected `sym(`, found {other}"))),
        }
        p.expect(Tok::LParen)?;
        let apos = p.pos();
        let a = p.expr()?;
        p.expect(Tok::Comma)?;
        let bpos = p.pos();
        let b = p.expr()?;
        p.expect(Tok::RParen)?;
        out.push(((a, apos), (b, bpos)));
        if !p.eat(&Tok::Plus) {
            p.finish()?;
            return Ok(out);
        }
    }
}

pub fn parse_ratfunc(src: &str, field: &FieldDescriptor) -> Result<RatFunc, ParseError> {
    let mut p = Parser::new(src, residue_scope(field))?;
    let pos = p.pos();
    let x = p.expr()?;
    p.finish()?;
    to_residue(&x, field, pos)
}

/// Comma-separated residue field elements; the empty string is the empty list.
pub fn parse_list(src: &str, field: &FieldDescriptor) -> Result<Vec<RatFunc>, ParseError> {
    let mut p = Parser::new(src, residue_scope(field))?;
    let mut out = Vec::new();
    if p.peek() == &Tok::End {
        return Ok(out);
    }
    loop {
        let pos = p.pos();
        let x = p.expr()?;
        out.push(to_residue(&x, field, pos)?);
        if !p.eat(&Tok::Comma) {
            p.finish()?;
            return Ok(out);
        }
    }
}

pub fn parse_element(src: &str, model: &CdvfModel) -> Result<CdvfElement, ParseError> {
    let mut p = Parser::new(src, model_scope(model))?;
    let pos = p.pos();
    let x = p.expr()?;
    p.finish()?;
    to_element(&x, model, pos)
}

/// A sum of symbols over the residue field.
pub fn parse_symbol_sum(src: &str, field: &FieldDescriptor) -> Result<SymbolSum, ParseError> {
    let mut p = Parser::new(src, residue_scope(field))?;
    let mut s = SymbolSum::new();
    for ((a, apos), (b, bpos)) in symbols(&mut p)? {
        let a = to_residue(&a, field, apos)?;
        let b = to_residue(&b, field, bpos)?;
        if a.is_zero() {
            return Err(apos.error("symbol entry is zero"));
        }
        if b.is_zero() {
            return Err(bpos.error("symbol entry is zero"));
        }
        s.push(a, b);
    }
    Ok(s)
}

/// A sum of symbols over the model field.
pub fn parse_class(src: &str, model: &CdvfModel) -> Result<BrauerClass, ParseError> {
    let mut p = Parser::new(src, model_scope(model))?;
    let mut c = BrauerClass::new(model.clone());
    for ((a, apos), (b, bpos)) in symbols(&mut p)? {
        c.push(to_element(&a, model, apos)?, to_element(&b, model, bpos)?);
    }
    Ok(c)
}

pub fn parse_omega2(src: &str, field: &FieldDescriptor) -> Result<Omega2Form, ParseError> {
    let mut p = Parser::new(src, residue_scope(field))?;
    let mut form = Omega2Form::zero(field.nvars(), field.p());
    if p.peek() == &Tok::Int(0) && p.peek_at(1) == &Tok::End {
        return Ok(form);
    }
    let mut negate = p.eat(&Tok::Minus);
    loop {
        let pos = p.pos();
        let (c, (i, j)) = p.form_term()?;
        let mut c = to_residue(&c, field, pos)?;
        if negate {
            c = c.neg();
        }
        form.add_to(i, j, &c);
        negate = match p.peek() {
            Tok::Plus => false,
            Tok::Minus => true,
            _ => break,
        };
        p.bump();
    }
    p.finish()?;
    Ok(form)
}

/// Renders a symbol sum over the residue field in the input grammar.
pub fn format_symbol_sum(s: &SymbolSum, field: &FieldDescriptor) -> String {
    if s.is_empty() {
        return "0".into();
    }
    s.entries()
        .iter()
        .map(|(a, b)| format!("sym({}, {})", field.format(a), field.format(b)))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u32, n: usize) -> FieldDescriptor {
        FieldDescriptor::standard(p, n).unwrap()
    }

    #[test]
    fn arithmetic() {
        let f = k(3, 2);
        let x = parse_ratfunc("(t1^2 - 1)/(t1 + 1) - t1", &f).unwrap();
        assert_eq!(x, f.constant(-1));
        let y = parse_ratfunc("t2^-2 * t2^3", &f).unwrap();
        assert_eq!(y, f.var(1));
        assert_eq!(parse_ratfunc("-4", &f).unwrap(), f.constant(2));
    }

    #[test]
    fn errors_carry_positions() {
        let f = k(2, 1);
        let e = parse_ratfunc("t1 +\n  u", &f).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_ratfunc("1/(t1 - t1)", &f).unwrap_err();
        assert_eq!((e.line, e.column), (1, 2));
        let e = parse_ratfunc("1/2", &f).unwrap_err();
        assert!(e.message.contains("vanishes"));
        let e = parse_ratfunc("pi", &f).unwrap_err();
        assert_eq!(e.column, 1);
        assert!(parse_ratfunc("2^1000", &f).is_err());
        assert!(parse_ratfunc("(t1", &f).is_err());
    }

    #[test]
    fn model_elements_read_valuations() {
        let m = CdvfModel::new(k(2, 1)).unwrap();
        let x = parse_element("12 * t1 / pi", &m).unwrap();
        assert_eq!(x.val, 1);
        let y = parse_element(&m.format_element(&x), &m).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn forms() {
        let f = k(2, 3);
        let a = parse_omega2("(t1) * dt1^dt2 - dt3^dt1 + t2*dt2^dt3/t3", &f).unwrap();
        assert_eq!(a.coeff(0, 1), f.var(0));
        assert_eq!(a.coeff(0, 2), f.one());
        assert_eq!(a.coeff(1, 2), f.var(1).div(&f.var(2)).unwrap());
        assert!(parse_omega2("t1 * dt1", &f).is_err());
        assert!(parse_omega2("dt1^dt2 * dt1^dt3", &f).is_err());
    }

    #[test]
    fn symbols_and_lists() {
        let f = k(3, 2);
        let s = parse_symbol_sum("sym(t1, t2 + 1) + sym(t1 - t2, 2)", &f).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(parse_symbol_sum(&format_symbol_sum(&s, &f), &f).unwrap(), s);
        assert!(parse_symbol_sum("sym(t1, 3)", &f).is_err());
        assert_eq!(parse_list("t1, t2^2", &f).unwrap().len(), 2);
        assert!(parse_list("", &f).unwrap().is_empty());
    }
}
