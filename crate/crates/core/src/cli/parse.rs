//! Recursive-descent parsers for polynomials over `Q(z)`, entire
//! expressions, and problem files.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{ExponentVector, Field, MultiPoly, Rational, RationalFunction};
use crate::nevanlinna::EntireExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    /// An inhomogeneous polynomial, or a declared degree that disagrees.
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("variable x{index} is out of range for M = {m}")]
    ArityMismatch { index: usize, m: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Num(s.parse().expect("digits")), col });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if "+-*/^(){}".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(ParseError { line, col, kind: ParseErrorKind::Syntax(format!("unexpected character '{c}'")) });
        }
    }
    out.push(Token { tok: Tok::End, col: col0 + chars.len() });
    Ok(out)
}

/// Ring operations shared by the three grammars.
trait Algebra: Sized + Clone {
    fn num(n: &BigInt) -> Self;
    fn ident(p: &mut Parser<Self>, name: &str, col: usize) -> Result<Self, ParseError>;
    fn add(a: &Self, b: &Self) -> Self;
    fn sub(a: &Self, b: &Self) -> Self;
    fn mul(a: &Self, b: &Self) -> Self;
    fn neg(a: &Self) -> Self;
    fn div(a: &Self, b: &Self) -> Result<Self, String>;
    fn pow(a: &Self, k: u32) -> Self;
    /// `{...}` literal, if the grammar has one.
    fn brace(p: &mut Parser<Self>, col: usize) -> Result<Self, ParseError> {
        Err(p.err_at(col, "unexpected '{'"))
    }
}

struct Parser<T> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    nvars: usize,
    _t: std::marker::PhantomData<T>,
}

impl<T: Algebra> Parser<T> {
    fn new(toks: Vec<Token>, line: usize, nvars: usize) -> Self {
        Parser { toks, pos: 0, line, nvars, _t: std::marker::PhantomData }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, col: usize, msg: &str) -> ParseError {
        ParseError { line: self.line, col, kind: ParseErrorKind::Syntax(msg.to_string()) }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err_at(self.col(), &format!("expected '{c}'")))
        }
    }

    fn parse_all(&mut self) -> Result<T, ParseError> {
        let v = self.expr()?;
        if *self.peek() != Tok::End {
            return Err(self.err_at(self.col(), "unexpected trailing input"));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<T, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = T::add(&acc, &self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = T::sub(&acc, &self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<T, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    acc = T::mul(&acc, &self.unary()?);
                }
                Tok::Sym('/') => {
                    let col = self.col();
                    self.bump();
                    let d = self.unary()?;
                    acc = T::div(&acc, &d).map_err(|m| self.err_at(col, &m))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<T, ParseError> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Ok(T::neg(&self.unary()?))
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<T, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let col = self.col();
            match self.bump().tok {
                Tok::Num(n) => {
                    let k: u32 = n.try_into().map_err(|_| self.err_at(col, "exponent too large"))?;
                    Ok(T::pow(&base, k))
                }
                _ => Err(self.err_at(col, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<T, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Num(n) => Ok(T::num(&n)),
            Tok::Ident(name) => T::ident(self, &name, t.col),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Sym('{') => T::brace(self, t.col),
            Tok::End => Err(self.err_at(t.col, "unexpected end of input")),
            Tok::Sym(c) => Err(self.err_at(t.col, &format!("unexpected '{c}'"))),
        }
    }
}

fn big_to_rational(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

impl Algebra for RationalFunction {
    fn num(n: &BigInt) -> Self {
        RationalFunction::from_rational(&big_to_rational(n))
    }
    fn ident(p: &mut Parser<Self>, name: &str, col: usize) -> Result<Self, ParseError> {
        if name == "z" {
            Ok(RationalFunction::z())
        } else {
            Err(p.err_at(col, &format!("unknown symbol '{name}' in a coefficient (only z)")))
        }
    }
    fn add(a: &Self, b: &Self) -> Self {
        Field::add(a, b)
    }
    fn sub(a: &Self, b: &Self) -> Self {
        Field::sub(a, b)
    }
    fn mul(a: &Self, b: &Self) -> Self {
        Field::mul(a, b)
    }
    fn neg(a: &Self) -> Self {
        Field::neg(a)
    }
    fn div(a: &Self, b: &Self) -> Result<Self, String> {
        Field::div(a, b).ok_or_else(|| "division by zero".to_string())
    }
    fn pow(a: &Self, k: u32) -> Self {
        RationalFunction::pow(a, k)
    }
}

type QzPoly = MultiPoly<RationalFunction>;

impl Algebra for QzPoly {
    fn num(n: &BigInt) -> Self {
        MultiPoly::constant(0, RationalFunction::num(n))
    }
    fn ident(p: &mut Parser<Self>, name: &str, col: usize) -> Result<Self, ParseError> {
        let idx = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()).filter(|_| name.len() == 2);
        match idx {
            Some(i) if i < p.nvars => Ok(MultiPoly::var(p.nvars, i)),
            Some(i) => Err(ParseError { line: p.line, col, kind: ParseErrorKind::ArityMismatch { index: i, m: p.nvars - 1 } }),
            None => Err(p.err_at(col, &format!("unknown variable '{name}' (expected x0..x9)"))),
        }
    }
    fn add(a: &Self, b: &Self) -> Self {
        widen(a, b, |x, y| x.add(y))
    }
    fn sub(a: &Self, b: &Self) -> Self {
        widen(a, b, |x, y| x.sub(y))
    }
    fn mul(a: &Self, b: &Self) -> Self {
        widen(a, b, |x, y| x.mul(y))
    }
    fn neg(a: &Self) -> Self {
        a.neg()
    }
    fn div(a: &Self, b: &Self) -> Result<Self, String> {
        let c = constant_of(b).ok_or_else(|| "can only divide by a constant".to_string())?;
        let inv = c.inv().ok_or_else(|| "division by zero".to_string())?;
        Ok(a.scale(&inv))
    }
    fn pow(a: &Self, k: u32) -> Self {
        a.pow(k)
    }
    fn brace(p: &mut Parser<Self>, _col: usize) -> Result<Self, ParseError> {
        let start = p.pos;
        let mut depth = 1;
        let mut end = start;
        while depth > 0 {
            match &p.toks[end].tok {
                Tok::Sym('{') => depth += 1,
                Tok::Sym('}') => depth -= 1,
                Tok::End => return Err(p.err_at(p.toks[end].col, "unclosed '{'")),
                _ => {}
            }
            end += 1;
        }
        let mut inner: Vec<Token> = p.toks[start..end - 1].to_vec();
        inner.push(Token { tok: Tok::End, col: p.toks[end - 1].col });
        let c = Parser::<RationalFunction>::new(inner, p.line, 0).parse_all()?;
        p.pos = end;
        Ok(MultiPoly::constant(0, c))
    }
}

/// Constants are built with zero variables and widened on contact.
fn widen(a: &QzPoly, b: &QzPoly, op: impl Fn(&QzPoly, &QzPoly) -> QzPoly) -> QzPoly {
    let n = a.nvars().max(b.nvars());
    op(&lift_to(a, n), &lift_to(b, n))
}

fn lift_to(p: &QzPoly, n: usize) -> QzPoly {
    if p.nvars() == n {
        return p.clone();
    }
    MultiPoly::from_terms(
        n,
        p.terms().map(|(e, c)| {
            let mut ex = e.exps().to_vec();
            ex.resize(n, 0);
            (ExponentVector::new(ex), c.clone())
        }),
    )
}

fn constant_of(p: &QzPoly) -> Option<RationalFunction> {
    match p.num_terms() {
        0 => Some(RationalFunction::zero()),
        1 => {
            let (e, c) = p.terms().next()?;
            (e.total() == 0).then(|| c.clone())
        }
        _ => None,
    }
}

impl Algebra for EntireExpr {
    fn num(n: &BigInt) -> Self {
        EntireExpr::constant(crate::algebra::upoly::rational_to_f64(&big_to_rational(n)))
    }
    fn ident(p: &mut Parser<Self>, name: &str, col: usize) -> Result<Self, ParseError> {
        match name {
            "z" => Ok(EntireExpr::z()),
            "exp" => {
                p.expect('(')?;
                let e = p.expr()?;
                p.expect(')')?;
                Ok(EntireExpr::exp(e))
            }
            _ => Err(p.err_at(col, &format!("unknown symbol '{name}' (expected z or exp)"))),
        }
    }
    fn add(a: &Self, b: &Self) -> Self {
        fold_const(a, b, |x, y| x + y).unwrap_or_else(|| EntireExpr::add(a.clone(), b.clone()))
    }
    fn sub(a: &Self, b: &Self) -> Self {
        fold_const(a, b, |x, y| x - y).unwrap_or_else(|| EntireExpr::sub(a.clone(), b.clone()))
    }
    fn mul(a: &Self, b: &Self) -> Self {
        fold_const(a, b, |x, y| x * y).unwrap_or_else(|| EntireExpr::mul(a.clone(), b.clone()))
    }
    fn neg(a: &Self) -> Self {
        match a {
            EntireExpr::Const(c) => EntireExpr::Const(-c),
            _ => EntireExpr::neg(a.clone()),
        }
    }
    fn div(a: &Self, b: &Self) -> Result<Self, String> {
        match b {
            EntireExpr::Const(c) if *c != 0.0 => Ok(<Self as Algebra>::mul(a, &EntireExpr::Const(1.0 / c))),
            EntireExpr::Const(_) => Err("division by zero".into()),
            _ => Err("can only divide by a constant".into()),
        }
    }
    fn pow(a: &Self, k: u32) -> Self {
        match a {
            EntireExpr::Const(c) => EntireExpr::Const(c.powi(k as i32)),
            _ => EntireExpr::pow(a.clone(), k),
        }
    }
}

fn fold_const(a: &EntireExpr, b: &EntireExpr, op: impl Fn(f64, f64) -> f64) -> Option<EntireExpr> {
    match (a, b) {
        (EntireExpr::Const(x), EntireExpr::Const(y)) => Some(EntireExpr::Const(op(*x, *y))),
        _ => None,
    }
}

/// Parses a polynomial in `x0..x_M` with `{...}` coefficient literals.
pub fn parse_poly(text: &str, m: usize) -> Result<MultiPoly<RationalFunction>, ParseError> {
    parse_poly_at(text, m, 1, 1)
}

fn parse_poly_at(text: &str, m: usize, line: usize, col0: usize) -> Result<QzPoly, ParseError> {
    let toks = lex(text, line, col0)?;
    let p = Parser::<QzPoly>::new(toks, line, m + 1).parse_all()?;
    Ok(lift_to(&p, m + 1))
}

/// Parses an entire expression in `z` (constants, `+ - * ^`, `exp`).
pub fn parse_entire(text: &str) -> Result<EntireExpr, ParseError> {
    parse_entire_at(text, 1, 1)
}

fn parse_entire_at(text: &str, line: usize, col0: usize) -> Result<EntireExpr, ParseError> {
    Parser::<EntireExpr>::new(lex(text, line, col0)?, line, 0).parse_all()
}

/// Parses a `{...}`-free rational function of `z`.
pub fn parse_ratfunc(text: &str) -> Result<RationalFunction, ParseError> {
    Parser::<RationalFunction>::new(lex(text, 1, 1)?, 1, 0).parse_all()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hypersurface {
    pub poly: MultiPoly<RationalFunction>,
    pub degree: u32,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub m: usize,
    pub n: Option<usize>,
    pub variety: Vec<MultiPoly<Rational>>,
    pub hypersurfaces: Vec<Hypersurface>,
    pub curve: Vec<EntireExpr>,
    pub curve_source: Vec<String>,
    pub options: BTreeMap<String, String>,
}

impl ProblemSpec {
    pub fn option<T: std::str::FromStr>(&self, key: &str) -> Option<T> {
        self.options.get(key).and_then(|v| v.parse().ok())
    }

    pub fn targets(&self) -> Vec<MultiPoly<RationalFunction>> {
        self.hypersurfaces.iter().map(|h| h.poly.clone()).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    None,
    Variety,
    Hypersurfaces,
    Curve,
    Options,
}

/// Strips a trailing `#` comment; returns the content and its starting column.
fn content(raw: &str) -> (&str, usize) {
    let no_comment = raw.split('#').next().unwrap_or("");
    let lead = no_comment.len() - no_comment.trim_start().len();
    (no_comment.trim(), lead + 1)
}

fn inhomogeneous() -> ParseErrorKind {
    ParseErrorKind::DegreeMismatch("polynomial is not homogeneous".into())
}

/// Parses a problem file with `[variety]`, `[hypersurfaces]`, `[curve]` and
/// `[options]` sections.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, ParseError> {
    let mut section = Section::None;
    let mut m: Option<usize> = None;
    let mut n = None;
    let mut variety_src = Vec::new();
    let mut hyper_src = Vec::new();
    let mut curve_src = Vec::new();
    let mut options = BTreeMap::new();
    let err = |line, col, kind| ParseError { line, col, kind };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let (body, col) = content(raw);
        if body.is_empty() {
            continue;
        }
        if body.starts_with('[') {
            section = match body {
                "[variety]" => Section::Variety,
                "[hypersurfaces]" => Section::Hypersurfaces,
                "[curve]" => Section::Curve,
                "[options]" => Section::Options,
                _ => return Err(err(line, col, ParseErrorKind::Syntax(format!("unknown section {body}")))),
            };
            continue;
        }
        let key_value = body.split_once('=').map(|(a, b)| (a.trim(), b.trim()));
        match section {
            Section::None => return Err(err(line, col, ParseErrorKind::Syntax("content before any section".into()))),
            Section::Variety => match key_value {
                Some(("M", v)) => {
                    m = Some(v.parse().map_err(|_| err(line, col, ParseErrorKind::Syntax("M must be an integer".into())))?)
                }
                Some(("n", v)) => {
                    n = Some(v.parse().map_err(|_| err(line, col, ParseErrorKind::Syntax("n must be an integer".into())))?)
                }
                Some((key, _)) => {
                    return Err(err(line, col, ParseErrorKind::Syntax(format!("unknown variety key '{key}'"))))
                }
                None => variety_src.push((line, col, body.to_string())),
            },
            Section::Hypersurfaces => hyper_src.push((line, col, body.to_string())),
            Section::Curve => curve_src.push((line, col, body.to_string())),
            Section::Options => match key_value {
                Some((key, v)) => {
                    options.insert(key.to_string(), v.to_string());
                }
                None => return Err(err(line, col, ParseErrorKind::Syntax("expected key = value".into()))),
            },
        }
    }
    let m = m.ok_or_else(|| err(1, 1, ParseErrorKind::Invalid("[variety] must set M".into())))?;
    let mut variety = Vec::new();
    for (line, col, src) in &variety_src {
        let p = parse_poly_at(src, m, *line, *col)?;
        let q = p.to_rational().ok_or_else(|| {
            err(*line, *col, ParseErrorKind::Invalid("variety generators must have constant coefficients".into()))
        })?;
        if q.is_zero() || !q.is_homogeneous() {
            return Err(err(*line, *col, inhomogeneous()));
        }
        variety.push(q);
    }
    let mut hypersurfaces = Vec::new();
    for (line, col, src) in &hyper_src {
        let (poly_src, declared) = match src.rsplit_once(';') {
            Some((a, b)) => {
                let d: u32 = b.trim().parse().map_err(|_| {
                    err(*line, col + a.len() + 1, ParseErrorKind::Syntax("degree after ';' must be an integer".into()))
                })?;
                (a.trim_end(), Some(d))
            }
            None => (src.as_str(), None),
        };
        let poly = parse_poly_at(poly_src, m, *line, *col)?;
        let actual = match poly.degree() {
            Some(d) if poly.is_homogeneous() => d,
            _ => return Err(err(*line, *col, inhomogeneous())),
        };
        if actual == 0 {
            return Err(err(*line, *col, ParseErrorKind::Invalid("hypersurface must have positive degree".into())));
        }
        if let Some(d) = declared {
            if d != actual {
                return Err(err(
                    *line,
                    *col,
                    ParseErrorKind::DegreeMismatch(format!("declared degree {d}, parsed degree {actual}")),
                ));
            }
        }
        hypersurfaces.push(Hypersurface { poly, degree: actual, source: poly_src.to_string() });
    }
    let mut curve = Vec::new();
    for (line, col, src) in &curve_src {
        curve.push(parse_entire_at(src, *line, *col)?);
    }
    if !curve.is_empty() && curve.len() != m + 1 {
        return Err(err(
            curve_src[0].0,
            1,
            ParseErrorKind::Invalid(format!("curve has {} components, expected M + 1 = {}", curve.len(), m + 1)),
        ));
    }
    Ok(ProblemSpec {
        m,
        n,
        variety,
        hypersurfaces,
        curve,
        curve_source: curve_src.into_iter().map(|(_, _, s)| s).collect(),
        options,
    })
}

/// Renders a spec back in problem-file syntax, polynomials in canonical order.
pub fn render_problem(spec: &ProblemSpec) -> String {
    let mut out = format!("[variety]\nM = {}\n", spec.m);
    if let Some(n) = spec.n {
        out.push_str(&format!("n = {n}\n"));
    }
    for g in &spec.variety {
        out.push_str(&format!("{g}\n"));
    }
    out.push_str("\n[hypersurfaces]\n");
    for h in &spec.hypersurfaces {
        out.push_str(&format!("{} ; {}\n", h.poly, h.degree));
    }
    if !spec.curve_source.is_empty() {
        out.push_str("\n[curve]\n");
        for c in &spec.curve_source {
            out.push_str(&format!("{c}\n"));
        }
    }
    if !spec.options.is_empty() {
        out.push_str("\n[options]\n");
        for (k, v) in &spec.options {
            out.push_str(&format!("{k} = {v}\n"));
        }
    }
    out
}

/// Coefficients of a `Q(z)` polynomial exposed as `UniPoly` pairs, for tests.
#[cfg(test)]
fn coeff_of(p: &QzPoly, e: &[u32]) -> Option<(crate::algebra::UniPoly, crate::algebra::UniPoly)> {
    p.coeff(&ExponentVector::new(e.to_vec())).map(|c| (c.numerator().clone(), c.denominator().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, UniPoly};
    use num_complex::Complex64;
    use proptest::prelude::*;

    const CONIC: &str = "\
# conic with four moving conics
[variety]
M = 2
n = 1
x0*x2 - x1^2

[hypersurfaces]
x2^2 + {z}*x1*x2 - 2*x0^2 ; 2
{z}*x0^2 + x1*x2

[curve]
1
exp(z)
exp(2*z)

[options]
N = 12
epsilon = 0.5
";

    #[test]
    fn conic_file() {
        let spec = parse_problem(CONIC).unwrap();
        assert_eq!(spec.m, 2);
        assert_eq!(spec.n, Some(1));
        assert_eq!(spec.variety.len(), 1);
        assert_eq!(spec.hypersurfaces.len(), 2);
        assert_eq!(spec.hypersurfaces[1].degree, 2);
        let (num, den) = coeff_of(&spec.hypersurfaces[1].poly, &[2, 0, 0]).unwrap();
        assert_eq!((num, den), (UniPoly::z(), UniPoly::one()));
        assert_eq!(spec.curve.len(), 3);
        let v = spec.curve[2].value(Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - 2f64.exp()).abs() < 1e-12);
        assert_eq!(spec.option::<u32>("N"), Some(12));
    }

    #[test]
    fn example_coefficients() {
        let p = parse_poly("{z^2+1}*x0^2 - {2/(z-1)}*x1*x2", 2).unwrap();
        let (num, den) = coeff_of(&p, &[0, 1, 1]).unwrap();
        assert_eq!(num, UniPoly::from_ints(&[-2]));
        assert_eq!(den, UniPoly::from_ints(&[-1, 1]));
        let p = parse_poly("2/3*x1 - 4/6*x0", 1).unwrap();
        assert_eq!(p.to_string(), "-2/3*x0 + 2/3*x1");
        let q = parse_poly("(x0 + x1)^2 - x0*(x0 + 2*x1)", 1).unwrap();
        assert_eq!(q.to_string(), "x1^2");
    }

    #[test]
    fn errors_carry_positions() {
        let bad = "[variety]\nM = 2\nx0 + x1^2\n";
        let e = parse_problem(bad).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::DegreeMismatch(_)));
        let e = parse_problem("[variety]\nM = 1\n[hypersurfaces]\n  x0 + x3\n").unwrap_err();
        assert_eq!((e.line, e.col), (4, 8));
        assert!(matches!(e.kind, ParseErrorKind::ArityMismatch { index: 3, m: 1 }));
        let e = parse_problem("[variety]\nM = 1\n[hypersurfaces]\nx0^2 ; 3\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DegreeMismatch("declared degree 3, parsed degree 2".into()));
        let e = parse_poly("x0 * * x1", 1).unwrap_err();
        assert_eq!(e.col, 6);
        assert!(parse_poly("x0 / x1", 1).is_err());
        assert!(parse_poly("{1/(z-z)}*x0", 1).is_err());
        assert!(parse_entire("exp(z) / z").is_err());
        let e = parse_problem("[variety]\nM = 1\n[curve]\n1\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Invalid(_)));
    }

    #[test]
    fn entire_expressions() {
        let e = parse_entire("z*exp(2*z) - 1/2").unwrap();
        let v = e.value(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - (0.5 * 1f64.exp() - 0.5)).abs() < 1e-14);
        let c = parse_entire("-(3 - 1)^2").unwrap();
        assert_eq!(c, EntireExpr::Const(-4.0));
    }

    #[test]
    fn ratfunc_literals() {
        assert_eq!(parse_ratfunc("4/6").unwrap().as_constant(), Some(rational(2, 3)));
        let r = parse_ratfunc("(z^2 - 1)/(z - 1)").unwrap();
        assert!(r.is_polynomial());
    }

    #[test]
    fn render_round_trip() {
        let spec = parse_problem(CONIC).unwrap();
        let again = parse_problem(&render_problem(&spec)).unwrap();
        assert_eq!(again.variety, spec.variety);
        assert_eq!(again.targets(), spec.targets());
        assert_eq!(again.curve, spec.curve);
        assert_eq!(again.options, spec.options);
    }

    fn arb_coeff() -> impl Strategy<Value = RationalFunction> {
        (prop::collection::vec(-3i64..=3, 1..3), prop::collection::vec(-2i64..=2, 0..2), 1i64..4).prop_map(
            |(num, den, s)| {
                let mut d = den.clone();
                d.push(1);
                let n = UniPoly::from_ints(&num).scale(&rational(1, s));
                RationalFunction::canonicalize(n, UniPoly::from_ints(&d)).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn display_parses_back(terms in prop::collection::vec((0u32..=3, arb_coeff()), 0..5)) {
            // homogeneous cubics in x0, x1
            let p = MultiPoly::from_terms(
                2,
                terms.into_iter().map(|(i, c)| (ExponentVector::new(vec![i, 3 - i]), c)),
            );
            let back = parse_poly(&p.to_string(), 1).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
