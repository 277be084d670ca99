//! Expression grammar shared by all CLI commands.
//!
//! Atoms: integers, `q`, `u`, `y`, generators `x[i,j]`, Plucker brackets
//! `[a,b,...]` (compact `[ab...]` accepted on input when `n <= 9`), with
//! `+ - * / ( )` and `^` carrying integer exponents. Adjacent Plucker
//! brackets multiply implicitly, matching the rendered form of words.
//! The ring is selected by the caller, never inferred; evaluation is exact.

use std::fmt;

use num_bigint::BigInt;
use qgrass_core::dehom::{DehomContext, TElement};
use qgrass_core::grassmann::{GrassAlgebra, LocalizedElement, PluckerIndex, PluckerWord};
use qgrass_core::qmatrix::{MatrixAlgebra, NcPoly};
use qgrass_core::scalar::QScalar;

/// Position of a token in the source text, 1-indexed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Parse or evaluation error with the offending position.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Int(BigInt),
    Q,
    U,
    Y,
    X,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

struct Lexer;

impl Lexer {
    fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
        let mut out = Vec::new();
        let mut line = 1usize;
        let mut col = 1usize;
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            let pos = Pos { line, col };
            match c {
                '\n' => {
                    chars.next();
                    line += 1;
                    col = 1;
                }
                ' ' | '\t' | '\r' => {
                    chars.next();
                    col += 1;
                }
                '0'..='9' => {
                    let mut digits = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(d);
                            chars.next();
                            col += 1;
                        } else {
                            break;
                        }
                    }
                    out.push((Tok::Int(digits.parse().expect("digits")), pos));
                }
                'q' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::Q, pos));
                }
                'u' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::U, pos));
                }
                'y' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::Y, pos));
                }
                'x' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::X, pos));
                }
                '[' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::LBracket, pos));
                }
                ']' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::RBracket, pos));
                }
                '(' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::LParen, pos));
                }
                ')' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::RParen, pos));
                }
                ',' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::Comma, pos));
                }
                '+' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::Plus, pos));
                }
                '-' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::Minus, pos));
                }
                '*' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::Star, pos));
                }
                '/' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::Slash, pos));
                }
                '^' => {
                    chars.next();
                    col += 1;
                    out.push((Tok::Caret, pos));
                }
                other => return err(pos, format!("unexpected character '{other}'")),
            }
        }
        Ok(out)
    }
}

/// Abstract syntax with source positions on the atoms.
#[derive(Clone, Debug)]
pub enum Expr {
    Int(BigInt, Pos),
    Q(Pos),
    U(Pos),
    Y(Pos),
    Gen { row: usize, col: usize, pos: Pos },
    Plucker { cols: Vec<usize>, pos: Pos },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i64, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int(_, p)
            | Expr::Q(p)
            | Expr::U(p)
            | Expr::Y(p)
            | Expr::Gen { pos: p, .. }
            | Expr::Plucker { pos: p, .. }
            | Expr::Div(_, _, p)
            | Expr::Pow(_, _, p) => *p,
            Expr::Neg(e) => e.pos(),
            Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) => a.pos(),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.at)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn here(&self) -> Pos {
        self.peek().map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Pos, ParseError> {
        match self.next() {
            Some((t, p)) if t == want => Ok(p),
            Some((t, p)) => err(p, format!("expected {what}, found {t:?}")),
            None => err(self.end, format!("expected {what}, found end of input")),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some((Tok::Plus, _)) => {
                    self.next();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some((Tok::Minus, _)) => {
                    self.next();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some((Tok::Star, _)) => {
                    self.next();
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some((Tok::Slash, p)) => {
                    let p = *p;
                    self.next();
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs), p);
                }
                // Adjacent brackets multiply implicitly: `[1,3][1,4]`.
                Some((Tok::LBracket, _)) => {
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.next();
            let inner = self.parse_factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_atom()?;
        if let Some((Tok::Caret, _)) = self.peek() {
            let caret_pos = self.here();
            self.next();
            let negative = matches!(self.peek(), Some((Tok::Minus, _)));
            if negative {
                self.next();
            }
            let (tok, pos) = match self.next() {
                Some(t) => t,
                None => return err(self.end, "expected an exponent"),
            };
            let Tok::Int(v) = tok else {
                return err(pos, "expected an integer exponent");
            };
            let mut e: i64 = i64::try_from(&v).map_err(|_| ParseError {
                pos,
                message: "exponent out of range".to_string(),
            })?;
            if negative {
                e = -e;
            }
            return Ok(Expr::Pow(Box::new(base), e, caret_pos));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = match self.next() {
            Some(t) => t,
            None => return err(self.end, "expected an expression"),
        };
        match tok {
            Tok::Int(v) => Ok(Expr::Int(v, pos)),
            Tok::Q => Ok(Expr::Q(pos)),
            Tok::U => Ok(Expr::U(pos)),
            Tok::Y => Ok(Expr::Y(pos)),
            Tok::X => {
                self.expect(Tok::LBracket, "'[' after x")?;
                let row = self.parse_usize("row index")?;
                self.expect(Tok::Comma, "',' between indices")?;
                let col = self.parse_usize("column index")?;
                self.expect(Tok::RBracket, "']' closing the generator")?;
                Ok(Expr::Gen { row, col, pos })
            }
            Tok::LBracket => {
                let mut entries = Vec::new();
                entries.push(self.parse_usize("column index")?);
                loop {
                    match self.peek() {
                        Some((Tok::Comma, _)) => {
                            self.next();
                            entries.push(self.parse_usize("column index")?);
                        }
                        Some((Tok::RBracket, _)) => {
                            self.next();
                            break;
                        }
                        Some((_, p)) => return err(*p, "expected ',' or ']' in a bracket"),
                        None => return err(self.end, "unterminated bracket"),
                    }
                }
                Ok(Expr::Plucker { cols: entries, pos })
            }
            Tok::LParen => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            other => err(pos, format!("unexpected token {other:?}")),
        }
    }

    fn parse_usize(&mut self, what: &str) -> Result<usize, ParseError> {
        match self.next() {
            Some((Tok::Int(v), pos)) => usize::try_from(&v).map_err(|_| ParseError {
                pos,
                message: format!("{what} out of range"),
            }),
            Some((t, p)) => err(p, format!("expected {what}, found {t:?}")),
            None => err(self.end, format!("expected {what}")),
        }
    }
}

/// Parse the grammar without evaluating.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = Lexer::lex(text)?;
    let last_line = text.lines().count().max(1);
    let end = Pos {
        line: last_line,
        col: text.lines().last().map(|l| l.len() + 1).unwrap_or(1),
    };
    let mut p = Parser { toks, at: 0, end };
    let e = p.parse_expr()?;
    if let Some((t, pos)) = p.peek() {
        return err(*pos, format!("unexpected trailing token {t:?}"));
    }
    Ok(e)
}

/// The ring an expression is evaluated in.
pub enum RingContext<'a> {
    Matrix(&'a MatrixAlgebra),
    Grass(&'a GrassAlgebra),
    T(&'a DehomContext),
    /// Scalars only: used for torus entries in automorphism descriptors.
    Scalar,
}

/// An exact value in one of the three rings, or a bare scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum RingValue {
    Matrix(NcPoly),
    Grass(LocalizedElement),
    T(TElement),
    Scalar(QScalar),
}

impl RingValue {
    pub fn render(&self, ctx: &RingContext<'_>) -> String {
        match (self, ctx) {
            (RingValue::Matrix(p), RingContext::Matrix(alg)) => p.render(alg.shape()),
            (RingValue::Grass(l), _) => l.render(),
            (RingValue::T(t), RingContext::T(d)) => t.render(d),
            (RingValue::Scalar(s), _) => s.render_human(),
            _ => unreachable!("value rendered against a foreign ring"),
        }
    }
}

/// Evaluate an expression in the selected ring.
pub fn eval(expr: &Expr, ctx: &RingContext<'_>) -> Result<RingValue, ParseError> {
    match expr {
        Expr::Int(v, _) => Ok(scalar_value(QScalar::integer(v.clone()), ctx)),
        Expr::Q(_) => Ok(scalar_value(QScalar::q(), ctx)),
        Expr::U(pos) => match ctx {
            RingContext::Grass(alg) => Ok(RingValue::Grass(alg.u_power(1))),
            _ => err(*pos, "'u' only exists in the grassmannian ring"),
        },
        Expr::Y(pos) => match ctx {
            RingContext::T(d) => Ok(RingValue::T(d.y_power(1))),
            _ => err(*pos, "'y' only exists in the Laurent ring"),
        },
        Expr::Gen { row, col, pos } => match ctx {
            RingContext::Matrix(alg) => {
                alg.gen(*row, *col)
                    .map(RingValue::Matrix)
                    .map_err(|e| ParseError {
                        pos: *pos,
                        message: e.to_string(),
                    })
            }
            RingContext::T(d) => d
                .x_gen(*row, *col)
                .map(RingValue::T)
                .map_err(|e| ParseError {
                    pos: *pos,
                    message: e.to_string(),
                }),
            RingContext::Grass(_) => err(
                *pos,
                "matrix generators are not grassmannian elements; use Plucker brackets",
            ),
            RingContext::Scalar => err(*pos, "generators are not scalars"),
        },
        Expr::Plucker { cols, pos } => match ctx {
            RingContext::Grass(alg) => {
                let index = plucker_from_entries(cols, alg, *pos)?;
                Ok(RingValue::Grass(alg.letter(&index)))
            }
            _ => err(*pos, "Plucker brackets only exist in the grassmannian ring"),
        },
        Expr::Neg(e) => {
            let v = eval(e, ctx)?;
            Ok(neg_value(&v))
        }
        Expr::Add(a, b) => {
            let (va, vb) = (eval(a, ctx)?, eval(b, ctx)?);
            add_values(&va, &vb, ctx, a.pos())
        }
        Expr::Sub(a, b) => {
            let (va, vb) = (eval(a, ctx)?, eval(b, ctx)?);
            add_values(&va, &neg_value(&vb), ctx, a.pos())
        }
        Expr::Mul(a, b) => {
            let (va, vb) = (eval(a, ctx)?, eval(b, ctx)?);
            mul_values(&va, &vb, ctx, a.pos())
        }
        Expr::Div(a, b, pos) => {
            let (va, vb) = (eval(a, ctx)?, eval(b, ctx)?);
            let divisor = as_invertible_scalar(&vb, *pos)?;
            let inv = divisor.inverse().map_err(|e| ParseError {
                pos: *pos,
                message: e.to_string(),
            })?;
            mul_values(&va, &scalar_value(inv, ctx), ctx, *pos)
        }
        Expr::Pow(base, e, pos) => {
            let v = eval(base, ctx)?;
            pow_value(&v, *e, ctx, *pos)
        }
    }
}

fn plucker_from_entries(
    entries: &[usize],
    alg: &GrassAlgebra,
    pos: Pos,
) -> Result<PluckerIndex, ParseError> {
    let shape = alg.shape();
    // Compact form: one multi-digit entry whose digits form a k-subset,
    // accepted when n <= 9.
    if entries.len() == 1 && shape.n <= 9 && shape.k > 1 {
        let digits: Vec<usize> = entries[0]
            .to_string()
            .chars()
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect();
        if digits.len() == shape.k {
            return PluckerIndex::new(digits, shape).map_err(|e| ParseError {
                pos,
                message: e.to_string(),
            });
        }
    }
    PluckerIndex::new(entries.to_vec(), shape).map_err(|e| ParseError {
        pos,
        message: e.to_string(),
    })
}

fn scalar_value(c: QScalar, ctx: &RingContext<'_>) -> RingValue {
    match ctx {
        RingContext::Matrix(alg) => RingValue::Matrix(alg.scalar(c)),
        RingContext::Grass(alg) => RingValue::Grass(alg.u_power(0).scaled(&c)),
        RingContext::T(d) => RingValue::T(d.one().scaled(&c)),
        RingContext::Scalar => RingValue::Scalar(c),
    }
}

fn neg_value(v: &RingValue) -> RingValue {
    let minus_one = QScalar::from_int(-1);
    match v {
        RingValue::Matrix(p) => RingValue::Matrix(p.scaled(&minus_one)),
        RingValue::Grass(l) => RingValue::Grass(l.scaled(&minus_one)),
        RingValue::T(t) => RingValue::T(t.scaled(&minus_one)),
        RingValue::Scalar(s) => RingValue::Scalar(-s),
    }
}

fn add_values(
    a: &RingValue,
    b: &RingValue,
    _ctx: &RingContext<'_>,
    pos: Pos,
) -> Result<RingValue, ParseError> {
    match (a, b) {
        (RingValue::Matrix(x), RingValue::Matrix(y)) => Ok(RingValue::Matrix(x + y)),
        (RingValue::Grass(x), RingValue::Grass(y)) => Ok(RingValue::Grass(x.add(y))),
        (RingValue::T(x), RingValue::T(y)) => Ok(RingValue::T(x.add(y))),
        (RingValue::Scalar(x), RingValue::Scalar(y)) => Ok(RingValue::Scalar(x + y)),
        _ => err(pos, "mixed-ring addition"),
    }
}

fn mul_values(
    a: &RingValue,
    b: &RingValue,
    ctx: &RingContext<'_>,
    pos: Pos,
) -> Result<RingValue, ParseError> {
    match (a, b, ctx) {
        (RingValue::Matrix(x), RingValue::Matrix(y), RingContext::Matrix(alg)) => alg
            .mul(x, y)
            .map(RingValue::Matrix)
            .map_err(|e| ParseError {
                pos,
                message: e.to_string(),
            }),
        (RingValue::Grass(x), RingValue::Grass(y), RingContext::Grass(alg)) => {
            Ok(RingValue::Grass(alg.loc_mul(x, y)))
        }
        (RingValue::T(x), RingValue::T(y), RingContext::T(d)) => Ok(RingValue::T(d.t_mul(x, y))),
        (RingValue::Scalar(x), RingValue::Scalar(y), _) => Ok(RingValue::Scalar(x * y)),
        _ => err(pos, "mixed-ring multiplication"),
    }
}

/// Extract a scalar from a value that is a scalar multiple of the unit.
fn as_invertible_scalar(v: &RingValue, pos: Pos) -> Result<QScalar, ParseError> {
    let c = match v {
        RingValue::Scalar(s) => Some(s.clone()),
        RingValue::Matrix(p) => {
            let mut terms = p.terms();
            match (terms.next(), terms.next()) {
                (Some((m, c)), None) if m.is_unit() => Some(c.clone()),
                _ => None,
            }
        }
        RingValue::Grass(l) => {
            let mut terms = l.terms();
            match (terms.next(), terms.next()) {
                (Some(((w, 0), c)), None) if w.is_empty() => Some(c.clone()),
                _ => None,
            }
        }
        RingValue::T(t) => {
            let mut terms = t.terms();
            match (terms.next(), terms.next()) {
                (Some(((m, 0), c)), None) if m.is_unit() => Some(c.clone()),
                _ => None,
            }
        }
    };
    match c {
        Some(c) if !c.is_zero() => Ok(c),
        Some(_) => err(pos, "division by zero"),
        None => err(pos, "division is only defined by nonzero scalars"),
    }
}

fn pow_value(
    v: &RingValue,
    e: i64,
    ctx: &RingContext<'_>,
    pos: Pos,
) -> Result<RingValue, ParseError> {
    if e >= 0 {
        let mut acc = scalar_value(QScalar::one(), ctx);
        for _ in 0..e {
            acc = mul_values(&acc, v, ctx, pos)?;
        }
        return Ok(acc);
    }
    // Negative exponents: invertible scalars, u-powers and y-powers only.
    match v {
        RingValue::Grass(l) => {
            let mut terms = l.terms();
            if let (Some(((w, up), c)), None) = (terms.next(), terms.next()) {
                if w.is_empty() && !c.is_zero() {
                    // (c u^a)^e = c^e u^(a e): u-powers commute among
                    // themselves, so no q-twist appears.
                    let mut exact = LocalizedElement::zero();
                    exact.add_term(PluckerWord::empty(), up * e, c.pow(e).unwrap());
                    return Ok(RingValue::Grass(exact));
                }
            }
            err(pos, "only scalar multiples of u-powers are invertible here")
        }
        RingValue::T(t) => {
            let mut terms = t.terms();
            if let (Some(((m, yp), c)), None) = (terms.next(), terms.next()) {
                if m.is_unit() && !c.is_zero() {
                    let mut out = TElement::zero();
                    out.add_term(m.clone(), yp * e, c.pow(e).unwrap());
                    return Ok(RingValue::T(out));
                }
            }
            err(pos, "only scalar multiples of y-powers are invertible here")
        }
        _ => {
            let c = as_invertible_scalar(v, pos)?;
            let powed = c.pow(e).map_err(|er| ParseError {
                pos,
                message: er.to_string(),
            })?;
            Ok(scalar_value(powed, ctx))
        }
    }
}

/// Parse and evaluate in one step.
pub fn parse_expr(text: &str, ctx: &RingContext<'_>) -> Result<RingValue, ParseError> {
    let ast = parse(text)?;
    eval(&ast, ctx)
}

/// Parse a bare formal Plucker word: juxtaposed (or `*`-joined) brackets.
/// Used where the word structure matters, e.g. straightening input.
pub fn parse_plucker_word(text: &str, alg: &GrassAlgebra) -> Result<PluckerWord, ParseError> {
    let ast = parse(text)?;
    let mut letters = Vec::new();
    fn collect(
        e: &Expr,
        alg: &GrassAlgebra,
        letters: &mut Vec<PluckerIndex>,
    ) -> Result<(), ParseError> {
        match e {
            Expr::Mul(a, b) => {
                collect(a, alg, letters)?;
                collect(b, alg, letters)
            }
            Expr::Plucker { cols, pos } => {
                letters.push(plucker_from_entries(cols, alg, *pos)?);
                Ok(())
            }
            Expr::U(_) => {
                letters.push(alg.u_index());
                Ok(())
            }
            other => err(
                other.pos(),
                "expected a product of Plucker brackets".to_string(),
            ),
        }
    }
    collect(&ast, alg, &mut letters)?;
    Ok(PluckerWord::new(letters))
}
