//! Surface syntax for expressions, vector fields and forms on a chart.
//!
//! Expressions: integers, `p/q`, `sqrt2`, `sqrt3`, coordinates, `sin(x)`, `cos(x)`,
//! `exp(x)`, `+ - * / ^` (integer exponents) and parentheses. Forms add `dx`
//! (coordinate differential), `d(...)` (exterior derivative) and `^` between forms
//! (wedge). Vector fields add basis symbols `d/dx`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::expr::{Scalar, ScalarExpr};
use crate::geom::{ChartRef, Form, GenKind, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    UnknownCoordinate,
    Arity,
    Type,
}

impl ParseErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "SyntaxError",
            ParseErrorKind::UnknownIdentifier => "UnknownIdentifier",
            ParseErrorKind::UnknownCoordinate => "UnknownCoordinate",
            ParseErrorKind::Arity => "ArityMismatch",
            ParseErrorKind::Type => "TypeError",
        }
    }
}

/// Error with a 1-based column inside the parsed text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}: {}", self.col, self.kind.code(), self.msg)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Basis(String),
    Op(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn err<T>(kind: ParseErrorKind, col: usize, msg: impl Into<String>) -> PResult<T> {
    Err(ParseError {
        kind,
        col,
        msg: msg.into(),
    })
}

fn lex(src: &str) -> PResult<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let ident_start = |c: char| c.is_alphabetic() || c == '_';
    let ident_char = |c: char| c.is_alphanumeric() || c == '_' || c == '\'';
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[s..i].iter().collect();
            out.push(Token {
                tok: Tok::Num(text.parse().unwrap()),
                col,
            });
        } else if c == 'd'
            && chars.get(i + 1) == Some(&'/')
            && chars.get(i + 2) == Some(&'d')
            && chars.get(i + 3).is_some_and(|&c| ident_start(c))
        {
            i += 3;
            let s = i;
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Basis(chars[s..i].iter().collect()),
                col,
            });
        } else if ident_start(c) {
            let s = i;
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[s..i].iter().collect()),
                col,
            });
        } else if "+-*/^(),;".contains(c) {
            out.push(Token { tok: Tok::Op(c), col });
            i += 1;
        } else {
            return err(ParseErrorKind::Syntax, col, format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

/// Parsed value: function, single-channel form of degree ≥ 1, or vector field.
#[derive(Clone, Debug)]
enum Val {
    Expr(ScalarExpr),
    Form(Form),
    Vector(VectorField),
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    chart: &'a ChartRef,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.end_col)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(ParseErrorKind::Syntax, self.col(), format!("expected '{c}'"))
        }
    }

    fn sum(&mut self) -> PResult<Val> {
        let mut lhs = self.product()?;
        loop {
            let col = self.col();
            if self.eat('+') {
                let rhs = self.product()?;
                lhs = add(lhs, rhs, false, col)?;
            } else if self.eat('-') {
                let rhs = self.product()?;
                lhs = add(lhs, rhs, true, col)?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> PResult<Val> {
        let mut lhs = self.unary()?;
        loop {
            let col = self.col();
            if self.eat('*') {
                let rhs = self.unary()?;
                lhs = mul(lhs, rhs, col)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let Val::Expr(d) = rhs else {
                    return err(ParseErrorKind::Type, col, "can only divide by a function");
                };
                let inv = d
                    .inv()
                    .or_else(|_| err(ParseErrorKind::Type, col, "division by zero"))?;
                lhs = mul(lhs, Val::Expr(inv), col)?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> PResult<Val> {
        let col = self.col();
        if self.eat('-') {
            let v = self.unary()?;
            return mul(Val::Expr(ScalarExpr::int(-1)), v, col);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Val> {
        let mut lhs = self.atom()?;
        loop {
            let col = self.col();
            if !self.eat('^') {
                return Ok(lhs);
            }
            let neg = matches!(
                (self.peek(), self.toks.get(self.pos + 1).map(|t| &t.tok)),
                (Some(Tok::Op('-')), Some(Tok::Num(_)))
            );
            let int_exp = neg || matches!(self.peek(), Some(Tok::Num(_)));
            if int_exp {
                if let Val::Expr(base) = &lhs {
                    if neg {
                        self.pos += 1;
                    }
                    let Some(Tok::Num(n)) = self.peek().cloned() else { unreachable!() };
                    self.pos += 1;
                    let e = n
                        .to_i32()
                        .ok_or_else(|| ParseError {
                            kind: ParseErrorKind::Syntax,
                            col,
                            msg: "exponent too large".into(),
                        })?;
                    let e = if neg { -e } else { e };
                    if e < 0 && base.is_zero() {
                        return err(ParseErrorKind::Type, col, "negative power of zero");
                    }
                    lhs = Val::Expr(base.pow(e));
                    continue;
                }
            }
            let rhs = self.atom()?;
            lhs = wedge(lhs, rhs, col)?;
        }
    }

    fn atom(&mut self) -> PResult<Val> {
        let col = self.col();
        let Some(tok) = self.peek().cloned() else {
            return err(ParseErrorKind::Syntax, col, "unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Val::Expr(ScalarExpr::rational(n.into()))),
            Tok::Op('(') => {
                let v = self.sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Op(c) => err(ParseErrorKind::Syntax, col, format!("unexpected '{c}'")),
            Tok::Basis(name) => {
                let i = self.coord_index(&name, col)?;
                Ok(Val::Vector(VectorField::basis(self.chart, i)))
            }
            Tok::Ident(name) => self.ident(name, col),
        }
    }

    fn coord_index(&self, name: &str, col: usize) -> PResult<usize> {
        self.chart.index_of(name).or_else(|_| {
            err(
                ParseErrorKind::UnknownCoordinate,
                col,
                format!("unknown coordinate '{name}'"),
            )
        })
    }

    fn ident(&mut self, name: String, col: usize) -> PResult<Val> {
        if let Ok(i) = self.chart.index_of(&name) {
            return Ok(Val::Expr(ScalarExpr::coord(i)));
        }
        match name.as_str() {
            "sqrt2" => return Ok(Val::Expr(ScalarExpr::constant(Scalar::sqrt2()))),
            "sqrt3" => return Ok(Val::Expr(ScalarExpr::constant(Scalar::sqrt3()))),
            "sin" | "cos" | "exp" => {
                let kind = match name.as_str() {
                    "sin" => GenKind::Sin,
                    "cos" => GenKind::Cos,
                    _ => GenKind::Exp,
                };
                self.expect('(')?;
                let acol = self.col();
                let arg = match self.peek().cloned() {
                    Some(Tok::Ident(a)) => {
                        self.pos += 1;
                        a
                    }
                    _ => {
                        return err(
                            ParseErrorKind::Syntax,
                            acol,
                            format!("{name}() takes a single coordinate"),
                        )
                    }
                };
                let i = self.coord_index(&arg, acol)?;
                self.expect(')')?;
                if !self.chart.has_gen(kind, i) {
                    return err(
                        ParseErrorKind::UnknownIdentifier,
                        col,
                        format!("generator {name}({arg}) is not declared"),
                    );
                }
                return Ok(Val::Expr(match kind {
                    GenKind::Sin => ScalarExpr::sin(i),
                    GenKind::Cos => ScalarExpr::cos(i),
                    GenKind::Exp => ScalarExpr::exp(i),
                }));
            }
            "d" if self.peek() == Some(&Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                return match inner {
                    Val::Expr(e) => Ok(Val::Form(Form::scalar(self.chart, e).ext_d())),
                    Val::Form(f) => Ok(Val::Form(f.ext_d())),
                    Val::Vector(_) => err(ParseErrorKind::Type, col, "d of a vector field"),
                };
            }
            _ => {}
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Ok(i) = self.chart.index_of(rest) {
                return Ok(Val::Form(Form::dx(self.chart, i)));
            }
        }
        err(
            ParseErrorKind::UnknownIdentifier,
            col,
            format!("unknown identifier '{name}'"),
        )
    }
}

fn type_err<T>(col: usize, msg: &str) -> PResult<T> {
    err(ParseErrorKind::Type, col, msg)
}

fn add(a: Val, b: Val, negate: bool, col: usize) -> PResult<Val> {
    let b = if negate {
        mul(Val::Expr(ScalarExpr::int(-1)), b, col)?
    } else {
        b
    };
    match (a, b) {
        (Val::Expr(x), Val::Expr(y)) => Ok(Val::Expr(&x + &y)),
        (Val::Form(x), Val::Form(y)) => x
            .add(&y)
            .map(Val::Form)
            .or_else(|_| type_err(col, "sum of forms of different degree")),
        (Val::Vector(x), Val::Vector(y)) => Ok(Val::Vector(x.add(&y).unwrap())),
        // A literal 0 is neutral for any kind.
        (Val::Expr(x), v) | (v, Val::Expr(x)) if x.is_zero() => Ok(v),
        _ => type_err(col, "sum of a function, form or vector field of different kinds"),
    }
}

fn mul(a: Val, b: Val, col: usize) -> PResult<Val> {
    match (a, b) {
        (Val::Expr(x), Val::Expr(y)) => Ok(Val::Expr(&x * &y)),
        (Val::Expr(x), Val::Form(f)) | (Val::Form(f), Val::Expr(x)) => Ok(Val::Form(f.scale(&x))),
        (Val::Expr(x), Val::Vector(v)) | (Val::Vector(v), Val::Expr(x)) => {
            Ok(Val::Vector(v.scale(&x)))
        }
        (Val::Form(f), Val::Form(g)) => Ok(Val::Form(f.wedge(&g).unwrap())),
        _ => type_err(col, "invalid product involving a vector field"),
    }
}

fn wedge(a: Val, b: Val, col: usize) -> PResult<Val> {
    match (a, b) {
        (Val::Form(f), Val::Form(g)) => Ok(Val::Form(f.wedge(&g).unwrap())),
        (Val::Expr(x), Val::Form(f)) | (Val::Form(f), Val::Expr(x)) => Ok(Val::Form(f.scale(&x))),
        _ => type_err(col, "'^' needs an integer exponent or a form operand"),
    }
}

fn parse_all(src: &str, chart: &ChartRef) -> PResult<Vec<(Val, usize)>> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        chart,
        end_col: src.chars().count() + 1,
    };
    let mut out = Vec::new();
    loop {
        let col = p.col();
        let v = p.sum()?;
        out.push((v, col));
        if p.eat(';') {
            continue;
        }
        if p.pos < p.toks.len() {
            return err(ParseErrorKind::Syntax, p.col(), "unexpected trailing input");
        }
        return Ok(out);
    }
}

pub fn parse_expr(src: &str, chart: &ChartRef) -> PResult<ScalarExpr> {
    let mut vals = parse_all(src, chart)?;
    if vals.len() != 1 {
        return err(ParseErrorKind::Arity, vals[1].1, "expected a single expression");
    }
    match vals.pop().unwrap() {
        (Val::Expr(e), _) => Ok(e),
        (_, col) => type_err(col, "expected a function"),
    }
}

pub fn parse_vector_field(src: &str, chart: &ChartRef) -> PResult<VectorField> {
    let mut vals = parse_all(src, chart)?;
    if vals.len() != 1 {
        return err(ParseErrorKind::Arity, vals[1].1, "expected a single vector field");
    }
    match vals.pop().unwrap() {
        (Val::Vector(v), _) => Ok(v),
        (Val::Expr(e), _) if e.is_zero() => Ok(VectorField::zero(chart)),
        (_, col) => type_err(col, "expected a vector field (terms like f*d/dx)"),
    }
}

/// Parses `channel; channel; …`. Functions are accepted as 0-form channels; a literal
/// 0 takes the degree of the other channels.
pub fn parse_form(src: &str, chart: &ChartRef, channels: Option<usize>) -> PResult<Form> {
    let vals = parse_all(src, chart)?;
    if let Some(k) = channels {
        if vals.len() != k {
            return err(
                ParseErrorKind::Arity,
                1,
                format!("declared {k} channels, found {}", vals.len()),
            );
        }
    }
    let degree = vals
        .iter()
        .find_map(|(v, _)| match v {
            Val::Form(f) => Some(f.degree()),
            Val::Expr(e) if !e.is_zero() => Some(0),
            _ => None,
        })
        .unwrap_or(0);
    let mut parts = Vec::new();
    for (v, col) in vals {
        let f = match v {
            Val::Form(f) => f,
            Val::Expr(e) if degree == 0 => Form::scalar(chart, e),
            Val::Expr(e) if e.is_zero() => Form::zero(chart, degree, 1),
            Val::Expr(_) => return type_err(col, "channel is a function among forms"),
            Val::Vector(_) => return type_err(col, "vector field in a form"),
        };
        if f.degree() != degree {
            return type_err(col, "channels of different degree");
        }
        parts.push(f);
    }
    Ok(Form::from_channels(&parts).expect("nonempty channels"))
}
