//! Line-oriented model files: charts, fields, forms, distributions, Lie algebras and
//! check directives.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;

use kontakt_core::dist::{kernel_of_one_form, Distribution};
use kontakt_core::expr::Scalar;
use kontakt_core::geom::{Chart, ChartRef, Form, GenKind, VectorField};
use kontakt_core::jet::{build_jet_chart_named, JetChart};
use kontakt_core::liegroup::LieAlgebraData;
use kontakt_core::parse::{parse_expr, parse_form, parse_vector_field, ParseError};

use crate::checks::{ArgKind, Registry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelError {
    pub line: usize,
    pub col: usize,
    pub code: &'static str,
    pub msg: String,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.col, self.code, self.msg)
    }
}

impl std::error::Error for ModelError {}

type MResult<T> = Result<T, ModelError>;

#[derive(Clone, Debug)]
pub struct JetDecl {
    pub name: String,
    pub jet: Arc<JetChart>,
}

impl PartialEq for JetDecl {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name && self.jet.chart == o.jet.chart && (self.jet.m, self.jet.k) == (o.jet.m, o.jet.k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DistSource {
    Fields(Vec<String>),
    Kernel(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointEntry {
    pub name: Option<String>,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expect {
    Pass,
    GenericPass,
    Fail(Option<u8>),
    Error(String),
    Growth(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckDirective {
    pub kind: String,
    pub args: Vec<String>,
    pub max: Option<usize>,
    pub at: Option<Vec<PointEntry>>,
    pub expect: Option<Expect>,
}

impl CheckDirective {
    /// Kind followed by its arguments.
    pub fn label(&self) -> String {
        let mut s = self.kind.clone();
        for a in &self.args {
            s.push(' ');
            s.push_str(a);
        }
        s
    }

    /// Record name: the label plus `max` and `at`, so records stay distinguishable.
    pub fn record_name(&self) -> String {
        let mut s = self.label();
        if let Some(n) = self.max {
            let _ = write!(s, " max {n}");
        }
        if let Some(p) = &self.at {
            let _ = write!(s, " at {}", print_point(p));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Chart(ChartRef),
    Jet(JetDecl),
    Field { name: String, value: VectorField },
    Form { name: String, value: Form },
    Dist { name: String, source: DistSource, value: Distribution },
    Algebra(LieAlgebraData),
    Check(CheckDirective),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Model {
    pub name: String,
    pub items: Vec<Item>,
}

impl Model {
    pub fn charts(&self) -> impl Iterator<Item = &ChartRef> {
        self.items.iter().filter_map(|i| match i {
            Item::Chart(c) => Some(c),
            Item::Jet(j) => Some(&j.jet.chart),
            _ => None,
        })
    }

    pub fn field(&self, name: &str) -> Option<&VectorField> {
        self.items.iter().find_map(|i| match i {
            Item::Field { name: n, value } if n == name => Some(value),
            _ => None,
        })
    }

    pub fn form(&self, name: &str) -> Option<&Form> {
        self.items.iter().find_map(|i| match i {
            Item::Form { name: n, value } if n == name => Some(value),
            _ => None,
        })
    }

    pub fn dist(&self, name: &str) -> Option<&Distribution> {
        self.items.iter().find_map(|i| match i {
            Item::Dist { name: n, value, .. } if n == name => Some(value),
            _ => None,
        })
    }

    pub fn algebra(&self, name: &str) -> Option<&LieAlgebraData> {
        self.items.iter().find_map(|i| match i {
            Item::Algebra(a) if a.name == name => Some(a),
            _ => None,
        })
    }

    /// Jet declaration whose chart carries `chart`.
    pub fn jet_for(&self, chart: &ChartRef) -> Option<&JetChart> {
        self.items.iter().find_map(|i| match i {
            Item::Jet(j) if &j.jet.chart == chart => Some(j.jet.as_ref()),
            _ => None,
        })
    }

    pub fn checks(&self) -> impl Iterator<Item = &CheckDirective> {
        self.items.iter().filter_map(|i| match i {
            Item::Check(c) => Some(c),
            _ => None,
        })
    }

    pub fn count(&self) -> ModelCounts {
        let mut n = ModelCounts::default();
        for i in &self.items {
            match i {
                Item::Chart(_) | Item::Jet(_) => n.charts += 1,
                Item::Field { .. } => n.fields += 1,
                Item::Form { .. } => n.forms += 1,
                Item::Dist { .. } => n.dists += 1,
                Item::Algebra(_) => n.algebras += 1,
                Item::Check(_) => n.checks += 1,
            }
        }
        n
    }

    fn declared(&self, name: &str) -> Option<ArgKind> {
        self.items.iter().find_map(|i| match i {
            Item::Field { name: n, .. } if n == name => Some(ArgKind::Field),
            Item::Form { name: n, .. } if n == name => Some(ArgKind::Form),
            Item::Dist { name: n, .. } if n == name => Some(ArgKind::Dist),
            Item::Algebra(a) if a.name == name => Some(ArgKind::Algebra),
            Item::Chart(c) if c.name() == name => Some(ArgKind::Chart),
            Item::Jet(j) if j.name == name => Some(ArgKind::Chart),
            _ => None,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ModelCounts {
    pub charts: usize,
    pub fields: usize,
    pub forms: usize,
    pub dists: usize,
    pub algebras: usize,
    pub checks: usize,
}

/// Byte cursor over one line; columns are reported 1-based in characters.
struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn col_at(&self, pos: usize) -> usize {
        self.text[..pos].chars().count() + 1
    }

    fn error<T>(&self, code: &'static str, msg: impl Into<String>) -> MResult<T> {
        self.error_at(self.pos, code, msg)
    }

    fn error_at<T>(&self, pos: usize, code: &'static str, msg: impl Into<String>) -> MResult<T> {
        Err(ModelError {
            line: self.line,
            col: self.col_at(pos),
            code,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> MResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error("SyntaxError", format!("expected '{c}'"))
        }
    }

    /// Identifier made of letters, digits, '_' and '-' (not leading).
    fn word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let mut end = 0;
        for (i, ch) in rest.char_indices() {
            let ok = ch.is_alphanumeric() || ch == '_' || (i > 0 && ch == '-');
            if !ok {
                break;
            }
            end = i + ch.len_utf8();
        }
        if end == 0 {
            return None;
        }
        self.pos += end;
        Some(&rest[..end])
    }

    fn ident(&mut self, what: &str) -> MResult<&'a str> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.word() {
            Some(w) if !w.chars().next().unwrap().is_ascii_digit() => Ok(w),
            _ => self.error_at(start, "SyntaxError", format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> MResult<()> {
        self.skip_ws();
        let start = self.pos;
        match self.word() {
            Some(w) if w == kw => Ok(()),
            _ => self.error_at(start, "SyntaxError", format!("expected '{kw}'")),
        }
    }

    fn int(&mut self) -> MResult<usize> {
        self.skip_ws();
        let start = self.pos;
        let digits: String = self.text[self.pos..].chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return self.error("SyntaxError", "expected an integer");
        }
        self.pos += digits.len();
        digits
            .parse()
            .or_else(|_| self.error_at(start, "SyntaxError", "integer out of range"))
    }

    fn ident_list(&mut self) -> MResult<Vec<&'a str>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.ident("a name")?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    /// Remaining text and its starting byte offset.
    fn rest(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let p = self.pos;
        self.pos = self.text.len();
        (p, &self.text[p..])
    }

    fn finish(&mut self) -> MResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.error("SyntaxError", "unexpected trailing input")
        }
    }

    fn core_error<T>(&self, offset: usize, e: ParseError) -> MResult<T> {
        Err(ModelError {
            line: self.line,
            col: self.col_at(offset) + e.col - 1,
            code: e.kind.code(),
            msg: e.msg,
        })
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn const_chart() -> ChartRef {
    Chart::new("const", &["_"]).expect("single coordinate")
}

struct Builder<'r> {
    registry: &'r Registry,
    model: Model,
    current: Option<ChartRef>,
    /// Index of the current chart item and whether anything was declared on it yet.
    chart_item: Option<(usize, bool)>,
}

pub fn parse_model(text: &str, name: &str, registry: &Registry) -> MResult<Model> {
    let mut b = Builder {
        registry,
        model: Model {
            name: name.to_string(),
            items: Vec::new(),
        },
        current: None,
        chart_item: None,
    };
    let mut lines = text.lines().enumerate();
    while let Some((i, raw)) = lines.next() {
        let mut cur = Cursor {
            text: strip_comment(raw),
            pos: 0,
            line: i + 1,
        };
        if cur.at_end() {
            continue;
        }
        let start = cur.pos;
        let Some(kw) = cur.word() else {
            return cur.error("SyntaxError", "expected a statement keyword");
        };
        match kw {
            "chart" => b.chart(&mut cur)?,
            "trans" => b.trans(&mut cur)?,
            "jet" => b.jet(&mut cur)?,
            "vf" => b.field(&mut cur)?,
            "form" => b.form(&mut cur)?,
            "dist" => b.dist(&mut cur)?,
            "algebra" => b.algebra(&mut cur, &mut lines)?,
            "check" => b.check(&mut cur)?,
            _ => return cur.error_at(start, "SyntaxError", format!("unknown statement '{kw}'")),
        }
    }
    Ok(b.model)
}

impl Builder<'_> {
    fn claim(&self, cur: &Cursor, pos: usize, name: &str) -> MResult<()> {
        if self.model.declared(name).is_some() {
            return cur.error_at(pos, "DuplicateName", format!("{name} is already declared"));
        }
        Ok(())
    }

    fn chart_ref(&mut self, cur: &Cursor) -> MResult<ChartRef> {
        match &self.current {
            Some(c) => {
                if let Some((_, used)) = &mut self.chart_item {
                    *used = true;
                }
                Ok(c.clone())
            }
            None => cur.error("UnknownIdentifier", "no chart declared yet"),
        }
    }

    fn chart(&mut self, cur: &mut Cursor) -> MResult<()> {
        cur.skip_ws();
        let p = cur.pos;
        let name = cur.ident("a chart name")?;
        self.claim(cur, p, name)?;
        cur.keyword("coords")?;
        let lp = {
            cur.skip_ws();
            cur.pos
        };
        let coords = cur.ident_list()?;
        cur.finish()?;
        let chart = Chart::new(name, &coords).or_else(|e| cur.error_at(lp, e.code(), e.to_string()))?;
        self.current = Some(chart.clone());
        self.chart_item = Some((self.model.items.len(), false));
        self.model.items.push(Item::Chart(chart));
        Ok(())
    }

    fn trans(&mut self, cur: &mut Cursor) -> MResult<()> {
        cur.skip_ws();
        let p = cur.pos;
        let kind = match cur.word() {
            Some("sin") => GenKind::Sin,
            Some("cos") => GenKind::Cos,
            Some("exp") => GenKind::Exp,
            _ => return cur.error_at(p, "SyntaxError", "expected sin, cos or exp"),
        };
        cur.expect('(')?;
        cur.skip_ws();
        let cp = cur.pos;
        let coord = cur.ident("a coordinate")?;
        cur.expect(')')?;
        cur.finish()?;
        let (idx, used) = match self.chart_item {
            Some((i, used)) if matches!(self.model.items[i], Item::Chart(_)) => (i, used),
            _ => return cur.error_at(p, "SyntaxError", "trans must follow a chart statement"),
        };
        if used {
            return cur.error_at(p, "SyntaxError", "trans must precede the objects declared on its chart");
        }
        let Item::Chart(chart) = &self.model.items[idx] else { unreachable!() };
        let ci = chart
            .index_of(coord)
            .or_else(|_| cur.error_at(cp, "UnknownCoordinate", format!("unknown coordinate {coord}")))?;
        let next = chart.with_gen(kind, ci).or_else(|e| cur.error_at(cp, e.code(), e.to_string()))?;
        self.current = Some(next.clone());
        self.model.items[idx] = Item::Chart(next);
        Ok(())
    }

    fn jet(&mut self, cur: &mut Cursor) -> MResult<()> {
        cur.skip_ws();
        let p = cur.pos;
        let name = cur.ident("a jet chart name")?;
        self.claim(cur, p, name)?;
        cur.keyword("base")?;
        let base: Vec<String> = cur.ident_list()?.iter().map(|s| s.to_string()).collect();
        cur.keyword("fibre")?;
        let fibre: Vec<String> = cur.ident_list()?.iter().map(|s| s.to_string()).collect();
        let derivs: Vec<String> = if cur.at_end() {
            fibre.iter().flat_map(|y| base.iter().map(move |x| format!("{y}_{x}"))).collect()
        } else {
            cur.keyword("derivs")?;
            cur.skip_ws();
            let dp = cur.pos;
            let d: Vec<String> = cur.ident_list()?.iter().map(|s| s.to_string()).collect();
            if d.len() != base.len() * fibre.len() {
                return cur.error_at(
                    dp,
                    "ArityMismatch",
                    format!("expected {} derivative coordinates, found {}", base.len() * fibre.len(), d.len()),
                );
            }
            d
        };
        cur.finish()?;
        let m = base.len();
        let jet = build_jet_chart_named(name, &base, &fibre, |a, i| derivs[a * m + i].clone())
            .or_else(|e| cur.error_at(p, e.code(), e.to_string()))?;
        self.current = Some(jet.chart.clone());
        self.chart_item = Some((self.model.items.len(), false));
        self.model.items.push(Item::Jet(JetDecl {
            name: name.to_string(),
            jet: Arc::new(jet),
        }));
        Ok(())
    }

    fn field(&mut self, cur: &mut Cursor) -> MResult<()> {
        cur.skip_ws();
        let p = cur.pos;
        let name = cur.ident("a field name")?;
        self.claim(cur, p, name)?;
        cur.expect('=')?;
        let chart = self.chart_ref(cur)?;
        let (off, src) = cur.rest();
        let value = parse_vector_field(src, &chart).or_else(|e| cur.core_error(off, e))?;
        self.model.items.push(Item::Field {
            name: name.to_string(),
            value,
        });
        Ok(())
    }

    fn form(&mut self, cur: &mut Cursor) -> MResult<()> {
        cur.skip_ws();
        let p = cur.pos;
        let name = cur.ident("a form name")?;
        self.claim(cur, p, name)?;
        let channels = if cur.peek() == Some('=') {
            None
        } else {
            cur.keyword("channels")?;
            Some(cur.int()?)
        };
        cur.expect('=')?;
        let chart = self.chart_ref(cur)?;
        let (off, src) = cur.rest();
        let value = parse_form(src, &chart, channels).or_else(|e| cur.core_error(off, e))?;
        self.model.items.push(Item::Form {
            name: name.to_string(),
            value,
        });
        Ok(())
    }

    fn dist(&mut self, cur: &mut Cursor) -> MResult<()> {
        cur.skip_ws();
        let p = cur.pos;
        let name = cur.ident("a distribution name")?;
        self.claim(cur, p, name)?;
        cur.expect('=')?;
        let chart = self.chart_ref(cur)?;
        cur.skip_ws();
        let sp = cur.pos;
        let (source, value) = if cur.peek() == Some('[') {
            let list_start = cur.pos;
            let names = cur.ident_list()?;
            let mut gens = Vec::new();
            for n in &names {
                let pos = list_start + cur.text[list_start..].find(n).unwrap_or(0);
                let f = self
                    .model
                    .field(n)
                    .ok_or(())
                    .or_else(|_| cur.error_at(pos, "UnknownIdentifier", format!("unknown vector field {n}")))?;
                if f.chart() != &chart {
                    return cur.error_at(pos, "ChartMismatch", format!("{n} lives on another chart"));
                }
                gens.push(f.clone());
            }
            let d = Distribution::new(&chart, gens).or_else(|e| cur.error_at(sp, e.code(), e.to_string()))?;
            (DistSource::Fields(names.iter().map(|s| s.to_string()).collect()), d)
        } else {
            cur.keyword("ker")?;
            cur.skip_ws();
            let fp = cur.pos;
            let f = cur.ident("a form name")?;
            let form = self
                .model
                .form(f)
                .ok_or(())
                .or_else(|_| cur.error_at(fp, "UnknownIdentifier", format!("unknown form {f}")))?;
            let d = kernel_of_one_form(form).or_else(|e| cur.error_at(fp, e.code(), e.to_string()))?;
            (DistSource::Kernel(f.to_string()), d)
        };
        cur.finish()?;
        self.model.items.push(Item::Dist {
            name: name.to_string(),
            source,
            value,
        });
        Ok(())
    }

    fn algebra<'t, I: Iterator<Item = (usize, &'t str)>>(&mut self, cur: &mut Cursor, lines: &mut I) -> MResult<()> {
        cur.skip_ws();
        let p = cur.pos;
        let name = cur.ident("an algebra name")?;
        self.claim(cur, p, name)?;
        cur.keyword("dim")?;
        let dim = cur.int()?;
        if dim == 0 {
            return cur.error_at(p, "InvalidChart", "algebra dimension must be positive");
        }
        cur.expect('{')?;
        let mut alg = LieAlgebraData::new(name, dim);
        let konst = const_chart();
        if cur.eat('}') {
            cur.finish()?;
            self.model.items.push(Item::Algebra(alg));
            return Ok(());
        }
        cur.finish()?;
        loop {
            let Some((i, raw)) = lines.next() else {
                return cur.error("SyntaxError", format!("unterminated algebra block {name}"));
            };
            let mut c = Cursor {
                text: strip_comment(raw),
                pos: 0,
                line: i + 1,
            };
            if c.at_end() {
                continue;
            }
            if c.eat('}') {
                c.finish()?;
                break;
            }
            c.keyword("c")?;
            c.expect('[')?;
            let mut idx = [0usize; 3];
            for slot in &mut idx {
                c.skip_ws();
                let ip = c.pos;
                let v = c.int()?;
                if v == 0 || v > dim {
                    return c.error_at(ip, "UnknownIdentifier", format!("index {v} outside 1..={dim}"));
                }
                *slot = v - 1;
            }
            c.expect(']')?;
            c.expect('=')?;
            let (off, src) = c.rest();
            let e = parse_expr(src, &konst).or_else(|e| c.core_error(off, e))?;
            let Some(v) = e.as_constant() else {
                return c.error_at(off, "TypeError", "structure constants must be constants");
            };
            if idx[0] == idx[1] && !v.is_zero() {
                return c.error_at(off, "TypeError", "c[a a g] must vanish");
            }
            alg.set(idx[0], idx[1], idx[2], v);
        }
        self.model.items.push(Item::Algebra(alg));
        Ok(())
    }

    fn check(&mut self, cur: &mut Cursor) -> MResult<()> {
        cur.skip_ws();
        let kp = cur.pos;
        let kind = cur.ident("a check kind")?;
        let Some(k) = self.registry.get(kind) else {
            return cur.error_at(kp, "UnknownIdentifier", format!("unknown check kind {kind}"));
        };
        let sig = k.signature();
        let mut args = Vec::new();
        let mut positions = Vec::new();
        let options = ["max", "at", "expect"];
        loop {
            cur.skip_ws();
            let ap = cur.pos;
            let save = cur.pos;
            match cur.word() {
                Some(w) if options.contains(&w) => {
                    cur.pos = save;
                    break;
                }
                Some(w) => {
                    args.push(w.to_string());
                    positions.push(ap);
                }
                None => break,
            }
        }
        let (min, max) = sig.arity();
        if args.len() < min || max.is_some_and(|m| args.len() > m) {
            let want = match max {
                Some(m) if m == min => format!("{min}"),
                Some(m) => format!("{min} to {m}"),
                None => format!("at least {min}"),
            };
            let at = positions.get(max.unwrap_or(usize::MAX)).copied().unwrap_or(cur.pos);
            return cur.error_at(
                at,
                "ArityMismatch",
                format!("{kind} takes {want} arguments, found {}", args.len()),
            );
        }
        for (i, (a, &pos)) in args.iter().zip(&positions).enumerate() {
            let want = sig.kind_at(i);
            if want == ArgKind::Index {
                if a.parse::<usize>().map_or(true, |v| v == 0) {
                    return cur.error_at(pos, "TypeError", format!("expected a positive index, found {a}"));
                }
                continue;
            }
            match self.model.declared(a) {
                None => return cur.error_at(pos, "UnknownIdentifier", format!("unknown identifier {a}")),
                Some(got) if got != want => {
                    return cur.error_at(pos, "TypeError", format!("{a} is a {}, expected a {}", got.noun(), want.noun()))
                }
                _ => {}
            }
        }
        let mut d = CheckDirective {
            kind: kind.to_string(),
            args,
            max: None,
            at: None,
            expect: None,
        };
        while !cur.at_end() {
            let op = cur.pos;
            match cur.word() {
                Some("max") if d.max.is_none() => d.max = Some(cur.int()?),
                Some("at") if d.at.is_none() => d.at = Some(parse_point_cursor(cur)?),
                Some("expect") if d.expect.is_none() => d.expect = Some(parse_expect(cur)?),
                _ => return cur.error_at(op, "SyntaxError", "expected max, at or expect"),
            }
        }
        self.model.items.push(Item::Check(d));
        Ok(())
    }
}

fn parse_expect(cur: &mut Cursor) -> MResult<Expect> {
    cur.skip_ws();
    let p = cur.pos;
    match cur.word() {
        Some("pass") => Ok(Expect::Pass),
        Some("generic-pass") => Ok(Expect::GenericPass),
        Some("fail") => {
            if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                let c = cur.int()?;
                if !(1..=3).contains(&c) {
                    return cur.error_at(p, "SyntaxError", "condition ids are 1, 2 or 3");
                }
                Ok(Expect::Fail(Some(c as u8)))
            } else {
                Ok(Expect::Fail(None))
            }
        }
        Some("error") => Ok(Expect::Error(cur.ident("an error code")?.to_string())),
        Some("growth") => {
            cur.expect('(')?;
            let mut v = vec![cur.int()?];
            while cur.eat(',') {
                v.push(cur.int()?);
            }
            cur.expect(')')?;
            Ok(Expect::Growth(v))
        }
        _ => cur.error_at(p, "SyntaxError", "expected pass, generic-pass, fail, error or growth"),
    }
}

fn parse_point_cursor(cur: &mut Cursor) -> MResult<Vec<PointEntry>> {
    cur.expect('(')?;
    cur.skip_ws();
    let start = cur.pos;
    let Some(len) = cur.text[start..].find(')') else {
        return cur.error("SyntaxError", "expected ')'");
    };
    let body = &cur.text[start..start + len];
    let out = parse_point(body).map_err(|(off, msg)| ModelError {
        line: cur.line,
        col: cur.col_at(start + off),
        code: "SyntaxError",
        msg,
    })?;
    cur.pos = start + len + 1;
    Ok(out)
}

/// `0, 1/2, -3` or `x=0, t=1/2`; errors carry a byte offset into `src`.
pub fn parse_point(src: &str) -> Result<Vec<PointEntry>, (usize, String)> {
    let mut out = Vec::new();
    let mut off = 0;
    for part in src.split(',') {
        let lead = part.len() - part.trim_start().len();
        let t = part.trim();
        let (name, val) = match t.split_once('=') {
            Some((n, v)) => (Some(n.trim().to_string()), v.trim()),
            None => (None, t),
        };
        if name.as_deref() == Some("") {
            return Err((off + lead, "expected a coordinate name before '='".into()));
        }
        let value = BigRational::from_str(val).map_err(|_| (off + lead, format!("expected a rational number, found '{val}'")))?;
        out.push(PointEntry { name, value });
        off += part.len() + 1;
    }
    let named = out.iter().filter(|e| e.name.is_some()).count();
    if named != 0 && named != out.len() {
        return Err((0, "mix of named and positional coordinates".into()));
    }
    Ok(out)
}

/// Coordinates for `chart`; named entries leave the others at 0.
pub fn resolve_point(entries: &[PointEntry], chart: &Chart) -> Result<Vec<BigRational>, String> {
    let zero = BigRational::from_integer(0.into());
    if entries.iter().all(|e| e.name.is_none()) {
        if entries.len() != chart.dim() {
            return Err(format!("point has {} coordinates, chart {} has {}", entries.len(), chart.name(), chart.dim()));
        }
        return Ok(entries.iter().map(|e| e.value.clone()).collect());
    }
    let mut p = vec![zero; chart.dim()];
    for e in entries {
        let n = e.name.as_deref().unwrap_or_default();
        let i = chart.index_of(n).map_err(|_| format!("unknown coordinate {n}"))?;
        p[i] = e.value.clone();
    }
    Ok(p)
}

fn render_scalar(s: &Scalar) -> String {
    let t = s.to_string();
    if t.contains(' ') {
        format!("({t})")
    } else {
        t
    }
}

pub fn print_tuple(v: &[usize]) -> String {
    let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", v.join(", "))
}

fn print_point(p: &[PointEntry]) -> String {
    let parts: Vec<String> = p
        .iter()
        .map(|e| match &e.name {
            Some(n) => format!("{n}={}", e.value),
            None => e.value.to_string(),
        })
        .collect();
    format!("({})", parts.join(", "))
}

/// Canonical text; parsing it yields a structurally equal model.
pub fn print_model(m: &Model) -> String {
    let mut out = String::new();
    for item in &m.items {
        match item {
            Item::Chart(c) => {
                let _ = writeln!(out, "chart {} coords [{}]", c.name(), c.coords().join(", "));
                for g in c.gens() {
                    if g.kind == GenKind::Cos {
                        continue;
                    }
                    let _ = writeln!(out, "trans {}({})", g.kind.name(), c.coord_name(g.coord));
                }
            }
            Item::Jet(j) => {
                let c = &j.jet.chart;
                let names = |ix: &mut dyn Iterator<Item = &usize>| ix.map(|&i| c.coord_name(i).to_string()).collect::<Vec<_>>().join(", ");
                let _ = writeln!(
                    out,
                    "jet {} base [{}] fibre [{}] derivs [{}]",
                    j.name,
                    names(&mut j.jet.x.iter()),
                    names(&mut j.jet.y.iter()),
                    names(&mut j.jet.yd.iter().flatten())
                );
            }
            Item::Field { name, value } => {
                let _ = writeln!(out, "vf {name} = {}", value.render());
            }
            Item::Form { name, value } => {
                let mut body = value.render();
                if value.is_zero() && value.degree() > 0 {
                    // a bare 0 would reparse as a function
                    let wedge: Vec<String> = value.chart().coords()[..value.degree()].iter().map(|c| format!("d{c}")).collect();
                    body = std::iter::once(format!("0*{}", wedge.join("^")))
                        .chain(std::iter::repeat_n("0".to_string(), value.channels() - 1))
                        .collect::<Vec<_>>()
                        .join("; ");
                }
                let _ = writeln!(out, "form {name} channels {} = {body}", value.channels());
            }
            Item::Dist { name, source, .. } => match source {
                DistSource::Fields(f) => {
                    let _ = writeln!(out, "dist {name} = [{}]", f.join(", "));
                }
                DistSource::Kernel(f) => {
                    let _ = writeln!(out, "dist {name} = ker {f}");
                }
            },
            Item::Algebra(a) => {
                let nz = a.nonzero();
                if nz.is_empty() {
                    let _ = writeln!(out, "algebra {} dim {} {{ }}", a.name, a.dim());
                    continue;
                }
                let _ = writeln!(out, "algebra {} dim {} {{", a.name, a.dim());
                for (x, y, g, v) in nz {
                    let _ = writeln!(out, "  c[{} {} {}] = {}", x + 1, y + 1, g + 1, render_scalar(&v));
                }
                out.push_str("}\n");
            }
            Item::Check(d) => {
                out.push_str("check ");
                out.push_str(&d.record_name());
                if let Some(e) = &d.expect {
                    out.push_str(" expect ");
                    match e {
                        Expect::Pass => out.push_str("pass"),
                        Expect::GenericPass => out.push_str("generic-pass"),
                        Expect::Fail(None) => out.push_str("fail"),
                        Expect::Fail(Some(c)) => {
                            let _ = write!(out, "fail {c}");
                        }
                        Expect::Error(code) => {
                            let _ = write!(out, "error {code}");
                        }
                        Expect::Growth(g) => {
                            let _ = write!(out, "growth {}", print_tuple(g));
                        }
                    }
                }
                out.push('\n');
            }
        }
    }
    out
}
