//! Running directives and serialising the results.

use std::fmt::Write as _;
use std::time::Instant;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::checks::{Ctx, Rank, Registry, Verdict};
use crate::model::{print_tuple, CheckDirective, Expect, Model, PointEntry};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    GenericPass,
    Fail,
    Error,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::GenericPass => "generic-pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Error => "error",
        }
    }

    pub fn is_ok(self) -> bool {
        matches!(self, CheckStatus::Pass | CheckStatus::GenericPass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub kind: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<String>,
    #[serde(skip_serializing_if = "IndexMap::is_empty")]
    pub ranks: IndexMap<String, Rank>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub model: String,
    pub checks: Vec<Record>,
}

impl Report {
    pub fn new(model: &str, checks: Vec<Record>) -> Self {
        Report {
            tool_version: TOOL_VERSION.to_string(),
            model: model.to_string(),
            checks,
        }
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|r| r.status.is_ok())
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Replaces every directive's `at`.
    pub at: Option<Vec<PointEntry>>,
    /// Replaces every directive's `max`.
    pub max_flag: Option<usize>,
    pub timing: bool,
}

fn expect_text(e: &Expect) -> String {
    match e {
        Expect::Pass => "pass".into(),
        Expect::GenericPass => "generic-pass".into(),
        Expect::Fail(None) => "fail".into(),
        Expect::Fail(Some(c)) => format!("fail {c}"),
        Expect::Error(code) => format!("error {code}"),
        Expect::Growth(g) => format!("growth {}", print_tuple(g)),
    }
}

fn observed_text(e: &Expect, r: &Record) -> String {
    if let (Expect::Growth(_), Some(Rank::Many(g))) = (e, r.ranks.get("growth")) {
        return format!("growth {}", print_tuple(g));
    }
    match (r.status, r.condition, &r.error) {
        (CheckStatus::Error, _, Some(e)) => format!("error {}", e.code),
        (CheckStatus::Fail, Some(c), _) => format!("fail {c}"),
        (s, _, _) => s.as_str().to_string(),
    }
}

fn matches(e: &Expect, r: &Record) -> bool {
    match e {
        Expect::Pass => r.status == CheckStatus::Pass,
        Expect::GenericPass => r.status == CheckStatus::GenericPass,
        Expect::Fail(None) => r.status == CheckStatus::Fail,
        Expect::Fail(c) => r.status == CheckStatus::Fail && r.condition == *c,
        Expect::Error(code) => r.error.as_ref().is_some_and(|x| &x.code == code),
        Expect::Growth(g) => r.status.is_ok() && r.ranks.get("growth") == Some(&Rank::Many(g.clone())),
    }
}

pub fn run_directive(model: &Model, d: &CheckDirective, registry: &Registry, opts: &RunOptions) -> Record {
    let start = Instant::now();
    let mut rec = Record {
        name: d.record_name(),
        kind: d.kind.clone(),
        status: CheckStatus::Error,
        condition: None,
        expected: None,
        observed: None,
        ranks: IndexMap::new(),
        witnesses: Vec::new(),
        error: None,
        elapsed_ms: None,
    };
    let result = match registry.get(&d.kind) {
        None => Err(kontakt_core::Error::Unsupported(format!("check kind {}", d.kind))),
        Some(kind) => kind.run(&Ctx {
            model,
            directive: d,
            at: opts.at.as_deref().or(d.at.as_deref()),
            max: opts.max_flag.or(d.max),
        }),
    };
    match result {
        Ok(o) => {
            rec.status = match o.verdict {
                Verdict::Pass => CheckStatus::Pass,
                Verdict::GenericPass => CheckStatus::GenericPass,
                Verdict::Fail(c) => {
                    rec.condition = c;
                    CheckStatus::Fail
                }
            };
            rec.ranks = o.ranks;
            rec.witnesses = o.witnesses;
        }
        Err(e) => {
            rec.error = Some(ErrorInfo {
                code: e.code().to_string(),
                message: e.to_string(),
            });
        }
    }
    if let Some(e) = &d.expect {
        let hit = matches(e, &rec);
        rec.expected = Some(expect_text(e));
        rec.observed = Some(observed_text(e, &rec));
        rec.status = if hit { CheckStatus::Pass } else { CheckStatus::Fail };
    }
    if opts.timing {
        rec.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    rec
}

/// One record per directive, in file order.
pub fn run_model(model: &Model, registry: &Registry, opts: &RunOptions) -> Report {
    let directives: Vec<&CheckDirective> = model.checks().collect();
    let records = directives
        .par_iter()
        .map(|d| run_directive(model, d, registry, opts))
        .collect();
    Report::new(&model.name, records)
}

pub fn emit_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serialises");
    s.push('\n');
    s
}

fn detail(r: &Record) -> String {
    let mut parts = Vec::new();
    if let Some(e) = &r.error {
        parts.push(e.code.clone());
    }
    if let Some(c) = r.condition {
        parts.push(format!("condition {c}"));
    }
    if let (Some(e), Some(o)) = (&r.expected, &r.observed) {
        parts.push(format!("expected {e}, observed {o}"));
    }
    for (k, v) in &r.ranks {
        match v {
            Rank::One(n) => parts.push(format!("{k}={n}")),
            Rank::Many(ns) => {
                let ns: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                parts.push(format!("{k}=({})", ns.join(",")));
            }
        }
    }
    parts.join("; ")
}

/// Aligned NAME / KIND / STATUS / DETAIL table.
pub fn emit_text(r: &Report) -> String {
    let rows: Vec<[String; 4]> = r
        .checks
        .iter()
        .map(|c| [c.name.clone(), c.kind.clone(), c.status.as_str().to_string(), detail(c)])
        .collect();
    let header = ["NAME", "KIND", "STATUS", "DETAIL"].map(String::from);
    let mut w = [0usize; 3];
    for row in std::iter::once(&header).chain(&rows) {
        for (i, cell) in row.iter().take(3).enumerate() {
            w[i] = w[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "model {} (kontakt {})", r.model, r.tool_version);
    for row in std::iter::once(&header).chain(&rows) {
        let line = format!("{:w0$}  {:w1$}  {:w2$}  {}", row[0], row[1], row[2], row[3], w0 = w[0], w1 = w[1], w2 = w[2]);
        out.push_str(line.trim_end());
        out.push('\n');
    }
    let ok = r.checks.iter().filter(|c| c.status.is_ok()).count();
    let _ = writeln!(out, "{ok}/{} ok", r.checks.len());
    out
}
