//! Example models shipped inside the binary.

use rayon::prelude::*;

use crate::checks::Registry;
use crate::model::{parse_model, Model, ModelError};
use crate::report::{run_model, CheckStatus, ErrorInfo, Record, Report, RunOptions};

pub const CORPUS: &[(&str, &str)] = &[
    ("r6", include_str!("../corpus/r6.kg")),
    ("rescaling", include_str!("../corpus/rescaling.kg")),
    ("engel", include_str!("../corpus/engel.kg")),
    ("goursat", include_str!("../corpus/goursat.kg")),
    ("counterexample", include_str!("../corpus/counterexample.kg")),
    ("car", include_str!("../corpus/car.kg")),
    ("conformal", include_str!("../corpus/conformal.kg")),
    ("canonical", include_str!("../corpus/canonical.kg")),
    ("degenerate", include_str!("../corpus/degenerate.kg")),
    ("su3", include_str!("../corpus/su3.kg")),
    ("su4", include_str!("../corpus/su4.kg")),
    ("u2", include_str!("../corpus/u2.kg")),
    ("rh3", include_str!("../corpus/rh3.kg")),
    ("hamilton_jacobi", include_str!("../corpus/hamilton_jacobi.kg")),
    ("dirac", include_str!("../corpus/dirac.kg")),
];

pub fn source(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str, registry: &Registry) -> Option<Result<Model, ModelError>> {
    source(name).map(|s| parse_model(s, name, registry))
}

/// Entries whose name contains `filter`.
pub fn select(filter: Option<&str>) -> Vec<&'static str> {
    CORPUS
        .iter()
        .map(|(n, _)| *n)
        .filter(|n| filter.map_or(true, |f| n.contains(f)))
        .collect()
}

/// Every selected entry, records prefixed with the entry name.
pub fn run(filter: Option<&str>, registry: &Registry, opts: &RunOptions) -> Report {
    let per_entry: Vec<Vec<Record>> = select(filter)
        .par_iter()
        .map(|name| match load(name, registry).expect("selected from the corpus") {
            Ok(m) => run_model(&m, registry, opts)
                .checks
                .into_iter()
                .map(|mut r| {
                    r.name = format!("{name}: {}", r.name);
                    r
                })
                .collect(),
            Err(e) => vec![Record {
                name: format!("{name}: parse"),
                kind: "parse".into(),
                status: CheckStatus::Error,
                condition: None,
                expected: None,
                observed: None,
                ranks: Default::default(),
                witnesses: Vec::new(),
                error: Some(ErrorInfo {
                    code: e.code.to_string(),
                    message: e.to_string(),
                }),
                elapsed_ms: None,
            }],
        })
        .collect();
    Report::new("corpus", per_entry.into_iter().flatten().collect())
}
