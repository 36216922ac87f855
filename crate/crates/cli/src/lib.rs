//! Model files, check dispatch and reports for the `kontakt` command.

pub mod checks;
pub mod corpus;
pub mod model;
pub mod report;

pub use checks::{CheckKind, Registry};
pub use model::{parse_model, print_model, Model, ModelError};
pub use report::{emit_json, emit_text, run_model, Report, RunOptions};
