//! Exact symbolic toolkit for k-contact geometry.
//!
//! Everything is computed over a fraction field of rational functions (see [`expr`]),
//! so rank and kernel verdicts hold at a generic point of the chart.

pub mod dist;
pub mod error;
pub mod expr;
pub mod geom;
pub mod ham;
pub mod jet;
pub mod kcontact;
pub mod liegroup;
pub mod linalg;
pub mod parse;

pub use error::{Error, Result};
