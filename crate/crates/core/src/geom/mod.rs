//! Charts, vector fields and ℝ^k-valued forms with exterior calculus.

pub mod chart;
pub mod form;
pub mod map;
pub mod vector;

pub use chart::{ensure_same, same_chart, Chart, ChartRef, GenKind, TranscendentalGen};
pub use form::{sort_sign, Form, MultiIndex};
pub use map::{pullback, CoordinateMap};
pub use vector::{kvec_is_integrable, KVectorField, VectorField};

/// Free-function API mirroring the methods.
pub fn wedge(a: &Form, b: &Form) -> crate::Result<Form> {
    a.wedge(b)
}

pub fn ext_d(a: &Form) -> Form {
    a.ext_d()
}

pub fn interior_product(x: &VectorField, a: &Form) -> crate::Result<Form> {
    a.interior(x)
}

pub fn lie_bracket(x: &VectorField, y: &VectorField) -> crate::Result<VectorField> {
    x.bracket(y)
}

pub fn lie_derivative(x: &VectorField, a: &Form) -> crate::Result<Form> {
    a.lie_derivative(x)
}
