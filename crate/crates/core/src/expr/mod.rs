//! Exact coefficient field: rational functions over ℚ(√2,√3) with sin/cos/exp generators.

pub mod display;
pub mod eval;
pub mod gcd;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use eval::{evaluate_at, Value};
pub use poly::{Monomial, Poly, Var, VarKind};
pub use rational::ScalarExpr;
pub use scalar::Scalar;
