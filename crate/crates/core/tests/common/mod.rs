#![allow(dead_code)]

use kontakt_core::expr::ScalarExpr;
use kontakt_core::geom::{ChartRef, Form, VectorField};
use proptest::prelude::*;

/// Terms (coefficient, exponent per coordinate).
pub type PolySpec = Vec<(i64, Vec<u32>)>;

pub fn poly_spec(dim: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = PolySpec> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..=max_exp, dim)), 0..=max_terms)
}

pub fn build(spec: &PolySpec) -> ScalarExpr {
    let mut acc = ScalarExpr::zero();
    for (c, exps) in spec {
        let mut t = ScalarExpr::int(*c);
        for (i, &e) in exps.iter().enumerate() {
            t = &t * &ScalarExpr::coord(i).pow(e as i32);
        }
        acc = &acc + &t;
    }
    acc
}

pub fn field(chart: &ChartRef, specs: &[PolySpec]) -> VectorField {
    VectorField::new(chart, specs.iter().map(build).collect()).unwrap()
}

pub fn one_form(chart: &ChartRef, specs: &[PolySpec]) -> Form {
    let comps: Vec<ScalarExpr> = specs.iter().map(build).collect();
    Form::one_form(chart, &comps)
}

/// Two-form with components on dx^i∧dx^{i+1} and dx^0∧dx^{n−1}.
pub fn two_form(chart: &ChartRef, specs: &[PolySpec]) -> Form {
    let n = chart.dim();
    let mut f = Form::zero(chart, 2, 1);
    for (i, s) in specs.iter().enumerate().take(n) {
        let (a, b) = if i + 1 < n { (i, i + 1) } else { (0, n - 1) };
        f.set(0, &[a as u16, b as u16], build(s));
    }
    f
}

/// Like [`build`] with exponent slot j attached to coordinate `vars[j]`.
pub fn build_on(spec: &PolySpec, vars: &[usize]) -> ScalarExpr {
    let mut acc = ScalarExpr::zero();
    for (c, exps) in spec {
        let mut t = ScalarExpr::int(*c);
        for (&v, &e) in vars.iter().zip(exps) {
            t = &t * &ScalarExpr::coord(v).pow(e as i32);
        }
        acc = &acc + &t;
    }
    acc
}
