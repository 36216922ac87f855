//! Point evaluation: exact when no transcendental generator occurs, binary64 otherwise.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::{Poly, VarKind};
use super::rational::ScalarExpr;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Scalar),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(s) => s.to_f64(),
            Value::Approx(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(s) => s.is_zero(),
            Value::Approx(x) => *x == 0.0,
        }
    }
}

fn eval_exact(p: &Poly, point: &[BigRational]) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for &(v, e) in &m.0 {
            let x = point
                .get(v.coord as usize)
                .ok_or_else(|| Error::UnknownCoordinate(format!("#{}", v.coord)))?;
            let xe = num_traits::pow(x.clone(), e as usize);
            t = t.scale(&xe);
        }
        acc += &t;
    }
    Ok(acc)
}

fn eval_float(p: &Poly, point: &[BigRational]) -> Result<f64> {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64();
        for &(v, e) in &m.0 {
            let x = point
                .get(v.coord as usize)
                .ok_or_else(|| Error::UnknownCoordinate(format!("#{}", v.coord)))?
                .to_f64()
                .unwrap_or(f64::NAN);
            let base = match v.kind {
                VarKind::Coord => x,
                VarKind::Sin => x.sin(),
                VarKind::Cos => x.cos(),
                VarKind::Exp => x.exp(),
            };
            t *= base.powi(e as i32);
        }
        acc += t;
    }
    Ok(acc)
}

/// Evaluates at a point given as one rational per coordinate.
pub fn evaluate_at(e: &ScalarExpr, point: &[BigRational]) -> Result<Value> {
    if !e.has_transcendental() {
        let d = eval_exact(e.denom(), point)?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let n = eval_exact(e.numer(), point)?;
        return Ok(Value::Exact(&n / &d));
    }
    let d = eval_float(e.denom(), point)?;
    if d == 0.0 || !d.is_finite() {
        return Err(Error::PoleAtPoint);
    }
    Ok(Value::Approx(eval_float(e.numer(), point)? / d))
}
