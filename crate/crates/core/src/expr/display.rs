//! Re-parseable rendering of expressions with coordinate names.

use num_traits::Signed;

use super::poly::{Monomial, Poly, VarKind};
use super::rational::ScalarExpr;
use super::scalar::Scalar;

fn name(names: &[String], i: u32) -> String {
    names
        .get(i as usize)
        .cloned()
        .unwrap_or_else(|| format!("x{i}"))
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .map(|&(v, e)| {
            let n = name(names, v.coord);
            let base = match v.kind {
                VarKind::Coord => n,
                VarKind::Sin => format!("sin({n})"),
                VarKind::Cos => format!("cos({n})"),
                VarKind::Exp => format!("exp({n})"),
            };
            if e == 1 {
                base
            } else {
                format!("{base}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// Returns (negative?, magnitude text) for a coefficient; text is empty for a unit.
fn render_coeff(c: &Scalar, with_monomial: bool) -> (bool, String) {
    if let Some(r) = c.as_rational() {
        let neg = r.is_negative();
        let mag = r.abs();
        let s = if num_traits::One::is_one(&mag) && with_monomial {
            String::new()
        } else if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("{}/{}", mag.numer(), mag.denom())
        };
        return (neg, s);
    }
    if c.weight() == 1 {
        let neg = c.leading_sign() < 0;
        let mag = if neg { -c } else { c.clone() };
        return (neg, mag.to_string());
    }
    (false, format!("({c})"))
}

pub fn render_poly(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (m, c) in p.terms().rev() {
        let has_m = !m.is_one();
        let (neg, cs) = render_coeff(c, has_m);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let ms = render_monomial(m, names);
        match (cs.is_empty(), has_m) {
            (true, _) => out.push_str(&ms),
            (false, true) => {
                out.push_str(&cs);
                out.push('*');
                out.push_str(&ms);
            }
            (false, false) => out.push_str(&cs),
        }
    }
    out
}

fn is_atomic(p: &Poly) -> bool {
    p.nterms() == 1 && {
        let (_, c) = p.leading().unwrap();
        c.is_one()
    }
}

pub fn render(e: &ScalarExpr, names: &[String]) -> String {
    let n = render_poly(e.numer(), names);
    if e.denom().is_one() {
        return n;
    }
    let d = render_poly(e.denom(), names);
    let n = if is_atomic(e.numer()) || e.numer().is_constant() && !n.contains(' ') {
        n
    } else {
        format!("({n})")
    };
    let d = if is_atomic(e.denom()) && !d.contains('*') {
        d
    } else {
        format!("({d})")
    };
    format!("{n}/{d}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_with_names() {
        let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let e = ScalarExpr::coord(0).pow(2) * ScalarExpr::frac(-2, 3) + ScalarExpr::coord(1);
        assert_eq!(render(&e, &names), "-2/3*x^2 + y");
        let f = ScalarExpr::one() / (ScalarExpr::coord(0) + ScalarExpr::one());
        assert_eq!(render(&f, &names), "1/(x + 1)");
    }
}
