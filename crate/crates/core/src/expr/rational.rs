//! Canonical rational functions over ℚ(√2,√3) in coordinates and sin/cos/exp generators.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use super::gcd::gcd;
use super::poly::{Monomial, Poly, Var, VarKind};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Element of the coefficient field, always held in normal form.
///
/// Normal form: numerator and denominator Pythagorean-reduced, denominator free of
/// cos generators, gcd 1, denominator leading coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    num: Arc<Poly>,
    den: Arc<Poly>,
}

impl Default for ScalarExpr {
    fn default() -> Self {
        ScalarExpr::zero()
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr {
            num: Arc::new(Poly::zero()),
            den: Arc::new(Poly::one()),
        }
    }

    pub fn one() -> Self {
        ScalarExpr::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        ScalarExpr {
            num: Arc::new(Poly::constant(c)),
            den: Arc::new(Poly::one()),
        }
    }

    pub fn int(n: i64) -> Self {
        ScalarExpr::constant(Scalar::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        ScalarExpr::constant(Scalar::from_frac(n, d))
    }

    pub fn rational(r: BigRational) -> Self {
        ScalarExpr::constant(Scalar::from_rational(r))
    }

    pub fn coord(i: usize) -> Self {
        ScalarExpr::from_poly(Poly::var(Var::coord(i)))
    }

    pub fn sin(i: usize) -> Self {
        ScalarExpr::from_poly(Poly::var(Var::sin(i)))
    }

    pub fn cos(i: usize) -> Self {
        ScalarExpr::from_poly(Poly::var(Var::cos(i)))
    }

    pub fn exp(i: usize) -> Self {
        ScalarExpr::from_poly(Poly::var(Var::exp(i)))
    }

    /// A polynomial numerator over denominator 1.
    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr {
            num: Arc::new(p.pythagorean_reduce()),
            den: Arc::new(Poly::one()),
        }
    }

    /// Builds `num/den` in normal form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(normalize_parts(num, den))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn has_transcendental(&self) -> bool {
        self.num.has_transcendental() || self.den.has_transcendental()
    }

    /// Size measure used to prefer simple pivots.
    pub fn complexity(&self) -> usize {
        if self.is_constant() {
            return if self.is_one() { 0 } else { 1 };
        }
        let deg: u32 = self
            .num
            .terms()
            .chain(self.den.terms())
            .map(|(m, _)| m.total_degree())
            .sum();
        8 + 4 * (self.num.nterms() + self.den.nterms()) + deg as usize
    }

    /// Coordinate indices this expression depends on.
    pub fn coords(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .num
            .vars()
            .into_iter()
            .chain(self.den.vars())
            .map(|v| v.coord as usize)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.coords().contains(&i)
    }

    pub fn inv(&self) -> Result<ScalarExpr> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if let Some(c) = self.as_constant() {
            return Ok(ScalarExpr::constant(c.inv().unwrap()));
        }
        Ok(normalize_parts((*self.den).clone(), (*self.num).clone()))
    }

    /// Division; errors on a zero divisor.
    pub fn checked_div(&self, o: &ScalarExpr) -> Result<ScalarExpr> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i32) -> ScalarExpr {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let e = e as u32;
        if self.den.is_one() {
            return ScalarExpr::from_poly(self.num.pow(e));
        }
        normalize_parts(self.num.pow(e), self.den.pow(e))
    }

    pub fn scale(&self, s: &Scalar) -> ScalarExpr {
        if s.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr {
            num: Arc::new(self.num.scale(s)),
            den: self.den.clone(),
        }
    }

    /// ∂/∂(coordinate `i`).
    pub fn diff(&self, i: usize) -> ScalarExpr {
        let dn = self.num.diff(i);
        if self.den.is_one() {
            return ScalarExpr::from_poly(dn);
        }
        let dd = self.den.diff(i);
        if dd.is_zero() {
            return normalize_parts(dn, (*self.den).clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        normalize_parts(num, self.den.mul(&self.den))
    }

    /// Substitutes coordinates by expressions. Generator arguments must map to a bare
    /// coordinate (renamed generator) or to 0 (sin 0 = 0, cos 0 = exp 0 = 1).
    pub fn substitute(&self, images: &[ScalarExpr]) -> Result<ScalarExpr> {
        let n = subst_poly(&self.num, images)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = subst_poly(&self.den, images)?;
        n.checked_div(&d)
    }

    /// Replaces coordinate indices (`map[i]` is the new index of coordinate `i`).
    pub fn reindex(&self, map: &[usize]) -> ScalarExpr {
        let images: Vec<ScalarExpr> = map.iter().map(|&j| ScalarExpr::coord(j)).collect();
        self.substitute(&images)
            .expect("coordinate renaming is always substitutable")
    }
}

fn var_image(v: Var, images: &[ScalarExpr]) -> Result<ScalarExpr> {
    let img = images
        .get(v.coord as usize)
        .ok_or_else(|| Error::UnknownCoordinate(format!("#{}", v.coord)))?;
    if v.kind == VarKind::Coord {
        return Ok(img.clone());
    }
    if img.is_zero() {
        return Ok(match v.kind {
            VarKind::Sin => ScalarExpr::zero(),
            _ => ScalarExpr::one(),
        });
    }
    if img.den.is_one() && img.num.nterms() == 1 {
        let (m, c) = img.num.leading().unwrap();
        if c.is_one() && m.0.len() == 1 && m.0[0].1 == 1 && m.0[0].0.kind == VarKind::Coord {
            let j = m.0[0].0.coord as usize;
            return Ok(match v.kind {
                VarKind::Sin => ScalarExpr::sin(j),
                VarKind::Cos => ScalarExpr::cos(j),
                _ => ScalarExpr::exp(j),
            });
        }
    }
    Err(Error::Unsupported(format!(
        "generator argument maps to a non-coordinate expression {img}"
    )))
}

fn subst_poly(p: &Poly, images: &[ScalarExpr]) -> Result<ScalarExpr> {
    let mut cache: std::collections::HashMap<Var, ScalarExpr> = Default::default();
    let mut acc = ScalarExpr::zero();
    for (m, c) in p.terms() {
        let mut t = ScalarExpr::constant(c.clone());
        for &(v, e) in &m.0 {
            let img = match cache.get(&v) {
                Some(x) => x.clone(),
                None => {
                    let x = var_image(v, images)?;
                    cache.insert(v, x.clone());
                    x
                }
            };
            t = &t * &img.pow(e as i32);
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Canonical form of `num/den` (den nonzero).
fn normalize_parts(num: Poly, den: Poly) -> ScalarExpr {
    let mut num = num.pythagorean_reduce();
    let mut den = den.pythagorean_reduce();
    if num.is_zero() {
        return ScalarExpr::zero();
    }
    // Clear cos generators from the denominator with the conjugate D0 − D1·cos.
    while let Some(c) = den.cos_var() {
        let u = den.to_univariate(c);
        let d0 = &u[0];
        let d1 = u.get(1).cloned().unwrap_or_default();
        let conj = Poly::from_univariate(&[d0.clone(), d1.neg()], c);
        num = num.mul(&conj).pythagorean_reduce();
        den = den.mul(&conj).pythagorean_reduce();
    }
    if let Some(c) = den.as_constant() {
        let inv = c.inv().unwrap();
        return ScalarExpr {
            num: Arc::new(num.scale(&inv)),
            den: Arc::new(Poly::one()),
        };
    }
    let g = gcd(&num, &den);
    if !g.is_one() {
        num = num.div_exact(&g).expect("gcd divides numerator");
        den = den.div_exact(&g).expect("gcd divides denominator");
    }
    let lc = den.leading_coeff();
    if !lc.is_one() {
        let inv = lc.inv().unwrap();
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    ScalarExpr {
        num: Arc::new(num),
        den: Arc::new(den),
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, o: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return ScalarExpr {
                num: Arc::new(self.num.add(&o.num)),
                den: self.den.clone(),
            };
        }
        if self.den == o.den {
            return normalize_parts(self.num.add(&o.num), (*self.den).clone());
        }
        // A polynomial plus n/d stays coprime to d.
        if o.den.is_one() {
            return ScalarExpr {
                num: Arc::new(self.num.add(&o.num.mul(&self.den)).pythagorean_reduce()),
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return o + self;
        }
        let g = gcd(&self.den, &o.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        normalize_parts(num, self.den.mul(&b))
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr {
            num: Arc::new(self.num.neg()),
            den: self.den.clone(),
        }
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, o: &ScalarExpr) -> ScalarExpr {
        self + &(-o)
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, o: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || o.is_zero() {
            return ScalarExpr::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if self.den.is_one() && o.den.is_one() {
            return ScalarExpr::from_poly(self.num.mul(&o.num));
        }
        normalize_parts(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Div for &ScalarExpr {
    type Output = ScalarExpr;
    /// Panics on a zero divisor; use [`ScalarExpr::checked_div`] for fallible division.
    fn div(self, o: &ScalarExpr) -> ScalarExpr {
        self.checked_div(o).expect("division by zero expression")
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: ScalarExpr) -> ScalarExpr {
                (&self).$m(&o)
            }
        }
        impl $tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: &ScalarExpr) -> ScalarExpr {
                (&self).$m(o)
            }
        }
        impl $tr<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: ScalarExpr) -> ScalarExpr {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::int(n)
    }
}

impl From<Scalar> for ScalarExpr {
    fn from(s: Scalar) -> Self {
        ScalarExpr::constant(s)
    }
}

impl std::iter::Sum for ScalarExpr {
    fn sum<I: Iterator<Item = ScalarExpr>>(iter: I) -> Self {
        iter.fold(ScalarExpr::zero(), |a, b| &a + &b)
    }
}

// Printing with coordinate names lives in `display`; this fallback uses x0, x1, ….
impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = Vec::new();
        write!(f, "{}", super::display::render(self, &names))
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({self})")
    }
}

/// Builds a monomial expression `c·Π x_i^e`.
pub fn monomial_expr(c: Scalar, factors: &[(Var, u32)]) -> ScalarExpr {
    let mut m = Monomial::one();
    for &(v, e) in factors {
        m = m.mul(&Monomial::var(v, e));
    }
    ScalarExpr::from_poly(Poly::term(m, c))
}
