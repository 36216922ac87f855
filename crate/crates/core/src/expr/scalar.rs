//! Exact constants in the biquadratic field ℚ(√2, √3).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a + b√2 + c√3 + d√6` with rational `a, b, c, d`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Scalar { a, b, c, d }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Scalar {
            a,
            ..Default::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sqrt2() -> Self {
        Scalar {
            b: q(1),
            ..Default::default()
        }
    }

    pub fn sqrt3() -> Self {
        Scalar {
            c: q(1),
            ..Default::default()
        }
    }

    pub fn sqrt6() -> Self {
        Scalar {
            d: q(1),
            ..Default::default()
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn parts(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.is_rational()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// The rational value, when there is no irrational part.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    /// Conjugation √3 ↦ −√3.
    fn conj3(&self) -> Scalar {
        Scalar {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Conjugation √2 ↦ −√2.
    fn conj2(&self) -> Scalar {
        Scalar {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: -&self.d,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Scalar::from_rational(self.a.recip()));
        }
        // x·σ₃(x) lies in ℚ(√2); then multiply by its √2-conjugate.
        let c3 = self.conj3();
        let n1 = self * &c3;
        let c2 = n1.conj2();
        let n2 = &n1 * &c2;
        debug_assert!(n2.is_rational());
        let r = n2.a.recip();
        let num = &c3 * &c2;
        Some(num.scale(&r))
    }

    pub fn scale(&self, r: &BigRational) -> Scalar {
        Scalar {
            a: &self.a * r,
            b: &self.b * r,
            c: &self.c * r,
            d: &self.d * r,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        f(&self.a)
            + f(&self.b) * std::f64::consts::SQRT_2
            + f(&self.c) * 3f64.sqrt()
            + f(&self.d) * 6f64.sqrt()
    }

    /// Sign of the first nonzero part in the order (1, √2, √3, √6).
    pub fn leading_sign(&self) -> i32 {
        for p in self.parts() {
            if p.is_positive() {
                return 1;
            }
            if p.is_negative() {
                return -1;
            }
        }
        0
    }

    /// Number of nonzero parts; used to rank pivot candidates.
    pub fn weight(&self) -> usize {
        self.parts().iter().filter(|p| !p.is_zero()).count()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            c: &self.c - &o.c,
            d: &self.d - &o.d,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_rational() {
            return o.scale(&self.a);
        }
        if o.is_rational() {
            return self.scale(&o.a);
        }
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&o.a, &o.b, &o.c, &o.d);
        // √2√2 = 2, √3√3 = 3, √6√6 = 6, √2√3 = √6, √2√6 = 2√3, √3√6 = 3√2
        let two = q(2);
        let three = q(3);
        let six = q(6);
        Scalar {
            a: a * e + &two * (b * f) + &three * (c * g) + &six * (d * h),
            b: a * f + b * e + &three * (c * h) + &three * (d * g),
            c: a * g + c * e + &two * (b * h) + &two * (d * f),
            d: a * h + d * e + b * g + c * f,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero; callers test `is_zero` first.
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.a += &o.a;
        self.b += &o.b;
        self.c += &o.c;
        self.d += &o.d;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.a -= &o.a;
        self.b -= &o.b;
        self.c -= &o.c;
        self.d -= &o.d;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Re-parseable surface syntax, e.g. `1 + 2/3*sqrt2*sqrt3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let names = ["", "sqrt2", "sqrt3", "sqrt2*sqrt3"];
        for (p, name) in self.parts().into_iter().zip(names) {
            if p.is_zero() {
                continue;
            }
            let neg = p.is_negative();
            let mag = p.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if name.is_empty() {
                out.push_str(&fmt_rat(&mag));
            } else if mag.is_one() {
                out.push_str(name);
            } else {
                out.push_str(&fmt_rat(&mag));
                out.push('*');
                out.push_str(name);
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_field_products() {
        let one_p = Scalar::one() + Scalar::sqrt2();
        let one_m = Scalar::one() - Scalar::sqrt2();
        assert_eq!(&one_p * &one_m, Scalar::from_int(-1));
        assert_eq!(&Scalar::sqrt2() * &Scalar::sqrt3(), Scalar::sqrt6());
        assert_eq!(&Scalar::sqrt6() * &Scalar::sqrt6(), Scalar::from_int(6));
        assert_eq!(&Scalar::sqrt2() * &Scalar::sqrt6(), Scalar::sqrt3().scale(&q(2)));
    }

    #[test]
    fn inverse_of_general_element() {
        let x = Scalar::new(q(1), q(2), q(-3), BigRational::new(1.into(), 2.into()));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn float_value() {
        assert!((Scalar::sqrt3().to_f64() - 1.7320508075688772).abs() < 1e-15);
    }

    #[test]
    fn display() {
        assert_eq!(Scalar::sqrt3().scale(&BigRational::new(2.into(), 3.into())).to_string(), "2/3*sqrt3");
        assert_eq!((Scalar::one() - Scalar::sqrt6()).to_string(), "1 - sqrt2*sqrt3");
    }
}
