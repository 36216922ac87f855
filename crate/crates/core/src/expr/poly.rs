//! Sparse multivariate polynomials over [`Scalar`] with a lex monomial order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::scalar::Scalar;

/// Kind of a polynomial variable: a chart coordinate or a transcendental generator of one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Coord,
    Sin,
    Cos,
    Exp,
}

/// A polynomial variable: a coordinate index paired with a kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub coord: u32,
    pub kind: VarKind,
}

impl Var {
    pub fn coord(i: usize) -> Var {
        Var {
            coord: i as u32,
            kind: VarKind::Coord,
        }
    }
    pub fn sin(i: usize) -> Var {
        Var {
            coord: i as u32,
            kind: VarKind::Sin,
        }
    }
    pub fn cos(i: usize) -> Var {
        Var {
            coord: i as u32,
            kind: VarKind::Cos,
        }
    }
    pub fn exp(i: usize) -> Var {
        Var {
            coord: i as u32,
            kind: VarKind::Exp,
        }
    }
    pub fn is_transcendental(&self) -> bool {
        self.kind != VarKind::Coord
    }
}

/// Power product, stored as (var, exponent) pairs sorted by var with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut m = Monomial::one();
        if e > 0 {
            m.0.push((v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / o` when every exponent of `o` fits.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 < v {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == v {
                let f = o.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            while j < o.0.len() && o.0[j].0 < v {
                j += 1;
            }
            if j < o.0.len() && o.0[j].0 == v {
                out.push((v, e.min(o.0[j].1)));
            }
        }
        Monomial(out)
    }

    /// Drops the factor `v^e` entirely, returning the rest and `e`.
    pub fn split_var(&self, v: Var) -> (Monomial, u32) {
        let mut out = SmallVec::new();
        let mut e = 0;
        for &(w, f) in &self.0 {
            if w == v {
                e = f;
            } else {
                out.push((w, f));
            }
        }
        (Monomial(out), e)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }
}

impl Ord for Monomial {
    /// Lex order with smaller `Var` more significant.
    fn cmp(&self, o: &Self) -> Ordering {
        let (a, b) = (&self.0, &o.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial: monomial → nonzero coefficient. The last entry is the leading term.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v, 1), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_one(),
            _ => false,
        }
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (big, small) = if self.nterms() >= o.nterms() {
            (self, o)
        } else {
            (o, self)
        };
        let mut r = big.clone();
        for (m, c) in &small.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn has_transcendental(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.vars().any(|v| v.is_transcendental()))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.div(m).expect("monomial divides"), c.clone()))
                .collect(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv().unwrap()));
        }
        for v in d.vars() {
            if d.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let (lm, lc) = d.leading().unwrap();
        let lc_inv = lc.inv().unwrap();
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading() {
            let m = rm.div(lm)?;
            let c = rc * &lc_inv;
            r = r.sub(&d.mul_term(&m, &c));
            q.add_term(m, c);
        }
        Some(q)
    }

    /// View as a polynomial in `v` with coefficients free of `v`; index = degree.
    pub fn to_univariate(&self, v: Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_var(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[Poly], v: Var) -> Poly {
        let mut r = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(v, e as u32);
            for (n, s) in &c.terms {
                r.add_term(n.mul(&m), s.clone());
            }
        }
        r
    }

    /// Partial derivative with respect to coordinate `i`, with d sin = cos, d cos = −sin, d exp = exp.
    pub fn diff(&self, i: usize) -> Poly {
        let i = i as u32;
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            for (k, &(v, e)) in m.0.iter().enumerate() {
                if v.coord != i {
                    continue;
                }
                let mut rest = m.clone();
                if e == 1 {
                    rest.0.remove(k);
                } else {
                    rest.0[k].1 = e - 1;
                }
                let ce = c * &Scalar::from_int(e as i64);
                match v.kind {
                    VarKind::Coord => r.add_term(rest, ce),
                    VarKind::Sin => {
                        r.add_term(rest.mul(&Monomial::var(Var::cos(i as usize), 1)), ce)
                    }
                    VarKind::Cos => r.add_term(
                        rest.mul(&Monomial::var(Var::sin(i as usize), 1)),
                        -ce,
                    ),
                    VarKind::Exp => r.add_term(m.clone(), ce),
                }
            }
        }
        r
    }

    /// Rewrites cos(u)^e with e ≥ 2 as cos(u)^(e mod 2)·(1 − sin(u)²)^(e div 2).
    pub fn pythagorean_reduce(&self) -> Poly {
        let needs = self
            .terms
            .keys()
            .any(|m| m.0.iter().any(|(v, e)| v.kind == VarKind::Cos && *e >= 2));
        if !needs {
            return self.clone();
        }
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut base = Monomial::one();
            let mut factor = Poly::one();
            for &(v, e) in &m.0 {
                if v.kind == VarKind::Cos && e >= 2 {
                    if e % 2 == 1 {
                        base = base.mul(&Monomial::var(v, 1));
                    }
                    let s = Var::sin(v.coord as usize);
                    let one_minus_s2 =
                        Poly::one().sub(&Poly::term(Monomial::var(s, 2), Scalar::one()));
                    factor = factor.mul(&one_minus_s2.pow(e / 2));
                } else {
                    base = base.mul(&Monomial::var(v, e));
                }
            }
            r = r.add(&factor.mul_term(&base, c));
        }
        r
    }

    /// Largest cos variable present, if any.
    pub fn cos_var(&self) -> Option<Var> {
        self.vars().into_iter().rev().find(|v| v.kind == VarKind::Cos)
    }

    pub fn map_terms<F: FnMut(&Monomial, &Scalar) -> Poly>(&self, mut f: F) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            r = r.add(&f(m, c));
        }
        r
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{{")?;
        for (m, c) in self.terms.iter().rev() {
            write!(f, " ({c}){m:?}")?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(Var::coord(0))
    }
    fn y() -> Poly {
        Poly::var(Var::coord(1))
    }

    #[test]
    fn lex_leading_term() {
        let p = x().add(&y().pow(3));
        let (m, _) = p.leading().unwrap();
        assert_eq!(m, &Monomial::var(Var::coord(0), 1));
    }

    #[test]
    fn exact_division() {
        let a = x().pow(2).sub(&y().pow(2));
        let b = x().sub(&y());
        assert_eq!(a.div_exact(&b).unwrap(), x().add(&y()));
        assert!(a.div_exact(&x()).is_none());
    }

    #[test]
    fn univariate_round_trip() {
        let p = x().pow(2).mul(&y()).add(&y().pow(2)).add(&Poly::one());
        let u = p.to_univariate(Var::coord(0));
        assert_eq!(Poly::from_univariate(&u, Var::coord(0)), p);
    }

    #[test]
    fn pythagorean() {
        let c = Poly::var(Var::cos(0));
        let s = Poly::var(Var::sin(0));
        let p = c.pow(2).add(&s.pow(2)).pythagorean_reduce();
        assert!(p.is_one());
        let q = c.pow(3).pythagorean_reduce();
        assert_eq!(q, c.sub(&c.mul(&s.pow(2))));
    }
}
