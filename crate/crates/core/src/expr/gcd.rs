//! Multivariate gcd by recursive primitive remainder sequences.

use super::poly::{Poly, Var};
use super::scalar::Scalar;

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    gcd_core(a, b).monic()
}

/// gcd up to a constant factor.
fn gcd_core(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let g = gcd_stripped(&a.div_monomial(&ma), &b.div_monomial(&mb));
    g.mul_term(&m, &Scalar::one())
}

/// Both inputs nonzero with trivial monomial content.
fn gcd_stripped(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() || a.nterms() == 1 || b.nterms() == 1 {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    let (small, big) = if a.nterms() <= b.nterms() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    let shared: Vec<Var> = va.iter().filter(|v| vb.contains(v)).copied().collect();
    if shared.is_empty() {
        return Poly::one();
    }
    // Main variable: lowest combined degree keeps the remainder sequence short.
    let v = *shared
        .iter()
        .min_by_key(|v| (a.degree_in(**v) + b.degree_in(**v), **v))
        .unwrap();
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd_core(&ca, &cb);
    let pa = primitive(&ua, &ca);
    let pb = primitive(&ub, &cb);
    if coprime_image(&pa, &pb) {
        return c;
    }
    let g = prs(normalise(pa), normalise(pb));
    Poly::from_univariate(&g, v).mul(&c)
}

fn content(u: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in u.iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c.monic() } else { gcd_core(&g, c).monic() };
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn primitive(u: &[Poly], c: &Poly) -> Vec<Poly> {
    if c.is_one() {
        return u.to_vec();
    }
    u.iter()
        .map(|p| p.div_exact(c).expect("content divides"))
        .collect()
}

fn trim(u: &mut Vec<Poly>) {
    while u.len() > 1 && u.last().is_some_and(|c| c.is_zero()) {
        u.pop();
    }
}

fn deg(u: &[Poly]) -> usize {
    u.len() - 1
}

/// Sparse pseudo-remainder: `lc(b)^j · a mod b`.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r = a.to_vec();
    let db = deg(b);
    let lb = &b[db];
    trim(&mut r);
    while !(r.len() == 1 && r[0].is_zero()) && deg(&r) >= db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&bc.mul(&lr));
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        if r.is_empty() {
            r.push(Poly::zero());
        }
        trim(&mut r);
    }
    r
}

/// gcd of two primitive univariate polynomials (coefficients in the remaining variables).
fn prs(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    trim(&mut a);
    trim(&mut b);
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if deg(&b) == 0 {
            return vec![Poly::one()];
        }
        let r = prem(&a, &b);
        if r.len() == 1 && r[0].is_zero() {
            return b;
        }
        if deg(&r) == 0 {
            return vec![Poly::one()];
        }
        let c = content(&r);
        a = b;
        b = normalise(primitive(&r, &c));
    }
}

/// Scales so the leading scalar of the leading coefficient is 1; without this the
/// rational coefficients grow exponentially along the sequence.
fn normalise(u: Vec<Poly>) -> Vec<Poly> {
    let lc = u[deg(&u)].leading_coeff();
    if lc.is_one() {
        return u;
    }
    let s = lc.inv().expect("nonzero leading coefficient");
    u.iter().map(|c| c.scale(&s)).collect()
}

/// Specialises every other variable at a few small points. An image gcd of degree 0,
/// taken where neither leading coefficient vanishes, bounds deg_v of the true gcd by 0;
/// for primitive inputs that means they are coprime.
fn coprime_image(a: &[Poly], b: &[Poly]) -> bool {
    let mut vars: Vec<Var> = a.iter().chain(b).flat_map(|c| c.vars()).collect();
    vars.sort();
    vars.dedup();
    for shift in 0..3i64 {
        let at = |v: Var| {
            let k = vars.iter().position(|w| *w == v).unwrap() as i64;
            Scalar::from_frac(2 + k + 5 * shift, 1 + (k + shift) % 3)
        };
        let ia = specialise(a, &at);
        let ib = specialise(b, &at);
        if ia.last().is_some_and(|c| c.is_zero()) || ib.last().is_some_and(|c| c.is_zero()) {
            continue;
        }
        return univariate_gcd_degree(ia, ib) == 0;
    }
    false
}

fn specialise(u: &[Poly], at: &impl Fn(Var) -> Scalar) -> Vec<Scalar> {
    u.iter()
        .map(|c| {
            let mut sum = Scalar::zero();
            for (m, k) in c.terms() {
                let mut t = k.clone();
                for v in m.vars() {
                    let x = at(v);
                    for _ in 0..m.degree_in(v) {
                        t *= &x;
                    }
                }
                sum += &t;
            }
            sum
        })
        .collect()
}

/// Euclid over the coefficient field; both leading coefficients nonzero.
fn univariate_gcd_degree(mut a: Vec<Scalar>, mut b: Vec<Scalar>) -> usize {
    let strip = |u: &mut Vec<Scalar>| {
        while u.last().is_some_and(|c| c.is_zero()) {
            u.pop();
        }
    };
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        strip(&mut b);
        if b.is_empty() {
            return a.len() - 1;
        }
        if b.len() == 1 {
            return 0;
        }
        let inv = b.last().unwrap().inv().expect("nonzero");
        while a.len() >= b.len() {
            let q = a.last().unwrap() * &inv;
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[i + shift] -= &(bc * &q);
            }
            a.pop();
            strip(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
}
