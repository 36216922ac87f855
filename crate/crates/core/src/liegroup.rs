//! Structure-constant calculus for left-invariant k-contact structures.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::Scalar;
use crate::geom::sort_sign;
use crate::linalg;

/// Structure constants [X_α, X_β] = Σ_γ c_{αβ}^γ X_γ, 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    pub name: String,
    dim: usize,
    c: Vec<Scalar>,
}

impl LieAlgebraData {
    pub fn new(name: &str, dim: usize) -> Self {
        LieAlgebraData {
            name: name.to_string(),
            dim,
            c: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn at(&self, a: usize, b: usize, g: usize) -> usize {
        (a * self.dim + b) * self.dim + g
    }

    pub fn c(&self, a: usize, b: usize, g: usize) -> &Scalar {
        &self.c[self.at(a, b, g)]
    }

    /// Sets c_{ab}^g and c_{ba}^g = −c_{ab}^g.
    pub fn set(&mut self, a: usize, b: usize, g: usize, v: Scalar) {
        let i = self.at(b, a, g);
        self.c[i] = -&v;
        let i = self.at(a, b, g);
        self.c[i] = v;
    }

    /// Sets one constant without touching its antisymmetric partner.
    pub fn set_raw(&mut self, a: usize, b: usize, g: usize, v: Scalar) {
        let i = self.at(a, b, g);
        self.c[i] = v;
    }

    /// Nonzero c_{ab}^g with a < b.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                for g in 0..self.dim {
                    let v = self.c(a, b, g);
                    if !v.is_zero() {
                        out.push((a, b, g, v.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Antisymmetry and the Jacobi identity, exactly.
pub fn validate_structure(c: &LieAlgebraData) -> bool {
    let r = c.dim;
    for a in 0..r {
        for b in 0..r {
            for g in 0..r {
                if !(c.c(a, b, g) + c.c(b, a, g)).is_zero() {
                    return false;
                }
            }
        }
    }
    for a in 0..r {
        for b in a + 1..r {
            for g in b + 1..r {
                for n in 0..r {
                    let mut s = Scalar::zero();
                    for m in 0..r {
                        for (x, y, z) in [(a, b, g), (b, g, a), (g, a, b)] {
                            let (u, v) = (c.c(x, y, m), c.c(m, z, n));
                            if !u.is_zero() && !v.is_zero() {
                                s += &(u * v);
                            }
                        }
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Constant-coefficient form in the left-invariant coframe η^1 … η^r.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantForm {
    pub degree: usize,
    pub channels: Vec<BTreeMap<Vec<u16>, Scalar>>,
}

impl InvariantForm {
    pub fn zero(degree: usize) -> Self {
        InvariantForm {
            degree,
            channels: vec![BTreeMap::new()],
        }
    }

    /// The coframe element η^a.
    pub fn basis(a: usize) -> Self {
        let mut f = InvariantForm::zero(1);
        f.channels[0].insert(vec![a as u16], Scalar::one());
        f
    }

    pub fn from_channels(parts: &[InvariantForm]) -> Self {
        InvariantForm {
            degree: parts.first().map_or(1, |p| p.degree),
            channels: parts.iter().flat_map(|p| p.channels.iter().cloned()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.channels.iter().all(|c| c.is_empty())
    }

    pub fn get(&self, ch: usize, idx: &[u16]) -> Scalar {
        self.channels[ch].get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(m: &mut BTreeMap<Vec<u16>, Scalar>, idx: Vec<u16>, v: Scalar) {
        let e = m.entry(idx).or_insert_with(Scalar::zero);
        *e += &v;
        if e.is_zero() {
            m.retain(|_, x| !x.is_zero());
        }
    }

    pub fn add(&self, o: &InvariantForm) -> InvariantForm {
        let mut r = self.clone();
        for (ch, m) in o.channels.iter().enumerate() {
            for (i, v) in m {
                Self::add_term(&mut r.channels[ch], i.clone(), v.clone());
            }
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> InvariantForm {
        InvariantForm {
            degree: self.degree,
            channels: self
                .channels
                .iter()
                .map(|m| m.iter().map(|(i, v)| (i.clone(), v * s)).filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        }
    }

    /// Wedge of single-channel forms.
    pub fn wedge(&self, o: &InvariantForm) -> InvariantForm {
        let mut r = InvariantForm::zero(self.degree + o.degree);
        for (i, a) in &self.channels[0] {
            for (j, b) in &o.channels[0] {
                let mut idx: Vec<u16> = i.iter().chain(j).copied().collect();
                let s = sort_sign(&mut idx);
                if s == 0 {
                    continue;
                }
                let v = a * b;
                Self::add_term(&mut r.channels[0], idx, if s < 0 { -v } else { v });
            }
        }
        r
    }

    /// Invariant exterior derivative from dη^a (Leibniz on coframe monomials).
    pub fn d(&self, c: &LieAlgebraData) -> InvariantForm {
        let mut out = InvariantForm {
            degree: self.degree + 1,
            channels: vec![BTreeMap::new(); self.channels.len()],
        };
        let mcs: Vec<InvariantForm> = (0..c.dim).map(|a| maurer_cartan(c, a)).collect();
        for (ch, m) in self.channels.iter().enumerate() {
            for (idx, v) in m {
                for (pos, &a) in idx.iter().enumerate() {
                    let mut left = InvariantForm::zero(pos);
                    left.channels[0].insert(idx[..pos].to_vec(), v.clone());
                    let mut right = InvariantForm::zero(idx.len() - pos - 1);
                    right.channels[0].insert(idx[pos + 1..].to_vec(), Scalar::one());
                    let mut t = left.wedge(&mcs[a as usize]).wedge(&right);
                    if pos % 2 == 1 {
                        t = t.scale(&Scalar::from_int(-1));
                    }
                    for (i, x) in &t.channels[0] {
                        Self::add_term(&mut out.channels[ch], i.clone(), x.clone());
                    }
                }
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let chs: Vec<String> = self
            .channels
            .iter()
            .map(|m| {
                if m.is_empty() {
                    return "0".to_string();
                }
                let mut s = String::new();
                for (i, (idx, v)) in m.iter().enumerate() {
                    let basis: Vec<String> = idx.iter().map(|a| format!("eta{}", a + 1)).collect();
                    let basis = basis.join("^");
                    let (neg, coef) = if v.leading_sign() < 0 { (true, -v) } else { (false, v.clone()) };
                    if i == 0 {
                        if neg {
                            s.push('-');
                        }
                    } else {
                        s.push_str(if neg { " - " } else { " + " });
                    }
                    if coef.is_one() {
                        s.push_str(&basis);
                    } else if coef.as_rational().is_some() || coef.weight() == 1 {
                        s.push_str(&format!("{coef}*{basis}"));
                    } else {
                        s.push_str(&format!("({coef})*{basis}"));
                    }
                }
                s
            })
            .collect();
        chs.join("; ")
    }
}

/// dη^a = −Σ_{β<γ} c_{βγ}^a η^β ∧ η^γ.
pub fn maurer_cartan(c: &LieAlgebraData, a: usize) -> InvariantForm {
    let mut f = InvariantForm::zero(2);
    for b in 0..c.dim {
        for g in b + 1..c.dim {
            let v = c.c(b, g, a);
            if !v.is_zero() {
                f.channels[0].insert(vec![b as u16, g as u16], -v);
            }
        }
    }
    f
}

/// d² = 0 on every coframe element.
pub fn invariant_d_squared_vanishes(c: &LieAlgebraData) -> bool {
    (0..c.dim).all(|a| maurer_cartan(c, a).d(c).is_zero())
}

#[derive(Clone, Debug)]
pub struct InvariantKContactReport {
    pub passes: bool,
    /// Basis of ker dη over the constants.
    pub ker_deta: Vec<Vec<Scalar>>,
    pub transversal: bool,
    /// Reeb vectors in the left-invariant basis, when the checks pass.
    pub reeb: Option<Vec<Vec<Scalar>>>,
    /// The Reeb frame is (X_α^L)_{α∈A}.
    pub reeb_is_basis: bool,
}

fn check_subset(c: &LieAlgebraData, a: &[usize]) -> Result<()> {
    if a.is_empty() || a.len() >= c.dim || a.iter().any(|&i| i >= c.dim) {
        return Err(Error::PreconditionViolated("index set must be a proper nonempty subset".into()));
    }
    let mut s = a.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != a.len() {
        return Err(Error::PreconditionViolated("repeated index".into()));
    }
    Ok(())
}

/// η = Σ_{α∈A} η_L^α ⊗ e_α on the group (indices 0-based).
pub fn invariant_kcontact_check(c: &LieAlgebraData, a: &[usize]) -> Result<InvariantKContactReport> {
    check_subset(c, a)?;
    let r = c.dim;
    let k = a.len();
    // ι_v dη^α = −Σ_{μ,γ} c_{μγ}^α v^μ η^γ.
    let mut rows = Vec::new();
    for &al in a {
        for g in 0..r {
            rows.push((0..r).map(|m| c.c(m, g, al).clone()).collect::<Vec<_>>());
        }
    }
    let ker = linalg::null_space(rows.clone(), r);
    let mut both = ker.clone();
    for m in (0..r).filter(|m| !a.contains(m)) {
        let mut e = vec![Scalar::zero(); r];
        e[m] = Scalar::one();
        both.push(e);
    }
    let transversal = linalg::rank(both, r) == r;
    let passes = ker.len() == k && transversal;
    let mut reeb = None;
    let mut reeb_is_basis = false;
    if passes {
        // Within ker dη, solve η^β(R_α) = δ.
        let mut frame = Vec::with_capacity(k);
        let m: Vec<Vec<Scalar>> = a.iter().map(|&b| ker.iter().map(|v| v[b].clone()).collect()).collect();
        for i in 0..k {
            let mut rhs = vec![Scalar::zero(); k];
            rhs[i] = Scalar::one();
            match linalg::solve(&m, &rhs, k) {
                linalg::Solution::Unique(w) => {
                    let mut v = vec![Scalar::zero(); r];
                    for (wj, kj) in w.iter().zip(&ker) {
                        for (x, y) in v.iter_mut().zip(kj) {
                            *x += &(wj * y);
                        }
                    }
                    frame.push(v);
                }
                _ => return Err(Error::NotKContact("singular Reeb system".into())),
            }
        }
        reeb_is_basis = frame.iter().zip(a).all(|(v, &al)| v.iter().enumerate().all(|(i, x)| if i == al { x.is_one() } else { x.is_zero() }));
        reeb = Some(frame);
    }
    Ok(InvariantKContactReport {
        passes,
        ker_deta: ker,
        transversal,
        reeb,
        reeb_is_basis,
    })
}

#[derive(Clone, Debug)]
pub struct HdwInvariantSystem {
    /// Unknown ordering: f_α^β at index i·r + β for the i-th element α of A.
    pub unknowns: Vec<(usize, usize)>,
    /// Rows γ ∈ A: Σ_{α∈A} Σ_β c_{βγ}^α f_α^β = 0.
    pub algebraic: Vec<Vec<Scalar>>,
    /// Rows γ ∉ A of the constant-ansatz reduction: Σ_{α∈A} Σ_β c_{βγ}^α f_α^β = 0.
    pub pde: Vec<Vec<Scalar>>,
    /// Basis of constant solutions.
    pub solutions: Vec<Vec<Scalar>>,
}

impl HdwInvariantSystem {
    pub fn algebraic_is_zero(&self) -> bool {
        self.algebraic.iter().flatten().all(|x| x.is_zero())
    }

    pub fn pde_is_zero(&self) -> bool {
        self.pde.iter().flatten().all(|x| x.is_zero())
    }
}

/// With X_α = Σ_β f_α^β X_β^L, h = −Σ_α f_α^α and left-invariant derivatives of constants zero.
pub fn hdw_invariant_system(c: &LieAlgebraData, a: &[usize]) -> Result<HdwInvariantSystem> {
    check_subset(c, a)?;
    let r = c.dim;
    let unknowns: Vec<(usize, usize)> = a.iter().flat_map(|&al| (0..r).map(move |b| (al, b))).collect();
    let row = |g: usize| -> Vec<Scalar> { unknowns.iter().map(|&(al, b)| c.c(b, g, al).clone()).collect() };
    let algebraic: Vec<Vec<Scalar>> = a.iter().map(|&g| row(g)).collect();
    let pde: Vec<Vec<Scalar>> = (0..r).filter(|g| !a.contains(g)).map(row).collect();
    let mut all = algebraic.clone();
    all.extend(pde.iter().cloned());
    let solutions = linalg::null_space(all, unknowns.len());
    Ok(HdwInvariantSystem {
        unknowns,
        algebraic,
        pde,
        solutions,
    })
}

fn from_table(name: &str, dim: usize, table: &[(usize, usize, usize, Scalar)]) -> LieAlgebraData {
    // Tabulated f_{abc} are totally antisymmetric; c_{ab}^g = −f_{abg}.
    let mut c = LieAlgebraData::new(name, dim);
    for (i, j, k, f) in table {
        let (i, j, k) = (i - 1, j - 1, k - 1);
        let m = -f;
        c.set(i, j, k, m.clone());
        c.set(j, k, i, m.clone());
        c.set(k, i, j, m);
    }
    c
}

fn su3_table() -> Vec<(usize, usize, usize, Scalar)> {
    let s3 = Scalar::sqrt3();
    vec![
        (1, 2, 3, Scalar::from_int(2)),
        (1, 4, 7, Scalar::one()),
        (1, 5, 6, Scalar::from_int(-1)),
        (2, 4, 6, Scalar::one()),
        (2, 5, 7, Scalar::one()),
        (3, 4, 5, Scalar::one()),
        (3, 6, 7, Scalar::from_int(-1)),
        (4, 5, 8, s3.clone()),
        (6, 7, 8, s3),
    ]
}

fn su4_extra() -> Vec<(usize, usize, usize, Scalar)> {
    let one = Scalar::one;
    let m1 = || Scalar::from_int(-1);
    let s3_3 = &Scalar::sqrt3() * &Scalar::from_frac(1, 3);
    let s6 = &Scalar::sqrt6() * &Scalar::from_frac(2, 3);
    vec![
        (1, 9, 12, one()),
        (1, 10, 11, m1()),
        (2, 9, 11, one()),
        (2, 10, 12, one()),
        (3, 9, 10, one()),
        (3, 11, 12, m1()),
        (4, 9, 14, one()),
        (4, 10, 13, m1()),
        (5, 9, 13, one()),
        (5, 10, 14, one()),
        (6, 11, 14, one()),
        (6, 12, 13, m1()),
        (7, 11, 13, one()),
        (7, 12, 14, one()),
        (8, 9, 10, s3_3.clone()),
        (8, 11, 12, s3_3.clone()),
        (8, 13, 14, &s3_3 * &Scalar::from_int(-2)),
        (9, 10, 15, s6.clone()),
        (11, 12, 15, s6.clone()),
        (13, 14, 15, s6),
    ]
}

pub const CORPUS_ALGEBRAS: [&str; 4] = ["su3", "su4", "u2", "rh3"];

pub fn corpus_algebra(name: &str) -> Result<LieAlgebraData> {
    match name {
        "su3" => Ok(from_table("su3", 8, &su3_table())),
        "su4" => {
            let mut t = su3_table();
            t.extend(su4_extra());
            Ok(from_table("su4", 15, &t))
        }
        "u2" => {
            // stated directly as [X_a, X_b] = 2 ε_{abg} X_g, no table sign flip
            let mut c = LieAlgebraData::new("u2", 4);
            for (a, b, g) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                c.set(a, b, g, Scalar::from_int(2));
            }
            Ok(c)
        }
        "rh3" => {
            let mut c = LieAlgebraData::new("rh3", 4);
            c.set(1, 3, 2, Scalar::one());
            Ok(c)
        }
        _ => Err(Error::UnknownAlgebra(name.to_string())),
    }
}

/// Index set A (0-based) of the invariant k-contact form shipped with each corpus algebra.
pub fn corpus_reeb_indices(name: &str) -> Result<Vec<usize>> {
    match name {
        "su3" => Ok(vec![2, 7]),
        "su4" => Ok(vec![2, 7, 14]),
        "u2" => Ok(vec![2, 3]),
        "rh3" => Ok(vec![0, 2]),
        _ => Err(Error::UnknownAlgebra(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su3_mc() {
        let c = corpus_algebra("su3").unwrap();
        assert!(validate_structure(&c));
        assert_eq!(maurer_cartan(&c, 2).render(), "2*eta1^eta2 + eta4^eta5 - eta6^eta7");
    }

    #[test]
    fn corrupted_fails() {
        let mut c = corpus_algebra("su3").unwrap();
        c.set(0, 1, 2, Scalar::from_int(3));
        assert!(!validate_structure(&c));
    }
}
