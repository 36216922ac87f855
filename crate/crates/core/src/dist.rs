//! Distributions, annihilators, kernels, Lie flags and symmetry tests.
//!
//! All verdicts are taken over the fraction field, i.e. at a generic point.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::{evaluate_at, Poly, Scalar, ScalarExpr, Value, VarKind};
use crate::geom::{ensure_same, ChartRef, Form, VectorField};
use crate::linalg::{self, float_rank, reduce, Reduced, Solution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    chart: ChartRef,
    gens: Vec<VectorField>,
}

/// Clears denominators, divides out the polynomial content and fixes the sign so the
/// first nonzero entry has a positive leading coefficient.
pub fn normalize_vector(v: &[ScalarExpr]) -> Vec<ScalarExpr> {
    use crate::expr::gcd::gcd;
    use crate::expr::Poly;
    let mut l = Poly::one();
    for x in v.iter().filter(|x| !x.is_zero()) {
        let d = x.denom();
        if d.is_one() {
            continue;
        }
        let g = gcd(&l, d);
        l = l.mul(&d.div_exact(&g).unwrap());
    }
    let scaled: Vec<ScalarExpr> = v
        .iter()
        .map(|x| x * &ScalarExpr::from_poly(l.clone()))
        .collect();
    let mut c = Poly::zero();
    for x in scaled.iter().filter(|x| !x.is_zero()) {
        c = if c.is_zero() { x.numer().clone() } else { gcd(&c, x.numer()) };
        if c.is_one() {
            break;
        }
    }
    if c.is_zero() {
        return scaled;
    }
    let mut factor = ScalarExpr::from_poly(c).inv().unwrap();
    let first = scaled.iter().find(|x| !x.is_zero()).unwrap();
    if first.numer().leading_coeff().leading_sign() < 0 {
        factor = -factor;
    }
    scaled.iter().map(|x| x * &factor).collect()
}

fn eval_matrix(m: &[Vec<ScalarExpr>], point: &[BigRational]) -> Result<(Option<Vec<Vec<Scalar>>>, Vec<Vec<f64>>)> {
    let mut exact = Some(Vec::new());
    let mut float = Vec::new();
    for row in m {
        let mut er = Vec::new();
        let mut fr = Vec::new();
        for e in row {
            let v = evaluate_at(e, point)?;
            fr.push(v.to_f64());
            match v {
                Value::Exact(s) => er.push(s),
                Value::Approx(_) => {}
            }
        }
        if er.len() == row.len() {
            if let Some(ex) = exact.as_mut() {
                ex.push(er);
            }
        } else {
            exact = None;
        }
        float.push(fr);
    }
    Ok((exact, float))
}

/// Rank of a symbolic matrix evaluated at a point (exact unless generators occur).
/// Bareiss elimination on rows with cleared denominators: exact divisions only, no gcds.
/// `None` when sin/cos occur, since those polynomials live modulo s² + c² = 1.
fn fraction_free_rank(m: &[Vec<ScalarExpr>], ncols: usize) -> Option<usize> {
    let trig = |p: &Poly| p.vars().iter().any(|v| matches!(v.kind, VarKind::Sin | VarKind::Cos));
    if m.iter().flatten().any(|e| trig(e.numer()) || trig(e.denom())) {
        return None;
    }
    let mut rows: Vec<Vec<Poly>> = Vec::with_capacity(m.len());
    for row in m {
        let mut dens: Vec<&Poly> = Vec::new();
        for e in row {
            if !e.denom().is_one() && !dens.contains(&e.denom()) {
                dens.push(e.denom());
            }
        }
        let cleared = row
            .iter()
            .map(|e| {
                dens.iter()
                    .fold(e.numer().clone(), |acc, d| if *d == e.denom() { acc } else { acc.mul(d) })
            })
            .collect::<Vec<_>>();
        if cleared.iter().any(|p| !p.is_zero()) {
            rows.push(cleared);
        }
    }
    let mut prev = Poly::one();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let piv = &top[rank];
        for r in rest.iter_mut() {
            for j in col + 1..ncols {
                let v = piv[col].mul(&r[j]).sub(&r[col].mul(&piv[j]));
                r[j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            r[col] = Poly::zero();
        }
        prev = rows[rank][col].clone();
        rank += 1;
    }
    Some(rank)
}

fn sample_point(n: usize, seed: usize) -> Vec<BigRational> {
    const P: [i64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];
    (0..n)
        .map(|i| {
            let a = P[(i + seed) % P.len()];
            let b = P[(i * 3 + seed + 1) % P.len()] + 1;
            BigRational::new((a + seed as i64).into(), b.into())
        })
        .collect()
}

pub fn rank_at(m: &[Vec<ScalarExpr>], ncols: usize, point: &[BigRational]) -> Result<usize> {
    let (exact, float) = eval_matrix(m, point)?;
    Ok(match exact {
        Some(ex) => linalg::rank(ex, ncols),
        None => float_rank(float, ncols),
    })
}

/// Rows of 2-form channels whose common null space is ∩ ker ω^α.
fn two_form_rows(forms: &[&Form]) -> Result<Vec<Vec<ScalarExpr>>> {
    let mut rows = Vec::new();
    for f in forms {
        for a in 0..f.channels() {
            rows.extend(f.two_form_matrix(a)?);
        }
    }
    Ok(rows)
}

impl Distribution {
    pub fn new(chart: &ChartRef, gens: Vec<VectorField>) -> Result<Self> {
        for g in &gens {
            ensure_same(chart, g.chart())?;
        }
        Ok(Distribution {
            chart: chart.clone(),
            gens,
        })
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn gens(&self) -> &[VectorField] {
        &self.gens
    }

    pub fn matrix(&self) -> Vec<Vec<ScalarExpr>> {
        self.gens.iter().map(|g| g.comps().to_vec()).collect()
    }

    fn reduced(&self) -> Reduced<ScalarExpr> {
        reduce(self.matrix(), self.chart.dim())
    }

    pub fn generic_rank(&self) -> usize {
        let n = self.chart.dim();
        let bound = self.gens.iter().filter(|g| !g.is_zero()).count().min(n);
        if bound == 0 {
            return 0;
        }
        // A point rank is a lower bound; reaching the upper bound settles it.
        let m = self.matrix();
        for seed in 0..2 {
            if let Ok((Some(ex), _)) = eval_matrix(&m, &sample_point(n, seed)) {
                if linalg::rank(ex, n) == bound {
                    return bound;
                }
            }
        }
        fraction_free_rank(&m, n).unwrap_or_else(|| self.reduced().rank())
    }

    pub fn rank_at_point(&self, point: &[BigRational]) -> Result<usize> {
        if point.len() != self.chart.dim() {
            return Err(Error::PreconditionViolated(format!(
                "point has {} coordinates, chart has {}",
                point.len(),
                self.chart.dim()
            )));
        }
        rank_at(&self.matrix(), self.chart.dim(), point)
    }

    /// Generic span membership.
    pub fn contains(&self, v: &VectorField) -> bool {
        v.is_zero() || self.absorbs(std::slice::from_ref(v))
    }

    /// Adding `extra` leaves the generic rank unchanged.
    fn absorbs(&self, extra: &[VectorField]) -> bool {
        let extra: Vec<VectorField> = extra.iter().filter(|v| !v.is_zero()).cloned().collect();
        if extra.is_empty() {
            return true;
        }
        let r = self.generic_rank();
        if r == self.chart.dim() {
            return true;
        }
        let mut gens = self.gens.clone();
        gens.extend(extra);
        Distribution {
            chart: self.chart.clone(),
            gens,
        }
        .generic_rank()
            == r
    }

    /// Generic inclusion self ⊂ other.
    pub fn is_subset_of(&self, other: &Distribution) -> bool {
        other.absorbs(&self.gens)
    }

    pub fn same_span(&self, other: &Distribution) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Annihilating 1-forms, one channel per generic corank.
    pub fn annihilator(&self) -> Form {
        let ns = self.reduced().null_space();
        let parts: Vec<Form> = ns
            .iter()
            .map(|v| Form::one_form(&self.chart, &normalize_vector(v)))
            .collect();
        if parts.is_empty() {
            Form::empty(&self.chart, 1)
        } else {
            Form::from_channels(&parts).unwrap()
        }
    }

    /// Union of generators.
    pub fn join(&self, other: &Distribution) -> Result<Distribution> {
        ensure_same(&self.chart, &other.chart)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Distribution {
            chart: self.chart.clone(),
            gens,
        })
    }

    /// Involutive over the fraction field.
    pub fn is_involutive(&self) -> bool {
        let mut brackets = Vec::new();
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                brackets.push(self.gens[i].bracket(&self.gens[j]).unwrap());
            }
        }
        self.absorbs(&brackets)
    }

    pub fn lie_flag(&self, cap: usize) -> LieFlag {
        lie_flag(self, cap)
    }

    pub fn render(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.render()).collect()
    }
}

/// Generic null space of a degree-1 form (all channels).
pub fn kernel_of_one_form(z: &Form) -> Result<Distribution> {
    let m = z.one_form_matrix()?;
    let n = z.chart().dim();
    let gens = reduce(m, n)
        .null_space()
        .iter()
        .map(|v| VectorField::new(z.chart(), normalize_vector(v)).unwrap())
        .collect();
    Distribution::new(z.chart(), gens)
}

/// ∩_α ker ω^α over all channels of the given 2-forms.
/// With no forms the result is the whole tangent space.
pub fn kernel_of_two_forms(chart: &ChartRef, forms: &[&Form]) -> Result<Distribution> {
    for f in forms {
        ensure_same(chart, f.chart())?;
    }
    let chart = chart.clone();
    let rows = two_form_rows(forms)?;
    let n = chart.dim();
    let gens = reduce(rows, n)
        .null_space()
        .iter()
        .map(|v| VectorField::new(&chart, normalize_vector(v)).unwrap())
        .collect();
    Distribution::new(&chart, gens)
}

pub fn generic_rank(d: &Distribution) -> usize {
    d.generic_rank()
}

pub fn rank_at_point(d: &Distribution, point: &[BigRational]) -> Result<usize> {
    d.rank_at_point(point)
}

pub fn annihilator(d: &Distribution) -> Form {
    d.annihilator()
}

/// Generic ranks r₀, r₁, … of a Lie flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthVector {
    pub ranks: Vec<usize>,
    /// The last step added nothing.
    pub stabilized: bool,
}

#[derive(Clone, Debug)]
pub struct LieFlag {
    pub levels: Vec<Distribution>,
    pub growth: GrowthVector,
}

impl LieFlag {
    pub fn growth_at(&self, point: &[BigRational]) -> Result<Vec<usize>> {
        self.levels.iter().map(|l| l.rank_at_point(point)).collect()
    }
}

/// D^{ℓ)} = D^{ℓ−1)} + [D, D^{ℓ−1)}], generators kept (deduplicated) so point ranks
/// are exact. Stops when the generic rank repeats, reaches the dimension, or the
/// growth vector has `cap` entries.
pub fn lie_flag(d: &Distribution, cap: usize) -> LieFlag {
    let cap = cap.max(1);
    let dim = d.chart.dim();
    let mut gens: Vec<VectorField> = Vec::new();
    for g in &d.gens {
        if !g.is_zero() && !gens.contains(g) {
            gens.push(g.clone());
        }
    }
    let base = gens.clone();
    let first = Distribution::new(&d.chart, gens.clone()).unwrap();
    let mut growth = vec![first.generic_rank()];
    let mut levels = vec![first];
    let mut fresh = gens.clone();
    let mut stabilized = false;
    while growth.len() < cap && *growth.last().unwrap() < dim {
        let mut added = Vec::new();
        for x in &base {
            for n in &fresh {
                let b = x.bracket(n).unwrap();
                let seen = |v: &VectorField| v == &b || v.add(&b).is_ok_and(|s| s.is_zero());
                if !b.is_zero() && !gens.iter().any(seen) && !added.iter().any(seen) {
                    added.push(b);
                }
            }
        }
        gens.extend(added.iter().cloned());
        let level = Distribution::new(&d.chart, gens.clone()).unwrap();
        let r = level.generic_rank();
        let prev = *growth.last().unwrap();
        growth.push(r);
        levels.push(level);
        if r == prev {
            stabilized = true;
            break;
        }
        fresh = added;
    }
    LieFlag {
        levels,
        growth: GrowthVector {
            ranks: growth,
            stabilized,
        },
    }
}

/// [X, G] ∈ D for every generator G, generically.
pub fn is_lie_symmetry(x: &VectorField, d: &Distribution) -> Result<bool> {
    ensure_same(x.chart(), &d.chart)?;
    let brackets = d.gens.iter().map(|g| x.bracket(g)).collect::<Result<Vec<_>>>()?;
    Ok(d.absorbs(&brackets))
}

#[derive(Clone, Debug)]
pub struct SymmetryCertificate {
    pub field: VectorField,
    pub verdict: bool,
    /// f[α][β] with L_X ζ^α = Σ_β f[α][β] ζ^β.
    pub multiplier: Option<Vec<Vec<ScalarExpr>>>,
}

/// Solves L_X ζ^α = Σ_β f^α_β ζ^β; positive iff every channel is consistent.
pub fn conformal_symmetry_multiplier(x: &VectorField, z: &Form) -> Result<SymmetryCertificate> {
    ensure_same(x.chart(), z.chart())?;
    let zm = z.one_form_matrix()?;
    let k = z.channels();
    let n = z.chart().dim();
    let a: Vec<Vec<ScalarExpr>> = (0..n).map(|i| (0..k).map(|b| zm[b][i].clone()).collect()).collect();
    let lx = z.lie_derivative(x)?;
    let mut f = Vec::with_capacity(k);
    for al in 0..k {
        let rhs: Vec<ScalarExpr> = (0..n).map(|i| lx.comp1(al, i)).collect();
        match linalg::solve(&a, &rhs, k) {
            Solution::Unique(sol) => f.push(sol),
            Solution::Underdetermined(..) => {
                return Err(Error::PreconditionViolated(
                    "channels are not linearly independent".into(),
                ))
            }
            Solution::Inconsistent => {
                return Ok(SymmetryCertificate {
                    field: x.clone(),
                    verdict: false,
                    multiplier: None,
                })
            }
        }
    }
    Ok(SymmetryCertificate {
        field: x.clone(),
        verdict: true,
        multiplier: Some(f),
    })
}

/// dζ restricted to D = ker ζ is non-degenerate (stacked over channels) and D ≠ 0.
pub fn is_maximally_nonintegrable(d: &Distribution) -> Result<bool> {
    let z = d.annihilator();
    let y = kernel_of_one_form(&z)?;
    let r = y.gens.len();
    if r == 0 {
        return Ok(false);
    }
    let dz = z.ext_d();
    let mut rows = Vec::new();
    for a in 0..dz.channels() {
        let ch = dz.channel(a);
        for ya in &y.gens {
            let iy = ch.interior(ya)?;
            rows.push(
                y.gens
                    .iter()
                    .map(|yb| iy.interior(yb).map(|f| f.value(0)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    Ok(linalg::rank(rows, r) == r)
}

/// F ⊂ ker ζ is isotropic iff dζ^α(v, w) = 0 for all generator pairs and channels.
pub fn isotropy_check(f: &Distribution, z: &Form) -> Result<bool> {
    ensure_same(&f.chart, z.chart())?;
    for g in &f.gens {
        if !z.interior(g)?.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "{} does not annihilate the form",
                g.render()
            )));
        }
    }
    let dz = z.ext_d();
    for i in 0..f.gens.len() {
        let iv = dz.interior(&f.gens[i])?;
        for j in i + 1..f.gens.len() {
            if !iv.interior(&f.gens[j])?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Chart;
    use crate::parse::{parse_form, parse_vector_field};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn fraction_free_rank_matches_elimination() {
        let c = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let rows = [
            "x*d/dx + y/(1 + z)*d/dy",
            "x^2*d/dx + x*y/(1 + z)*d/dy",
            "d/dz + (y - x)*d/dx",
            "(y - x)^2*d/dx + (x*y - y^2 + 1)/(1 + z)*d/dy + (y - x)*d/dz",
        ];
        let m: Vec<Vec<ScalarExpr>> = rows
            .iter()
            .map(|s| parse_vector_field(s, &c).unwrap().comps().to_vec())
            .collect();
        for k in 1..=m.len() {
            let sub = m[..k].to_vec();
            assert_eq!(fraction_free_rank(&sub, 3), Some(reduce(sub.clone(), 3).rank()), "first {k} rows");
        }
    }

    #[test]
    fn kernel_of_r6_form() {
        let c = Chart::new("R6", &["x", "y", "p", "q", "z", "t"]).unwrap();
        let eta = parse_form("dz - p*dx; dt - q*dy", &c, Some(2)).unwrap();
        let k = kernel_of_one_form(&eta).unwrap();
        let got: Vec<String> = k.render();
        assert_eq!(
            got,
            vec![
                "d/dx + (p)*d/dz",
                "d/dy + (q)*d/dt",
                "d/dp",
                "d/dq"
            ]
        );
    }

    #[test]
    fn point_rank_of_monomial_field() {
        let c = Chart::new("R1", &["x"]).unwrap();
        let d = Distribution::new(&c, vec![parse_vector_field("x*d/dx", &c).unwrap()]).unwrap();
        assert_eq!(d.rank_at_point(&[q(0)]).unwrap(), 0);
        assert_eq!(d.generic_rank(), 1);
    }

    #[test]
    fn involutive_flag() {
        let c = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let d = Distribution::new(
            &c,
            vec![
                parse_vector_field("d/dx", &c).unwrap(),
                parse_vector_field("d/dy", &c).unwrap(),
            ],
        )
        .unwrap();
        let f = lie_flag(&d, 6);
        assert_eq!(f.growth.ranks, vec![2, 2]);
        assert!(f.growth.stabilized);
    }

    #[test]
    fn full_tangent_annihilator_is_empty() {
        let c = Chart::new("R2", &["x", "y"]).unwrap();
        let d = Distribution::new(
            &c,
            vec![VectorField::basis(&c, 0), VectorField::basis(&c, 1)],
        )
        .unwrap();
        assert_eq!(d.annihilator().channels(), 0);
    }
}
