//! η-Hamiltonian vector fields, the bracket, dissipated quantities, HDW k-vector
//! fields and the Hamiltonian lifts to covers.

use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::geom::{ensure_same, ChartRef, Form, KVectorField, VectorField};
use crate::kcontact::{
    verify_darboux_form, DarbouxPartition, KContactStructure, PresymplecticCover, SymplecticCover, Symplectization,
};
use crate::linalg::{self, Solution};

/// A k-function h = Σ h^α ⊗ e_α, stored as a degree-0 form.
pub type HamKFunction = Form;

pub fn kfunction(chart: &ChartRef, values: Vec<ScalarExpr>) -> HamKFunction {
    Form::function(chart, values)
}

fn check_kfunction(st: &KContactStructure, h: &Form) -> Result<()> {
    ensure_same(st.chart(), h.chart())?;
    if h.degree() != 0 {
        return Err(Error::DegreeError("expected a k-function".into()));
    }
    if h.channels() != st.k() {
        return Err(Error::ChannelMismatch(h.channels(), st.k()));
    }
    Ok(())
}

/// R_β applied to every channel of h.
fn reeb_apply(st: &KContactStructure, b: usize, h: &Form) -> Vec<ScalarExpr> {
    h.values().iter().map(|v| st.reeb()[b].apply(v)).collect()
}

/// Solves ι_X η^α = −h^α, ι_X dη^α = dh^α − Σ_β (R_β h^α) η^β.
pub fn solve_eta_hamiltonian(st: &KContactStructure, h: &HamKFunction) -> Result<VectorField> {
    check_kfunction(st, h)?;
    let n = st.chart().dim();
    let k = st.k();
    let em = st.eta().one_form_matrix()?;
    let mut a = em.clone();
    let mut b: Vec<ScalarExpr> = h.values().iter().map(|v| -v).collect();
    let hv = h.values();
    for al in 0..k {
        // ι_X dη^α has j-component Σ_i X^i M[i][j] = −Σ_i M[j][i] X^i.
        let m = st.deta().two_form_matrix(al)?;
        for j in 0..n {
            a.push(m[j].iter().map(|x| -x).collect());
            let mut r = hv[al].diff(j);
            for be in 0..k {
                r = &r - &(&st.reeb()[be].apply(&hv[al]) * &em[be][j]);
            }
            b.push(r);
        }
    }
    match linalg::solve(&a, &b, n) {
        Solution::Unique(x) => VectorField::new(st.chart(), x),
        Solution::Underdetermined(..) => Err(Error::NotKContact("ker η ∩ ker dη is nonzero".into())),
        Solution::Inconsistent => Err(Error::NotHamiltonian),
    }
}

/// h = −ι_X η, after checking X is a conformal symmetry of η.
pub fn characteristic_of(st: &KContactStructure, x: &VectorField) -> Result<HamKFunction> {
    let cert = crate::dist::conformal_symmetry_multiplier(x, st.eta())?;
    if !cert.verdict {
        return Err(Error::NotASymmetry(x.render()));
    }
    Ok(st.eta().interior(x)?.neg())
}

/// R_h = Σ_α h^α R_α.
pub fn reeb_derivation(st: &KContactStructure, h: &HamKFunction) -> Result<VectorField> {
    check_kfunction(st, h)?;
    let mut r = VectorField::zero(st.chart());
    for (v, ra) in h.values().iter().zip(st.reeb()) {
        r = r.add(&ra.scale(v))?;
    }
    Ok(r)
}

/// Channelwise (R_f h)^α = Σ_β f^β R_β h^α.
fn reeb_derivative_of(st: &KContactStructure, f: &Form, h: &Form) -> Result<Vec<ScalarExpr>> {
    let rf = reeb_derivation(st, f)?;
    Ok(h.values().iter().map(|v| rf.apply(v)).collect())
}

/// {h₁,h₂} = η([X₁,X₂]), cross-checked against −X₁h₂ − R_{h₂}h₁.
pub fn eta_bracket(st: &KContactStructure, h1: &HamKFunction, h2: &HamKFunction) -> Result<HamKFunction> {
    let x1 = solve_eta_hamiltonian(st, h1)?;
    let x2 = solve_eta_hamiltonian(st, h2)?;
    let via_bracket = st.eta().interior(&x1.bracket(&x2)?)?;
    let r = reeb_derivative_of(st, h2, h1)?;
    let closed: Vec<ScalarExpr> = h2
        .values()
        .iter()
        .zip(&r)
        .map(|(v, rv)| -&(&x1.apply(v) + rv))
        .collect();
    let closed = kfunction(st.chart(), closed);
    if !via_bracket.sub(&closed)?.is_zero() {
        return Err(Error::IdentityViolated("bracket formulas disagree".into()));
    }
    Ok(closed)
}

/// X_h f + R_f h = 0 channelwise; cross-checked against {h,f} = 0.
pub fn is_dissipated(st: &KContactStructure, h: &HamKFunction, f: &HamKFunction) -> Result<bool> {
    let xh = solve_eta_hamiltonian(st, h)?;
    solve_eta_hamiltonian(st, f)?;
    let r = reeb_derivative_of(st, f, h)?;
    let direct = f.values().iter().zip(&r).all(|(v, rv)| (&xh.apply(v) + rv).is_zero());
    let via_bracket = eta_bracket(st, h, f)?.is_zero();
    if direct != via_bracket {
        return Err(Error::IdentityViolated("dissipation and bracket disagree".into()));
    }
    Ok(direct)
}

#[derive(Clone, Debug)]
pub struct HamiltonianIdentities {
    /// L_{X_h}η^α + Σ_β (R_β h^α) η^β = 0.
    pub lie_derivative: bool,
    /// X_h h + R_h h = 0.
    pub dissipation: bool,
    /// [X_h, R_β] + X_{R_β h} = 0 for each β.
    pub reeb_commutator: bool,
}

impl HamiltonianIdentities {
    pub fn all(&self) -> bool {
        self.lie_derivative && self.dissipation && self.reeb_commutator
    }
}

pub fn hamiltonian_identities(st: &KContactStructure, h: &HamKFunction) -> Result<HamiltonianIdentities> {
    let x = solve_eta_hamiltonian(st, h)?;
    let k = st.k();
    let lx = st.eta().lie_derivative(&x)?;
    let em = st.eta().split();
    let hv = h.values();
    let mut corr = Vec::with_capacity(k);
    for v in &hv {
        let mut c = Form::zero(st.chart(), 1, 1);
        for (b, eb) in em.iter().enumerate() {
            c = c.add(&eb.scale(&st.reeb()[b].apply(v)))?;
        }
        corr.push(c);
    }
    let lie_derivative = lx.add(&Form::from_channels(&corr)?)?.is_zero();
    let r = reeb_derivative_of(st, h, h)?;
    let dissipation = h.values().iter().zip(&r).all(|(v, rv)| (&x.apply(v) + rv).is_zero());
    let mut reeb_commutator = true;
    for b in 0..k {
        let rbh = kfunction(st.chart(), reeb_apply(st, b, h));
        let xr = solve_eta_hamiltonian(st, &rbh)?;
        if !x.bracket(&st.reeb()[b])?.add(&xr)?.is_zero() {
            reeb_commutator = false;
        }
    }
    Ok(HamiltonianIdentities {
        lie_derivative,
        dissipation,
        reeb_commutator,
    })
}

#[derive(Clone, Debug)]
pub struct HdwResidual {
    /// Σ ι_{X_α} dη^α − dh + Σ (R_α h) η^α.
    pub form: Form,
    /// Σ ι_{X_α} η^α + h.
    pub scalar: ScalarExpr,
}

impl HdwResidual {
    pub fn is_zero(&self) -> bool {
        self.form.is_zero() && self.scalar.is_zero()
    }
}

pub fn hdw_residual(st: &KContactStructure, x: &KVectorField, h: &ScalarExpr) -> Result<HdwResidual> {
    ensure_same(st.chart(), x.chart())?;
    if x.k() != st.k() {
        return Err(Error::ChannelMismatch(x.k(), st.k()));
    }
    let chart = st.chart();
    let dh = Form::scalar(chart, h.clone()).ext_d();
    let mut form = dh.neg();
    let mut scalar = h.clone();
    for (a, xa) in x.fields().iter().enumerate() {
        form = form.add(&st.deta().channel(a).interior(xa)?)?;
        form = form.add(&st.eta().channel(a).scale(&st.reeb()[a].apply(h)))?;
        scalar = &scalar + &st.eta().channel(a).interior(xa)?.value(0);
    }
    Ok(HdwResidual { form, scalar })
}

#[derive(Clone, Debug)]
pub struct HdwSolution {
    pub field: KVectorField,
    pub gauge: &'static str,
    pub residual: HdwResidual,
}

/// Uniform-diagonal gauge solution in Darboux coordinates (q^i, p_i^α, z^α).
pub fn hdw_darboux_solve(st: &KContactStructure, partition: &DarbouxPartition, h: &ScalarExpr) -> Result<HdwSolution> {
    if !verify_darboux_form(st.eta(), Some(partition), None)? {
        return Err(Error::NotDarboux);
    }
    let chart = st.chart();
    let k = st.k();
    let kk = ScalarExpr::frac(1, k as i64);
    let mut fields = vec![VectorField::zero(chart); k];
    for (i, &q) in partition.base.iter().enumerate() {
        let mut trace = h.diff(q);
        for (a, &z) in partition.fibre.iter().enumerate() {
            trace = &trace + &(&ScalarExpr::coord(partition.momenta[a][i]) * &h.diff(z));
        }
        let diag = -&(&trace * &kk);
        for b in 0..k {
            let p = partition.momenta[b][i];
            fields[b] = fields[b].with_comp(q, h.diff(p)).with_comp(p, diag.clone());
        }
    }
    let mut ztrace = -h;
    for mom in &partition.momenta {
        for &p in mom {
            ztrace = &ztrace + &(&ScalarExpr::coord(p) * &h.diff(p));
        }
    }
    let zdiag = &ztrace * &kk;
    for (a, &z) in partition.fibre.iter().enumerate() {
        fields[a] = fields[a].with_comp(z, zdiag.clone());
    }
    let field = KVectorField::new(fields)?;
    let residual = hdw_residual(st, &field, h)?;
    if !residual.is_zero() {
        return Err(Error::IdentityViolated("HDW residual of the Darboux solution".into()));
    }
    Ok(HdwSolution {
        field,
        gauge: "uniform-diagonal",
        residual,
    })
}

#[derive(Clone, Debug)]
pub struct CoverLift {
    pub field: KVectorField,
    /// ∩_{β≠α} ker dη^β ⊄ ker dη^α for every α.
    pub uniqueness_hypothesis: bool,
}

/// X̃_α = s(R_α h)∂s + X_α, checked by Σ ι_{X̃_α} ω^α = d(s ĥ).
pub fn lift_cover_hdw(st: &KContactStructure, cover: &SymplecticCover, x: &KVectorField, h: &ScalarExpr) -> Result<CoverLift> {
    if !hdw_residual(st, x, h)?.is_zero() {
        return Err(Error::NotAnHdwSolution);
    }
    let c = &cover.chart;
    let s = ScalarExpr::coord(cover.s);
    let mut fields = Vec::with_capacity(st.k());
    let mut lhs = Form::zero(c, 1, 1);
    for (a, xa) in x.fields().iter().enumerate() {
        let f = xa.lift(c)?.with_comp(cover.s, &s * &st.reeb()[a].apply(h));
        lhs = lhs.add(&cover.omega.channel(a).interior(&f)?)?;
        fields.push(f);
    }
    let rhs = Form::scalar(c, &s * h).ext_d();
    if !lhs.sub(&rhs)?.is_zero() {
        return Err(Error::IdentityViolated("cover lift identity".into()));
    }
    Ok(CoverLift {
        field: KVectorField::new(fields)?,
        uniqueness_hypothesis: uniqueness_hypothesis(st)?,
    })
}

pub fn uniqueness_hypothesis(st: &KContactStructure) -> Result<bool> {
    let d = st.deta().split();
    for a in 0..st.k() {
        let others: Vec<&Form> = d.iter().enumerate().filter(|(b, _)| *b != a).map(|(_, f)| f).collect();
        let ker = crate::dist::kernel_of_two_forms(st.chart(), &others)?;
        let mut escapes = false;
        for v in ker.gens() {
            if !d[a].interior(v)?.is_zero() {
                escapes = true;
                break;
            }
        }
        if !escapes {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Y = Σ_α (Σ_β z_β R_α h^β) ∂z_α + X, checked by ι_Y ω = d(Σ z_α ĥ^α).
pub fn lift_presymplectic(st: &KContactStructure, cover: &PresymplecticCover, x: &VectorField, h: &HamKFunction) -> Result<VectorField> {
    let xh = solve_eta_hamiltonian(st, h)?;
    if !xh.sub(x)?.is_zero() {
        return Err(Error::NotHamiltonian);
    }
    let c = &cover.chart;
    let zs: Vec<ScalarExpr> = cover.z.iter().map(|&i| ScalarExpr::coord(i)).collect();
    let mut y = x.lift(c)?;
    for a in 0..st.k() {
        let ra = reeb_apply(st, a, h);
        let comp: ScalarExpr = zs.iter().zip(&ra).map(|(z, r)| z * r).sum();
        y = y.with_comp(cover.z[a], comp);
    }
    let hz: ScalarExpr = zs.iter().zip(h.values()).map(|(z, v)| z * &v).sum();
    let rhs = Form::scalar(c, hz).ext_d();
    if !cover.omega.interior(&y)?.sub(&rhs)?.is_zero() {
        return Err(Error::IdentityViolated("presymplectic lift identity".into()));
    }
    Ok(y)
}

/// X̃ = Σ_α z^α (R_α h^α) ∂z^α + X, checked channelwise by ι_X̃ ω^α = d(z^α ĥ^α).
pub fn lift_symplectization(st: &KContactStructure, sym: &Symplectization, x: &VectorField, h: &HamKFunction) -> Result<VectorField> {
    let xh = solve_eta_hamiltonian(st, h)?;
    if !xh.sub(x)?.is_zero() {
        return Err(Error::NotHamiltonian);
    }
    let k = st.k();
    let hv = h.values();
    for a in 0..k {
        for b in 0..k {
            if a != b && !st.reeb()[b].apply(&hv[a]).is_zero() {
                return Err(Error::HypothesisViolated(format!("R{} h{} ≠ 0", b + 1, a + 1)));
            }
        }
    }
    let c = &sym.chart;
    let mut y = x.lift(c)?;
    let mut rhs = Vec::with_capacity(k);
    for a in 0..k {
        let z = ScalarExpr::coord(sym.z[a]);
        y = y.with_comp(sym.z[a], &z * &st.reeb()[a].apply(&hv[a]));
        rhs.push(Form::scalar(c, &z * &hv[a]).ext_d());
    }
    let rhs = Form::from_channels(&rhs)?;
    if !sym.omega.interior(&y)?.sub(&rhs)?.is_zero() {
        return Err(Error::IdentityViolated("symplectization lift identity".into()));
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcontact::canonical_chart;

    #[test]
    fn canonical_example_field() {
        let c = canonical_chart(1, 2).unwrap();
        let st = KContactStructure::new(&c.eta).unwrap();
        let h = kfunction(&c.chart, vec![ScalarExpr::coord(3), ScalarExpr::zero()]);
        let x = solve_eta_hamiltonian(&st, &h).unwrap();
        assert_eq!(x.render(), "(-p1)*d/dp1 + (-z1)*d/dz1");
        assert!(hamiltonian_identities(&st, &h).unwrap().all());
    }
}
