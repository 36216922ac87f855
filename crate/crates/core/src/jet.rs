//! First-order jet charts J¹(M, E): Cartan distribution, canonical k-contact form,
//! prolongation of projectable fields, characteristics and the tangency identity.

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::geom::{Chart, ChartRef, Form, VectorField};
use crate::kcontact::{DarbouxPartition, KContactStructure};

#[derive(Clone, Debug)]
pub struct JetChart {
    pub m: usize,
    pub k: usize,
    pub chart: ChartRef,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    /// yd[α][i] is the index of y_i^α.
    pub yd: Vec<Vec<usize>>,
    pub eta: Form,
    pub cartan: Distribution,
    pub polarisation: Distribution,
    pub partition: DarbouxPartition,
    pub structure: KContactStructure,
}

/// Default names: x or x{i}, y or y{α}, y{i} (k = 1) or y{α}_{i}.
pub fn build_jet_chart(m: usize, k: usize) -> Result<JetChart> {
    let base: Vec<String> = (1..=m).map(|i| if m == 1 { "x".into() } else { format!("x{i}") }).collect();
    let fibre: Vec<String> = (1..=k).map(|a| if k == 1 { "y".into() } else { format!("y{a}") }).collect();
    build_jet_chart_named(&format!("J1_m{m}_k{k}"), &base, &fibre, |a, i| {
        if k == 1 {
            format!("y{}", i + 1)
        } else {
            format!("y{}_{}", a + 1, i + 1)
        }
    })
}

/// Coordinates are ordered base, fibre, then derivatives (fibre-major).
pub fn build_jet_chart_named<F: Fn(usize, usize) -> String>(name: &str, base: &[String], fibre: &[String], deriv: F) -> Result<JetChart> {
    let (m, k) = (base.len(), fibre.len());
    if m == 0 || k == 0 {
        return Err(Error::InvalidChart("jet charts need m ≥ 1 and k ≥ 1".into()));
    }
    let mut names: Vec<String> = base.to_vec();
    names.extend(fibre.iter().cloned());
    for a in 0..k {
        for i in 0..m {
            names.push(deriv(a, i));
        }
    }
    let chart = Chart::new(name, &names)?;
    let x: Vec<usize> = (0..m).collect();
    let y: Vec<usize> = (m..m + k).collect();
    let yd: Vec<Vec<usize>> = (0..k).map(|a| (0..m).map(|i| m + k + a * m + i).collect()).collect();
    let partition = DarbouxPartition {
        base: x.clone(),
        fibre: y.clone(),
        momenta: yd.clone(),
    };
    let eta = partition.canonical_form(&chart);
    let mut gens: Vec<VectorField> = (0..m)
        .map(|i| {
            let mut v = VectorField::basis(&chart, x[i]);
            for a in 0..k {
                v = v.with_comp(y[a], ScalarExpr::coord(yd[a][i]));
            }
            v
        })
        .collect();
    let polarisation = partition.polarisation(&chart);
    gens.extend(polarisation.gens().iter().cloned());
    let cartan = Distribution::new(&chart, gens)?;
    let structure = KContactStructure::new(&eta)?;
    Ok(JetChart {
        m,
        k,
        chart,
        x,
        y,
        yd,
        eta,
        cartan,
        polarisation,
        partition,
        structure,
    })
}

impl JetChart {
    fn check_projectable(&self, v: &VectorField) -> Result<()> {
        crate::geom::ensure_same(&self.chart, v.chart())?;
        for &i in self.yd.iter().flatten() {
            if !v.comp(i).is_zero() {
                return Err(Error::NotProjectable(format!("component along {}", self.chart.coord_name(i))));
            }
        }
        for &j in self.x.iter().chain(&self.y) {
            for &i in self.yd.iter().flatten() {
                if v.comp(j).depends_on(i) {
                    return Err(Error::NotProjectable(format!(
                        "coefficient of d/d{} depends on {}",
                        self.chart.coord_name(j),
                        self.chart.coord_name(i)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total derivative (∂x^i + Σ_β y_i^β ∂y^β) f.
    fn total(&self, i: usize, f: &ScalarExpr) -> ScalarExpr {
        let mut r = f.diff(self.x[i]);
        for b in 0..self.k {
            r = &r + &(&ScalarExpr::coord(self.yd[b][i]) * &f.diff(self.y[b]));
        }
        r
    }

    fn raw_characteristic(&self, v: &VectorField) -> Vec<ScalarExpr> {
        (0..self.k)
            .map(|a| {
                let mut h = -v.comp(self.y[a]);
                for i in 0..self.m {
                    h = &h + &(&ScalarExpr::coord(self.yd[a][i]) * v.comp(self.x[i]));
                }
                h
            })
            .collect()
    }
}

/// h^α = −ζ^α + Σ_i y_i^α ξ^i, cross-checked against −ι_{pr X}η.
pub fn characteristic(j: &JetChart, v: &VectorField) -> Result<Form> {
    j.check_projectable(v)?;
    let h = Form::function(&j.chart, j.raw_characteristic(v));
    let pr = prolong_unchecked(j, v, &h);
    if !j.eta.interior(&pr)?.add(&h)?.is_zero() {
        return Err(Error::IdentityViolated("characteristic differs from −ι_{pr X}η".into()));
    }
    Ok(h)
}

fn prolong_unchecked(j: &JetChart, v: &VectorField, h: &Form) -> VectorField {
    let hv = h.values();
    let mut pr = v.clone();
    for a in 0..j.k {
        for i in 0..j.m {
            pr = pr.with_comp(j.yd[a][i], -j.total(i, &hv[a]));
        }
    }
    pr
}

/// pr X = X − Σ_{i,α} [(∂x^i + Σ_β y_i^β ∂y^β) h^α] ∂y_i^α; verified η-Hamiltonian.
pub fn prolong(j: &JetChart, v: &VectorField) -> Result<VectorField> {
    j.check_projectable(v)?;
    let h = Form::function(&j.chart, j.raw_characteristic(v));
    let pr = prolong_unchecked(j, v, &h);
    let back = crate::ham::characteristic_of(&j.structure, &pr)?;
    if !back.sub(&h)?.is_zero() {
        return Err(Error::IdentityViolated("prolongation is not generated by its characteristic".into()));
    }
    Ok(pr)
}

/// pr X h^β + Σ_α (R_α h^β) h^α = 0 for every β.
pub fn tangency_check(j: &JetChart, v: &VectorField) -> Result<bool> {
    let h = characteristic(j, v)?;
    let pr = prolong_unchecked(j, v, &h);
    let hv = h.values();
    Ok(hv.iter().all(|hb| {
        let mut r = pr.apply(hb);
        for (a, ha) in hv.iter().enumerate() {
            r = &r + &(&hb.diff(j.y[a]) * ha);
        }
        r.is_zero()
    }))
}

/// A corpus field on E with its expected prolongation and characteristic (DSL strings
/// on the jet chart).
#[derive(Clone, Debug)]
pub struct JetCorpusEntry {
    pub name: String,
    pub field: String,
    pub prolongation: String,
    pub characteristic: Vec<String>,
}

pub const JET_CORPORA: [&str; 2] = ["hamilton_jacobi", "dirac"];

pub fn corpus_chart(name: &str) -> Result<JetChart> {
    match name {
        "hamilton_jacobi" => {
            let base: Vec<String> = (0..4).map(|i| format!("x{i}")).collect();
            build_jet_chart_named(name, &base, &["u".into()], |_, i| format!("u{i}"))
        }
        "dirac" => {
            let base: Vec<String> = (0..4).map(|i| format!("x{i}")).collect();
            let fibre = dirac_fibre();
            build_jet_chart_named(name, &base, &fibre, |a, i| format!("{}_{i}", dirac_fibre()[a]))
        }
        _ => Err(Error::UnknownCorpus(name.to_string())),
    }
}

fn dirac_fibre() -> Vec<String> {
    let mut f: Vec<String> = (1..=4).map(|a| format!("psiR{a}")).collect();
    f.extend((1..=4).map(|a| format!("psiI{a}")));
    f
}

pub fn corpus(name: &str) -> Result<Vec<JetCorpusEntry>> {
    match name {
        "hamilton_jacobi" => Ok(hamilton_jacobi()),
        "dirac" => Ok((0..4)
            .map(|i| JetCorpusEntry {
                name: format!("P{i}"),
                field: format!("d/dx{i}"),
                prolongation: format!("d/dx{i}"),
                characteristic: dirac_fibre().iter().map(|f| format!("{f}_{i}")).collect(),
            })
            .collect()),
        _ => Err(Error::UnknownCorpus(name.to_string())),
    }
}

fn entry(name: String, field: String, extra: String, h: String) -> JetCorpusEntry {
    let prolongation = if extra.is_empty() { field.clone() } else { format!("{field} + {extra}") };
    JetCorpusEntry {
        name,
        field,
        prolongation,
        characteristic: vec![h],
    }
}

fn hamilton_jacobi() -> Vec<JetCorpusEntry> {
    const S2: &str = "(x1^2 + x2^2 + x3^2)";
    const SU: &str = "(u1*x1 + u2*x2 + u3*x3)";
    let sp = [1, 2, 3];
    let mut v = vec![entry("P0".into(), "d/dx0".into(), String::new(), "u0".into())];
    for j in sp {
        v.push(entry(format!("P{j}"), format!("d/dx{j}"), String::new(), format!("u{j}")));
    }
    v.push(entry("Pu".into(), "d/du".into(), String::new(), "-1".into()));
    for (k, j) in [(1, 2), (1, 3), (2, 3)] {
        v.push(entry(
            format!("J{k}{j}"),
            format!("x{k}*d/dx{j} - x{j}*d/dx{k}"),
            format!("(-u{j})*d/du{k} + u{k}*d/du{j}"),
            format!("u{j}*x{k} - u{k}*x{j}"),
        ));
    }
    v.push(entry(
        "D1".into(),
        "x0*d/dx0 + 1/2*x1*d/dx1 + 1/2*x2*d/dx2 + 1/2*x3*d/dx3".into(),
        "(-u0)*d/du0 + (-1/2*u1)*d/du1 + (-1/2*u2)*d/du2 + (-1/2*u3)*d/du3".into(),
        format!("x0*u0 + 1/2*{SU}"),
    ));
    v.push(entry(
        "D2".into(),
        "1/2*x1*d/dx1 + 1/2*x2*d/dx2 + 1/2*x3*d/dx3 + u*d/du".into(),
        "u0*d/du0 + 1/2*u1*d/du1 + 1/2*u2*d/du2 + 1/2*u3*d/du3".into(),
        format!("-u + 1/2*{SU}"),
    ));
    for j in sp {
        v.push(entry(
            format!("G1_{j}"),
            format!("x0*d/dx{j} + 1/2*x{j}*d/du"),
            format!("(-u{j})*d/du0 + 1/2*d/du{j}"),
            format!("x0*u{j} - 1/2*x{j}"),
        ));
    }
    for j in sp {
        let mut extra = format!("(-1/2*x{j}*u0^2 - u0*u{j})*d/du0");
        for i in sp {
            let diag = if i == j { " - 1/2*u*u0" } else { "" };
            extra.push_str(&format!(" + (-1/2*x{j}*u0*u{i} - u{i}*u{j}{diag})*d/du{i}"));
        }
        v.push(entry(
            format!("G2_{j}"),
            format!("1/2*u*x{j}*d/dx0 + u*d/dx{j}"),
            extra,
            format!("u*u{j} + 1/2*u*u0*x{j}"),
        ));
    }
    v.push(entry(
        "A1".into(),
        format!("x0^2*d/dx0 + x0*x1*d/dx1 + x0*x2*d/dx2 + x0*x3*d/dx3 + 1/4*{S2}*d/du"),
        format!(
            "(-2*x0*u0 - {SU})*d/du0 + (1/2*x1 - x0*u1)*d/du1 + (1/2*x2 - x0*u2)*d/du2 + (1/2*x3 - x0*u3)*d/du3"
        ),
        format!("x0^2*u0 + x0*{SU} - 1/4*{S2}"),
    ));
    let mut extra = format!("(2*u*u0 - u0*{SU})*d/du0");
    for i in sp {
        extra.push_str(&format!(" + (u*u{i} - 1/2*u0*x{i} - u{i}*{SU})*d/du{i}"));
    }
    v.push(entry(
        "A2".into(),
        format!("1/4*{S2}*d/dx0 + u*x1*d/dx1 + u*x2*d/dx2 + u*x3*d/dx3 + u^2*d/du"),
        extra,
        format!("-u^2 + 1/4*u0*{S2} + u*{SU}"),
    ));
    for j in sp {
        let mut field = format!("1/2*x0*x{j}*d/dx0");
        for i in sp {
            if i == j {
                field.push_str(&format!(" + (1/2*x{j}^2 + x0*u - 1/4*{S2})*d/dx{j}"));
            } else {
                field.push_str(&format!(" + 1/2*x{j}*x{i}*d/dx{i}"));
            }
        }
        field.push_str(&format!(" + 1/2*x{j}*u*d/du"));
        let mut extra = format!("(-u*u{j} - x0*u0*u{j})*d/du0");
        for i in sp {
            if i == j {
                extra.push_str(&format!(
                    " + (1/2*u - 1/2*x0*u0 - 1/2*{SU} - x0*u{j}^2 + 1/2*x{j}*u{j})*d/du{j}"
                ));
            } else {
                extra.push_str(&format!(" + (-x0*u{i}*u{j} + 1/2*x{i}*u{j})*d/du{i}"));
            }
        }
        v.push(entry(
            format!("K{j}"),
            field,
            extra,
            format!("-1/2*x{j}*u + 1/2*x0*x{j}*u0 + 1/2*x{j}*{SU} + u{j}*(x0*u - 1/4*{S2})"),
        ));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contact_jet() {
        let j = build_jet_chart(1, 1).unwrap();
        assert_eq!(j.chart.coords(), &["x", "y", "y1"]);
        assert_eq!(j.eta.render(), "(-y1)*dx + dy");
        assert_eq!(j.structure.reeb()[0].render(), "d/dy");
    }
}
