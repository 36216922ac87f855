use std::fmt;

use super::chart::{ensure_same, ChartRef};
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;

#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: ChartRef,
    comps: Vec<ScalarExpr>,
}

impl VectorField {
    pub fn new(chart: &ChartRef, comps: Vec<ScalarExpr>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::DegreeError(format!(
                "vector field has {} components on a {}-dimensional chart",
                comps.len(),
                chart.dim()
            )));
        }
        Ok(VectorField {
            chart: chart.clone(),
            comps,
        })
    }

    pub fn zero(chart: &ChartRef) -> Self {
        VectorField {
            chart: chart.clone(),
            comps: vec![ScalarExpr::zero(); chart.dim()],
        }
    }

    /// ∂/∂(coordinate i).
    pub fn basis(chart: &ChartRef, i: usize) -> Self {
        let mut v = VectorField::zero(chart);
        v.comps[i] = ScalarExpr::one();
        v
    }

    /// Sparse constructor from (coordinate index, component) pairs.
    pub fn from_terms(chart: &ChartRef, terms: &[(usize, ScalarExpr)]) -> Self {
        let mut v = VectorField::zero(chart);
        for (i, c) in terms {
            v.comps[*i] = &v.comps[*i] + c;
        }
        v
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn comps(&self) -> &[ScalarExpr] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &ScalarExpr {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &VectorField) -> Result<VectorField> {
        ensure_same(&self.chart, &o.chart)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, o: &VectorField) -> Result<VectorField> {
        ensure_same(&self.chart, &o.chart)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, f: &ScalarExpr) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(|c| c * f).collect(),
        }
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(|c| -c).collect(),
        }
    }

    /// Directional derivative X(f).
    pub fn apply(&self, f: &ScalarExpr) -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for dep in f.coords() {
            if dep >= self.comps.len() || self.comps[dep].is_zero() {
                continue;
            }
            acc = &acc + &(&self.comps[dep] * &f.diff(dep));
        }
        acc
    }

    pub fn bracket(&self, o: &VectorField) -> Result<VectorField> {
        ensure_same(&self.chart, &o.chart)?;
        let comps = (0..self.comps.len())
            .map(|i| &self.apply(&o.comps[i]) - &o.apply(&self.comps[i]))
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            comps,
        })
    }

    /// The same field on an extension chart (new components zero).
    pub fn lift(&self, ext: &ChartRef) -> Result<VectorField> {
        if !self.chart.is_prefix_of(ext) {
            return Err(Error::ChartMismatch);
        }
        let mut comps = self.comps.clone();
        comps.resize(ext.dim(), ScalarExpr::zero());
        Ok(VectorField {
            chart: ext.clone(),
            comps,
        })
    }

    /// Drops trailing components, landing on a prefix chart.
    pub fn restrict(&self, base: &ChartRef) -> Result<VectorField> {
        if !base.is_prefix_of(&self.chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(VectorField {
            chart: base.clone(),
            comps: self.comps[..base.dim()].to_vec(),
        })
    }

    pub fn with_comp(&self, i: usize, c: ScalarExpr) -> VectorField {
        let mut v = self.clone();
        v.comps[i] = c;
        v
    }

    pub fn render(&self) -> String {
        let terms: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let name = self.chart.coord_name(i);
                if c.is_one() {
                    format!("d/d{name}")
                } else {
                    format!("({})*d/d{name}", self.chart.render(c))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VF({})", self.render())
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// An ordered k-tuple of vector fields on a common chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KVectorField {
    fields: Vec<VectorField>,
}

impl KVectorField {
    pub fn new(fields: Vec<VectorField>) -> Result<Self> {
        let Some(first) = fields.first() else {
            return Err(Error::DegreeError("k-vector field needs k >= 1".into()));
        };
        for f in &fields[1..] {
            ensure_same(first.chart(), f.chart())?;
        }
        Ok(KVectorField { fields })
    }

    pub fn k(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn get(&self, a: usize) -> &VectorField {
        &self.fields[a]
    }

    pub fn chart(&self) -> &ChartRef {
        self.fields[0].chart()
    }

    /// True iff all pairwise brackets vanish.
    pub fn is_integrable(&self) -> bool {
        for a in 0..self.fields.len() {
            for b in a + 1..self.fields.len() {
                match self.fields[a].bracket(&self.fields[b]) {
                    Ok(v) if v.is_zero() => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// Free-function form of [`KVectorField::is_integrable`].
pub fn kvec_is_integrable(x: &KVectorField) -> bool {
    x.is_integrable()
}
