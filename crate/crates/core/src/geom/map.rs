use super::chart::{ensure_same, ChartRef};
use super::form::Form;
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;

/// Smooth map given by target coordinates as expressions on the source chart.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    source: ChartRef,
    target: ChartRef,
    images: Vec<ScalarExpr>,
}

impl CoordinateMap {
    pub fn new(source: &ChartRef, target: &ChartRef, images: Vec<Option<ScalarExpr>>) -> Result<Self> {
        if images.len() != target.dim() {
            return Err(Error::MapIncomplete(format!(
                "{} images for {} target coordinates",
                images.len(),
                target.dim()
            )));
        }
        let mut out = Vec::with_capacity(images.len());
        for (i, im) in images.into_iter().enumerate() {
            out.push(im.ok_or_else(|| Error::MapIncomplete(target.coord_name(i).to_string()))?);
        }
        Ok(CoordinateMap {
            source: source.clone(),
            target: target.clone(),
            images: out,
        })
    }

    /// Map from named images; every target coordinate must be assigned.
    pub fn from_named(source: &ChartRef, target: &ChartRef, named: &[(&str, ScalarExpr)]) -> Result<Self> {
        let mut images = vec![None; target.dim()];
        for (n, e) in named {
            images[target.index_of(n)?] = Some(e.clone());
        }
        CoordinateMap::new(source, target, images)
    }

    pub fn identity(chart: &ChartRef) -> Self {
        CoordinateMap {
            source: chart.clone(),
            target: chart.clone(),
            images: (0..chart.dim()).map(ScalarExpr::coord).collect(),
        }
    }

    pub fn source(&self) -> &ChartRef {
        &self.source
    }

    pub fn target(&self) -> &ChartRef {
        &self.target
    }

    pub fn images(&self) -> &[ScalarExpr] {
        &self.images
    }

    /// `self ∘ g`: first `g`, then `self`.
    pub fn compose(&self, g: &CoordinateMap) -> Result<CoordinateMap> {
        ensure_same(g.target(), &self.source)?;
        let images = self
            .images
            .iter()
            .map(|e| e.substitute(&g.images))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoordinateMap {
            source: g.source.clone(),
            target: self.target.clone(),
            images,
        })
    }

    pub fn pullback(&self, a: &Form) -> Result<Form> {
        ensure_same(a.chart(), &self.target)?;
        let dimg: Vec<Form> = self
            .images
            .iter()
            .map(|e| Form::scalar(&self.source, e.clone()).ext_d())
            .collect();
        let mut chans = Vec::with_capacity(a.channels());
        for ch in 0..a.channels() {
            let mut acc = Form::zero(&self.source, a.degree(), 1);
            for (idx, v) in a.terms(ch) {
                let mut t = Form::scalar(&self.source, v.substitute(&self.images)?);
                for &i in idx.iter() {
                    t = t.wedge(&dimg[i as usize])?;
                }
                acc = acc.add(&t)?;
            }
            chans.push(acc);
        }
        if chans.is_empty() {
            return Ok(Form::empty(&self.source, a.degree()));
        }
        Form::from_channels(&chans)
    }
}

pub fn pullback(map: &CoordinateMap, a: &Form) -> Result<Form> {
    map.pullback(a)
}
