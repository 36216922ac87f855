use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::display::render;
use crate::expr::ScalarExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    Sin,
    Cos,
    Exp,
}

impl GenKind {
    pub fn name(self) -> &'static str {
        match self {
            GenKind::Sin => "sin",
            GenKind::Cos => "cos",
            GenKind::Exp => "exp",
        }
    }
}

/// A declared transcendental generator `kind(coordinate)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TranscendentalGen {
    pub kind: GenKind,
    pub coord: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    name: String,
    coords: Vec<String>,
    gens: Vec<TranscendentalGen>,
}

pub type ChartRef = Arc<Chart>;

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<ChartRef> {
        let coords: Vec<String> = coords.iter().map(|s| s.as_ref().to_string()).collect();
        if coords.is_empty() {
            return Err(Error::InvalidChart(format!("chart {name} has no coordinates")));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(Error::InvalidChart(format!("duplicate coordinate {c}")));
            }
        }
        Ok(Arc::new(Chart {
            name: name.to_string(),
            coords,
            gens: Vec::new(),
        }))
    }

    /// Same chart with a generator declared; sin and cos are always declared together.
    pub fn with_gen(&self, kind: GenKind, coord: usize) -> Result<ChartRef> {
        if coord >= self.dim() {
            return Err(Error::UnknownCoordinate(format!("#{coord}")));
        }
        let mut c = self.clone();
        let kinds: &[GenKind] = match kind {
            GenKind::Exp => &[GenKind::Exp],
            _ => &[GenKind::Sin, GenKind::Cos],
        };
        for &k in kinds {
            let g = TranscendentalGen { kind: k, coord };
            if !c.gens.contains(&g) {
                c.gens.push(g);
            }
        }
        c.gens.sort();
        Ok(Arc::new(c))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn gens(&self) -> &[TranscendentalGen] {
        &self.gens
    }

    pub fn has_gen(&self, kind: GenKind, coord: usize) -> bool {
        self.gens.contains(&TranscendentalGen { kind, coord })
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.coords
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    pub fn coord_name(&self, i: usize) -> &str {
        &self.coords[i]
    }

    /// Appends coordinates, renaming on clashes (`s` → `s_1`, `s_2`, …).
    /// Existing indices are unchanged, so objects on `self` lift by re-anchoring.
    pub fn extend<S: AsRef<str>>(&self, names: &[S]) -> (ChartRef, Vec<usize>) {
        let mut c = self.clone();
        let mut idx = Vec::new();
        for n in names {
            let base = n.as_ref();
            let mut cand = base.to_string();
            let mut i = 1;
            while c.coords.contains(&cand) {
                cand = format!("{base}_{i}");
                i += 1;
            }
            idx.push(c.coords.len());
            c.coords.push(cand);
        }
        c.name = format!("{}+", self.name);
        (Arc::new(c), idx)
    }

    /// True when `other` extends `self` (same leading coordinates and generators).
    pub fn is_prefix_of(&self, other: &Chart) -> bool {
        other.coords.len() >= self.coords.len()
            && other.coords[..self.coords.len()] == self.coords[..]
            && self.gens.iter().all(|g| other.gens.contains(g))
    }

    pub fn render(&self, e: &ScalarExpr) -> String {
        render(e, &self.coords)
    }
}

pub fn same_chart(a: &ChartRef, b: &ChartRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn ensure_same(a: &ChartRef, b: &ChartRef) -> Result<()> {
    if same_chart(a, b) {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.coords.join(", "))
    }
}
