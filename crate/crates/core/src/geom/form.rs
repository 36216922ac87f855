//! ℝ^k-valued differential forms stored channel by channel.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::chart::{ensure_same, ChartRef};
use super::vector::VectorField;
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;

/// Strictly increasing coordinate indices.
pub type MultiIndex = SmallVec<[u16; 4]>;

type Channel = BTreeMap<MultiIndex, ScalarExpr>;

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    chart: ChartRef,
    degree: usize,
    channels: Vec<Channel>,
}

/// Sorts `idx` in place; returns the permutation sign, or 0 on a repeated index.
pub fn sort_sign(idx: &mut [u16]) -> i32 {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return 0;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return 0;
    }
    sign
}

fn add_into(ch: &mut Channel, idx: MultiIndex, v: ScalarExpr) {
    if v.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match ch.entry(idx) {
        Entry::Vacant(e) => {
            e.insert(v);
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + &v;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

impl Form {
    pub fn zero(chart: &ChartRef, degree: usize, channels: usize) -> Self {
        Form {
            chart: chart.clone(),
            degree,
            channels: vec![Channel::new(); channels.max(1)],
        }
    }

    /// A form with zero channels (e.g. the annihilator of the full tangent bundle).
    pub fn empty(chart: &ChartRef, degree: usize) -> Self {
        Form {
            chart: chart.clone(),
            degree,
            channels: Vec::new(),
        }
    }

    /// k-function (degree 0) with one value per channel.
    pub fn function(chart: &ChartRef, values: Vec<ScalarExpr>) -> Self {
        let mut f = Form::empty(chart, 0);
        for v in values {
            let mut ch = Channel::new();
            add_into(&mut ch, MultiIndex::new(), v);
            f.channels.push(ch);
        }
        f
    }

    pub fn scalar(chart: &ChartRef, v: ScalarExpr) -> Self {
        Form::function(chart, vec![v])
    }

    /// The coordinate differential d(x_i).
    pub fn dx(chart: &ChartRef, i: usize) -> Self {
        let mut f = Form::zero(chart, 1, 1);
        f.channels[0].insert(MultiIndex::from_slice(&[i as u16]), ScalarExpr::one());
        f
    }

    /// One-channel 1-form Σ c_i dx_i.
    pub fn one_form(chart: &ChartRef, comps: &[ScalarExpr]) -> Self {
        let mut f = Form::zero(chart, 1, 1);
        for (i, c) in comps.iter().enumerate() {
            add_into(&mut f.channels[0], MultiIndex::from_slice(&[i as u16]), c.clone());
        }
        f
    }

    /// Stacks single-channel forms of equal degree into one multichannel form.
    pub fn from_channels(parts: &[Form]) -> Result<Form> {
        let Some(first) = parts.first() else {
            return Err(Error::ChannelMismatch(0, 0));
        };
        let mut out = Form::empty(&first.chart, first.degree);
        for p in parts {
            ensure_same(&first.chart, &p.chart)?;
            if p.degree != first.degree {
                return Err(Error::DegreeError("channels of different degree".into()));
            }
            out.channels.extend(p.channels.iter().cloned());
        }
        Ok(out)
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn channels(&self) -> usize {
        self.channels.len()
    }

    pub fn channel(&self, a: usize) -> Form {
        Form {
            chart: self.chart.clone(),
            degree: self.degree,
            channels: vec![self.channels[a].clone()],
        }
    }

    pub fn split(&self) -> Vec<Form> {
        (0..self.channels()).map(|a| self.channel(a)).collect()
    }

    pub fn get(&self, a: usize, idx: &[u16]) -> ScalarExpr {
        self.channels[a].get(idx).cloned().unwrap_or_default()
    }

    /// Component of a 1-form channel along dx_i.
    pub fn comp1(&self, a: usize, i: usize) -> ScalarExpr {
        self.get(a, &[i as u16])
    }

    /// Value of a 0-form channel.
    pub fn value(&self, a: usize) -> ScalarExpr {
        self.get(a, &[])
    }

    pub fn values(&self) -> Vec<ScalarExpr> {
        (0..self.channels()).map(|a| self.value(a)).collect()
    }

    pub fn terms(&self, a: usize) -> impl Iterator<Item = (&MultiIndex, &ScalarExpr)> {
        self.channels[a].iter()
    }

    pub fn is_zero(&self) -> bool {
        self.channels.iter().all(|c| c.is_empty())
    }

    pub fn set(&mut self, a: usize, idx: &[u16], v: ScalarExpr) {
        let mut m: MultiIndex = idx.into();
        let s = sort_sign(&mut m);
        assert!(s != 0, "repeated index");
        let v = if s < 0 { -v } else { v };
        self.channels[a].remove(&m);
        add_into(&mut self.channels[a], m, v);
    }

    fn check_compatible(&self, o: &Form) -> Result<()> {
        ensure_same(&self.chart, &o.chart)?;
        if self.degree != o.degree {
            return Err(Error::DegreeError(format!(
                "cannot add forms of degree {} and {}",
                self.degree, o.degree
            )));
        }
        if self.channels() != o.channels() {
            return Err(Error::ChannelMismatch(self.channels(), o.channels()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Form) -> Result<Form> {
        self.check_compatible(o)?;
        let mut r = self.clone();
        for (a, ch) in o.channels.iter().enumerate() {
            for (i, v) in ch {
                add_into(&mut r.channels[a], i.clone(), v.clone());
            }
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Form) -> Result<Form> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Form {
        self.map(|v| -v)
    }

    pub fn scale(&self, f: &ScalarExpr) -> Form {
        if f.is_zero() {
            return Form {
                chart: self.chart.clone(),
                degree: self.degree,
                channels: vec![Channel::new(); self.channels()],
            };
        }
        self.map(|v| v * f)
    }

    /// Multiplies channel α by `f[α]`.
    pub fn scale_channels(&self, f: &[ScalarExpr]) -> Form {
        let mut r = self.clone();
        for (a, ch) in r.channels.iter_mut().enumerate() {
            *ch = ch
                .iter()
                .map(|(i, v)| (i.clone(), v * &f[a]))
                .filter(|(_, v)| !v.is_zero())
                .collect();
        }
        r
    }

    fn map<F: Fn(&ScalarExpr) -> ScalarExpr>(&self, f: F) -> Form {
        Form {
            chart: self.chart.clone(),
            degree: self.degree,
            channels: self
                .channels
                .iter()
                .map(|ch| {
                    ch.iter()
                        .map(|(i, v)| (i.clone(), f(v)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    /// Sum of all channels as a single-channel form.
    pub fn channel_sum(&self) -> Form {
        let mut r = Form::zero(&self.chart, self.degree, 1);
        for ch in &self.channels {
            for (i, v) in ch {
                add_into(&mut r.channels[0], i.clone(), v.clone());
            }
        }
        r
    }

    pub fn wedge(&self, o: &Form) -> Result<Form> {
        ensure_same(&self.chart, &o.chart)?;
        let (ka, kb) = (self.channels(), o.channels());
        let k = match (ka, kb) {
            (1, n) | (n, 1) => n,
            _ => return Err(Error::ChannelMismatch(ka, kb)),
        };
        let mut r = Form::zero(&self.chart, self.degree + o.degree, k);
        for a in 0..k {
            let ca = &self.channels[if ka == 1 { 0 } else { a }];
            let cb = &o.channels[if kb == 1 { 0 } else { a }];
            for (i, u) in ca {
                for (j, v) in cb {
                    let mut idx: MultiIndex = i.iter().chain(j.iter()).copied().collect();
                    let s = sort_sign(&mut idx);
                    if s == 0 {
                        continue;
                    }
                    let p = u * v;
                    add_into(&mut r.channels[a], idx, if s < 0 { -p } else { p });
                }
            }
        }
        Ok(r)
    }

    /// Exterior derivative.
    pub fn ext_d(&self) -> Form {
        let mut r = Form::zero(&self.chart, self.degree + 1, self.channels());
        r.channels.truncate(self.channels());
        for (a, ch) in self.channels.iter().enumerate() {
            for (idx, v) in ch {
                for j in v.coords() {
                    if idx.contains(&(j as u16)) {
                        continue;
                    }
                    let dv = v.diff(j);
                    if dv.is_zero() {
                        continue;
                    }
                    // dx_j ∧ dx_I: move j into place past the smaller indices.
                    let before = idx.iter().filter(|&&i| (i as usize) < j).count();
                    let mut new: MultiIndex = idx.clone();
                    new.insert(before, j as u16);
                    add_into(
                        &mut r.channels[a],
                        new,
                        if before % 2 == 1 { -dv } else { dv },
                    );
                }
            }
        }
        r
    }

    /// ι_X, channelwise.
    pub fn interior(&self, x: &VectorField) -> Result<Form> {
        ensure_same(&self.chart, x.chart())?;
        if self.degree == 0 {
            return Err(Error::DegreeError("interior product of a 0-form".into()));
        }
        let mut r = Form::zero(&self.chart, self.degree - 1, self.channels());
        r.channels.truncate(self.channels());
        for (a, ch) in self.channels.iter().enumerate() {
            for (idx, v) in ch {
                for (k, &i) in idx.iter().enumerate() {
                    let xi = x.comp(i as usize);
                    if xi.is_zero() {
                        continue;
                    }
                    let mut rest = idx.clone();
                    rest.remove(k);
                    let p = v * xi;
                    add_into(&mut r.channels[a], rest, if k % 2 == 1 { -p } else { p });
                }
            }
        }
        Ok(r)
    }

    /// ω(X₁,…,X_p) = ι_{X_p}⋯ι_{X₁}ω, one value per channel.
    pub fn eval(&self, xs: &[&VectorField]) -> Result<Vec<ScalarExpr>> {
        if xs.len() != self.degree {
            return Err(Error::DegreeError(format!(
                "{} arguments for a {}-form",
                xs.len(),
                self.degree
            )));
        }
        let mut f = self.clone();
        for x in xs {
            f = f.interior(x)?;
        }
        Ok(f.values())
    }

    /// Lie derivative by the component formula, cross-checked against d∘ι + ι∘d.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Form> {
        let direct = self.lie_derivative_direct(x)?;
        let cartan = self.lie_derivative_cartan(x)?;
        if direct != cartan {
            return Err(Error::IdentityViolated(
                "Cartan formula disagrees with the component formula".into(),
            ));
        }
        Ok(direct)
    }

    pub fn lie_derivative_cartan(&self, x: &VectorField) -> Result<Form> {
        let di = self.ext_d().interior(x)?;
        if self.degree == 0 {
            return Ok(di);
        }
        self.interior(x)?.ext_d().add(&di)
    }

    /// (L_X w)_J: X(w_J) plus, for each slot, w_J ∂_i X^{J_k} moved to slot index i.
    pub fn lie_derivative_direct(&self, x: &VectorField) -> Result<Form> {
        ensure_same(&self.chart, x.chart())?;
        let mut r = Form::zero(&self.chart, self.degree, self.channels());
        r.channels.truncate(self.channels());
        let n = self.chart.dim();
        for (a, ch) in self.channels.iter().enumerate() {
            for (idx, w) in ch {
                add_into(&mut r.channels[a], idx.clone(), x.apply(w));
                for k in 0..idx.len() {
                    let xk = x.comp(idx[k] as usize);
                    for i in xk.coords() {
                        if i >= n {
                            continue;
                        }
                        let dxk = xk.diff(i);
                        if dxk.is_zero() {
                            continue;
                        }
                        let mut new: MultiIndex = idx.clone();
                        new[k] = i as u16;
                        let s = sort_sign(&mut new);
                        if s == 0 {
                            continue;
                        }
                        let p = w * &dxk;
                        add_into(&mut r.channels[a], new, if s < 0 { -p } else { p });
                    }
                }
            }
        }
        Ok(r)
    }

    /// Re-anchors on an extension chart.
    pub fn lift(&self, ext: &ChartRef) -> Result<Form> {
        if !self.chart.is_prefix_of(ext) {
            return Err(Error::ChartMismatch);
        }
        Ok(Form {
            chart: ext.clone(),
            degree: self.degree,
            channels: self.channels.clone(),
        })
    }

    /// Matrix of a 1-form: one row per channel, one column per coordinate.
    pub fn one_form_matrix(&self) -> Result<Vec<Vec<ScalarExpr>>> {
        if self.degree != 1 {
            return Err(Error::DegreeError("expected a 1-form".into()));
        }
        let n = self.chart.dim();
        Ok((0..self.channels())
            .map(|a| (0..n).map(|i| self.comp1(a, i)).collect())
            .collect())
    }

    /// Antisymmetric matrix M[i][j] = ω^a(∂_i, ∂_j) of a 2-form channel.
    pub fn two_form_matrix(&self, a: usize) -> Result<Vec<Vec<ScalarExpr>>> {
        if self.degree != 2 {
            return Err(Error::DegreeError("expected a 2-form".into()));
        }
        let n = self.chart.dim();
        let mut m = vec![vec![ScalarExpr::zero(); n]; n];
        for (idx, v) in &self.channels[a] {
            let (i, j) = (idx[0] as usize, idx[1] as usize);
            m[i][j] = v.clone();
            m[j][i] = -v;
        }
        Ok(m)
    }

    /// Re-parseable rendering; channels separated by `;`.
    pub fn render(&self) -> String {
        let chs: Vec<String> = self
            .channels
            .iter()
            .map(|ch| {
                if ch.is_empty() {
                    return "0".to_string();
                }
                let terms: Vec<String> = ch
                    .iter()
                    .map(|(idx, v)| {
                        let basis: Vec<String> = idx
                            .iter()
                            .map(|&i| format!("d{}", self.chart.coord_name(i as usize)))
                            .collect();
                        let basis = basis.join("^");
                        let c = self.chart.render(v);
                        match (basis.is_empty(), v.is_one()) {
                            (true, _) => format!("({c})"),
                            (false, true) => basis,
                            (false, false) => format!("({c})*{basis}"),
                        }
                    })
                    .collect();
                terms.join(" + ")
            })
            .collect();
        chs.join("; ")
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self.render())
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
