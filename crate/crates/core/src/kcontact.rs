//! k-contact validation, Reeb frames, construction from symmetries, polarisations,
//! Darboux verification and the cover/symplectization constructions.

use num_rational::BigRational;

use crate::dist::{kernel_of_one_form, kernel_of_two_forms, rank_at, Distribution};
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::geom::{ensure_same, Chart, ChartRef, Form, KVectorField, VectorField};
use crate::linalg::{self, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    GenericPass,
    /// First failing condition id.
    Fail(u8),
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::GenericPass => "generic-pass",
            Status::Fail(_) => "fail",
        }
    }

    pub fn is_ok(&self) -> bool {
        !matches!(self, Status::Fail(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KContactRanks {
    pub ker_eta: usize,
    pub ker_deta: usize,
    pub union: usize,
}

#[derive(Clone, Debug)]
pub struct KContactReport {
    /// Verdicts for (1) ker η nonzero of corank k, (2) rank ker dη = k, (3) ker η ∩ ker dη = 0.
    pub conditions: [bool; 3],
    pub ranks: KContactRanks,
    pub ker_eta: Distribution,
    pub ker_deta: Distribution,
    pub reeb: Option<Vec<VectorField>>,
    pub status: Status,
}

fn expect_one_form(eta: &Form) -> Result<()> {
    if eta.degree() != 1 {
        return Err(Error::DegreeError(format!("expected a 1-form, got degree {}", eta.degree())));
    }
    Ok(())
}

pub fn validate_k_contact(eta: &Form) -> Result<KContactReport> {
    expect_one_form(eta)?;
    let dim = eta.chart().dim();
    let k = eta.channels();
    let ker_eta = kernel_of_one_form(eta)?;
    let deta = eta.ext_d();
    let ker_deta = kernel_of_two_forms(eta.chart(), &[&deta])?;
    let r1 = ker_eta.generic_rank();
    let r2 = ker_deta.generic_rank();
    let ru = ker_eta.join(&ker_deta)?.generic_rank();
    let conditions = [k >= 1 && r1 == dim - k.min(dim) && r1 > 0, r2 == k, ru == dim];
    let status = match conditions.iter().position(|c| !c) {
        Some(i) => Status::Fail(i as u8 + 1),
        None => Status::GenericPass,
    };
    let reeb = if status.is_ok() { Some(solve_reeb(eta, &deta)?) } else { None };
    Ok(KContactReport {
        conditions,
        ranks: KContactRanks {
            ker_eta: r1,
            ker_deta: r2,
            union: ru,
        },
        ker_eta,
        ker_deta,
        reeb,
        status,
    })
}

/// Re-checks the three conditions with ranks evaluated at a rational point.
pub fn validate_at_point(eta: &Form, point: &[BigRational]) -> Result<[bool; 3]> {
    expect_one_form(eta)?;
    let dim = eta.chart().dim();
    let k = eta.channels();
    let em = eta.one_form_matrix()?;
    let deta = eta.ext_d();
    let dm = if k == 0 { Vec::new() } else { (0..k).map(|a| deta.two_form_matrix(a)).collect::<Result<Vec<_>>>()?.concat() };
    let r_eta = rank_at(&em, dim, point)?;
    let r_d = rank_at(&dm, dim, point)?;
    let mut both = em.clone();
    both.extend(dm.iter().cloned());
    let r_both = rank_at(&both, dim, point)?;
    Ok([r_eta == k && k < dim, dim - r_d == k, r_both == dim])
}

/// One stacked system per α: ι_R η^β = δ_α^β, ι_R dη^β = 0.
fn solve_reeb(eta: &Form, deta: &Form) -> Result<Vec<VectorField>> {
    let n = eta.chart().dim();
    let k = eta.channels();
    let em = eta.one_form_matrix()?;
    let mut a = em.clone();
    for b in 0..k {
        // Rows j of ι_R dη^β: Σ_i R^i M[i][j] = 0, i.e. the transpose rows −M[j].
        a.extend(deta.two_form_matrix(b)?);
    }
    let mut out = Vec::with_capacity(k);
    for al in 0..k {
        let mut rhs = vec![ScalarExpr::zero(); a.len()];
        rhs[al] = ScalarExpr::one();
        match linalg::solve(&a, &rhs, n) {
            Solution::Unique(x) => out.push(VectorField::new(eta.chart(), x)?),
            _ => return Err(Error::NotKContact(format!("Reeb system for channel {} is singular", al + 1))),
        }
    }
    Ok(out)
}

pub fn reeb_frame(eta: &Form) -> Result<Vec<VectorField>> {
    let rep = validate_k_contact(eta)?;
    match rep.reeb {
        Some(r) => Ok(r),
        None => Err(Error::NotKContact(format!(
            "condition {} fails",
            match rep.status {
                Status::Fail(i) => i,
                _ => 0,
            }
        ))),
    }
}

/// A validated co-oriented k-contact form with its Reeb frame.
#[derive(Clone, Debug)]
pub struct KContactStructure {
    eta: Form,
    deta: Form,
    reeb: Vec<VectorField>,
    polarisation: Option<Distribution>,
}

impl KContactStructure {
    pub fn new(eta: &Form) -> Result<Self> {
        let reeb = reeb_frame(eta)?;
        Ok(KContactStructure {
            eta: eta.clone(),
            deta: eta.ext_d(),
            reeb,
            polarisation: None,
        })
    }

    pub fn with_polarisation(mut self, v: Distribution) -> Result<Self> {
        if !check_polarisation(&self, &v)? {
            return Err(Error::PreconditionViolated("not a polarisation".into()));
        }
        self.polarisation = Some(v);
        Ok(self)
    }

    pub fn chart(&self) -> &ChartRef {
        self.eta.chart()
    }

    pub fn k(&self) -> usize {
        self.eta.channels()
    }

    pub fn eta(&self) -> &Form {
        &self.eta
    }

    pub fn deta(&self) -> &Form {
        &self.deta
    }

    pub fn reeb(&self) -> &[VectorField] {
        &self.reeb
    }

    pub fn polarisation(&self) -> Option<&Distribution> {
        self.polarisation.as_ref()
    }
}

/// The unique η vanishing on D with ι_{S_α} η^β = δ_α^β.
pub fn construct_from_symmetries(d: &Distribution, s: &KVectorField) -> Result<Form> {
    let chart = d.chart();
    ensure_same(chart, s.chart())?;
    if !s.is_integrable() {
        return Err(Error::NotASymmetry("the k-vector field is not integrable".into()));
    }
    for (a, sa) in s.fields().iter().enumerate() {
        if !crate::dist::is_lie_symmetry(sa, d)? {
            return Err(Error::NotASymmetry(format!("S{} is not a Lie symmetry of D", a + 1)));
        }
    }
    let n = chart.dim();
    let k = s.k();
    let mut a: Vec<Vec<ScalarExpr>> = d.matrix();
    let nd = a.len();
    a.extend(s.fields().iter().map(|f| f.comps().to_vec()));
    if linalg::rank(a.clone(), n) != n {
        return Err(Error::NotSupplementary);
    }
    let mut chans = Vec::with_capacity(k);
    for b in 0..k {
        let mut rhs = vec![ScalarExpr::zero(); a.len()];
        rhs[nd + b] = ScalarExpr::one();
        match linalg::solve(&a, &rhs, n) {
            Solution::Unique(w) => chans.push(Form::one_form(chart, &w)),
            _ => return Err(Error::NotSupplementary),
        }
    }
    Form::from_channels(&chans)
}

/// dim = n + nk + k, V ⊂ ker η, V involutive, rank V = nk.
pub fn check_polarisation(s: &KContactStructure, v: &Distribution) -> Result<bool> {
    ensure_same(s.chart(), v.chart())?;
    let dim = s.chart().dim();
    let k = s.k();
    if dim < k || (dim - k) % (k + 1) != 0 {
        return Ok(false);
    }
    let n = (dim - k) / (k + 1);
    for g in v.gens() {
        if !s.eta().interior(g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(v.is_involutive() && v.generic_rank() == n * k)
}

/// Coordinates (x^i, y^α, y_i^α) of a Darboux chart, by chart index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxPartition {
    pub base: Vec<usize>,
    pub fibre: Vec<usize>,
    /// momenta[α][i] is the index of y_i^α.
    pub momenta: Vec<Vec<usize>>,
}

impl DarbouxPartition {
    fn check(&self, chart: &ChartRef, k: usize) -> Result<()> {
        let n = self.base.len();
        if self.fibre.len() != k || self.momenta.len() != k || self.momenta.iter().any(|m| m.len() != n) {
            return Err(Error::PartitionError(format!(
                "expected {k} fibre coordinates and {k}×{n} momenta"
            )));
        }
        let mut all: Vec<usize> = self.base.clone();
        all.extend(&self.fibre);
        all.extend(self.momenta.iter().flatten());
        if all.iter().any(|&i| i >= chart.dim()) {
            return Err(Error::PartitionError("index outside the chart".into()));
        }
        let mut sorted = all.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != all.len() || all.len() != chart.dim() {
            return Err(Error::PartitionError("partition must cover each coordinate once".into()));
        }
        Ok(())
    }

    /// Reads the partition off η when every channel has the shape dy − Σ y_i dx^i.
    pub fn infer(eta: &Form) -> Option<DarbouxPartition> {
        if eta.degree() != 1 || eta.channels() == 0 {
            return None;
        }
        let mut base: Option<Vec<usize>> = None;
        let mut fibre = Vec::new();
        let mut momenta = Vec::new();
        for a in 0..eta.channels() {
            let mut y = None;
            let mut pairs = Vec::new();
            for (idx, v) in eta.terms(a) {
                let i = idx[0] as usize;
                if v.is_one() {
                    if y.replace(i).is_some() {
                        return None;
                    }
                    continue;
                }
                let m = (-v).numer().clone();
                if !v.denom().is_one() || m.nterms() != 1 {
                    return None;
                }
                let (mono, c) = m.leading()?;
                let vars: Vec<_> = mono.vars().collect();
                if !c.is_one() || vars.len() != 1 || vars[0].is_transcendental() || mono.total_degree() != 1 {
                    return None;
                }
                pairs.push((i, vars[0].coord as usize));
            }
            fibre.push(y?);
            let b: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            match &base {
                None => base = Some(b),
                Some(prev) if *prev == b => {}
                _ => return None,
            }
            momenta.push(pairs.iter().map(|p| p.1).collect());
        }
        let p = DarbouxPartition {
            base: base?,
            fibre,
            momenta,
        };
        p.check(eta.chart(), eta.channels()).ok()?;
        Some(p)
    }

    pub fn canonical_form(&self, chart: &ChartRef) -> Form {
        let n = chart.dim();
        let chans: Vec<Form> = self
            .fibre
            .iter()
            .zip(&self.momenta)
            .map(|(&y, mom)| {
                let mut c = vec![ScalarExpr::zero(); n];
                c[y] = ScalarExpr::one();
                for (&x, &p) in self.base.iter().zip(mom) {
                    c[x] = -ScalarExpr::coord(p);
                }
                Form::one_form(chart, &c)
            })
            .collect();
        Form::from_channels(&chans).unwrap()
    }

    /// V = ⟨∂y_i^α⟩.
    pub fn polarisation(&self, chart: &ChartRef) -> Distribution {
        let gens = self.momenta.iter().flatten().map(|&i| VectorField::basis(chart, i)).collect();
        Distribution::new(chart, gens).unwrap()
    }
}

/// η equals Σ(dy^α − Σ y_i^α dx^i) ⊗ e_α in the given (or inferred) partition and,
/// when supplied, V = ⟨∂y_i^α⟩.
pub fn verify_darboux_form(eta: &Form, partition: Option<&DarbouxPartition>, v: Option<&Distribution>) -> Result<bool> {
    expect_one_form(eta)?;
    let inferred;
    let p = match partition {
        Some(p) => {
            p.check(eta.chart(), eta.channels())?;
            p
        }
        None => match DarbouxPartition::infer(eta) {
            Some(p) => {
                inferred = p;
                &inferred
            }
            None => return Ok(false),
        },
    };
    if !eta.sub(&p.canonical_form(eta.chart()))?.is_zero() {
        return Ok(false);
    }
    if let Some(v) = v {
        ensure_same(eta.chart(), v.chart())?;
        return Ok(v.same_span(&p.polarisation(eta.chart())));
    }
    Ok(true)
}

/// Canonical polarised chart with η = Σ(dz^α − Σ p_i^α dq^i) ⊗ e_α.
#[derive(Clone, Debug)]
pub struct CanonicalChart {
    pub n: usize,
    pub k: usize,
    pub chart: ChartRef,
    pub eta: Form,
    pub partition: DarbouxPartition,
}

/// Coordinates q^i, then p_i^α (α-major), then z^α. Names drop indices that range
/// over a single value.
pub fn canonical_chart(n: usize, k: usize) -> Result<CanonicalChart> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidChart("n and k must be positive".into()));
    }
    let mut names = Vec::new();
    for i in 1..=n {
        names.push(if n == 1 { "q".to_string() } else { format!("q{i}") });
    }
    for a in 1..=k {
        for i in 1..=n {
            names.push(match (n, k) {
                (1, 1) => "p".to_string(),
                (1, _) => format!("p{a}"),
                (_, 1) => format!("p{i}"),
                _ => format!("p{a}_{i}"),
            });
        }
    }
    for a in 1..=k {
        names.push(if k == 1 { "z".to_string() } else { format!("z{a}") });
    }
    let chart = Chart::new(&format!("canonical_n{n}_k{k}"), &names)?;
    let partition = DarbouxPartition {
        base: (0..n).collect(),
        fibre: (0..k).map(|a| n + n * k + a).collect(),
        momenta: (0..k).map(|a| (0..n).map(|i| n + a * n + i).collect()).collect(),
    };
    let eta = partition.canonical_form(&chart);
    Ok(CanonicalChart {
        n,
        k,
        chart,
        eta,
        partition,
    })
}

/// Ω_ζ = ζ¹ ∧ … ∧ ζ^k as a scalar k-form.
pub fn volume_form(z: &Form) -> Result<Form> {
    expect_one_form(z)?;
    let mut it = z.split().into_iter();
    let mut acc = it.next().ok_or_else(|| Error::PreconditionViolated("no channels".into()))?;
    for c in it {
        acc = acc.wedge(&c)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub compatible: bool,
    /// f with Ω_{ζ₂} = f Ω_{ζ₁}.
    pub factor: Option<ScalarExpr>,
    pub first: KContactReport,
    pub second: KContactReport,
}

pub fn compatibility_check(z1: &Form, z2: &Form) -> Result<CompatibilityReport> {
    expect_one_form(z1)?;
    expect_one_form(z2)?;
    ensure_same(z1.chart(), z2.chart())?;
    if z1.channels() != z2.channels() {
        return Err(Error::ChannelMismatch(z1.channels(), z2.channels()));
    }
    let o1 = volume_form(z1)?;
    let o2 = volume_form(z2)?;
    let factor = o1.terms(0).next().and_then(|(idx, v)| {
        let f = &o2.get(0, idx) / v;
        (!f.is_zero() && o2.sub(&o1.scale(&f)).ok()?.is_zero()).then_some(f)
    });
    Ok(CompatibilityReport {
        compatible: factor.is_some(),
        factor,
        first: validate_k_contact(z1)?,
        second: validate_k_contact(z2)?,
    })
}

/// Closed and ∩ ker ω^α = 0 generically.
pub fn k_symplectic_validate(w: &Form) -> Result<bool> {
    if w.degree() != 2 {
        return Err(Error::DegreeError(format!("expected a 2-form, got degree {}", w.degree())));
    }
    if !w.ext_d().is_zero() {
        return Ok(false);
    }
    Ok(kernel_of_two_forms(w.chart(), &[w])?.generic_rank() == 0)
}

#[derive(Clone, Debug)]
pub struct CoverChecks {
    pub d_theta_is_omega: bool,
    pub theta_semibasic: bool,
    pub homogeneous: bool,
    pub closed: bool,
}

impl CoverChecks {
    pub fn all(&self) -> bool {
        self.d_theta_is_omega && self.theta_semibasic && self.homogeneous && self.closed
    }
}

#[derive(Clone, Debug)]
pub struct SymplecticCover {
    pub chart: ChartRef,
    pub s: usize,
    pub omega: Form,
    pub theta: Form,
    pub delta: VectorField,
    pub checks: CoverChecks,
}

/// ω = ds∧η̂ + s dη̂ on ℝ_× × M, θ = s η̂, Δ = s∂s.
pub fn build_symplectic_cover(st: &KContactStructure) -> Result<SymplecticCover> {
    let (chart, idx) = st.chart().extend(&["s"]);
    let s = idx[0];
    let eta = st.eta().lift(&chart)?;
    let sv = ScalarExpr::coord(s);
    let ds = Form::dx(&chart, s);
    let omega = ds.wedge(&eta)?.add(&eta.ext_d().scale(&sv))?;
    let theta = eta.scale(&sv);
    let delta = VectorField::basis(&chart, s).scale(&sv);
    let checks = CoverChecks {
        d_theta_is_omega: theta.ext_d().sub(&omega)?.is_zero(),
        theta_semibasic: theta.interior(&delta)?.is_zero(),
        homogeneous: omega.lie_derivative(&delta)?.sub(&omega)?.is_zero(),
        closed: omega.ext_d().is_zero(),
    };
    Ok(SymplecticCover {
        chart,
        s,
        omega,
        theta,
        delta,
        checks,
    })
}

fn z_names(k: usize) -> Vec<String> {
    if k == 1 {
        vec!["z".into()]
    } else {
        (1..=k).map(|a| format!("z{a}")).collect()
    }
}

#[derive(Clone, Debug)]
pub struct PresymplecticCover {
    pub chart: ChartRef,
    pub z: Vec<usize>,
    pub omega: Form,
    pub closed: bool,
    pub rank: usize,
}

/// ω = d(Σ z_α η̂^α) on ℝ^k × M.
pub fn build_presymplectic_cover(st: &KContactStructure) -> Result<PresymplecticCover> {
    let (chart, z) = st.chart().extend(&z_names(st.k()));
    let eta = st.eta().lift(&chart)?;
    let zs: Vec<ScalarExpr> = z.iter().map(|&i| ScalarExpr::coord(i)).collect();
    let omega = eta.scale_channels(&zs).channel_sum().ext_d();
    let closed = omega.ext_d().is_zero();
    let rank = linalg::rank(omega.two_form_matrix(0)?, chart.dim());
    Ok(PresymplecticCover {
        chart,
        z,
        omega,
        closed,
        rank,
    })
}

#[derive(Clone, Debug)]
pub struct Symplectization {
    pub chart: ChartRef,
    pub z: Vec<usize>,
    pub omega: Form,
    pub valid: bool,
}

/// ω = Σ d(z^α ζ̂^α) ⊗ e_α on ℝ^k_× × M; z^α are invertible in the fraction field.
pub fn build_symplectization(z: &Form) -> Result<Symplectization> {
    expect_one_form(z)?;
    let (chart, zi) = z.chart().extend(&z_names(z.channels()));
    let zeta = z.lift(&chart)?;
    let zs: Vec<ScalarExpr> = zi.iter().map(|&i| ScalarExpr::coord(i)).collect();
    let omega = zeta.scale_channels(&zs).ext_d();
    let valid = k_symplectic_validate(&omega)?;
    Ok(Symplectization {
        chart,
        z: zi,
        omega,
        valid,
    })
}
