//! Check kinds, looked up by name at run time.

use indexmap::IndexMap;
use num_rational::BigRational;
use serde::Serialize;

use kontakt_core::dist::{
    conformal_symmetry_multiplier, is_lie_symmetry, is_maximally_nonintegrable, isotropy_check, lie_flag, Distribution,
};
use kontakt_core::geom::{Chart, Form, KVectorField, VectorField};
use kontakt_core::ham::{characteristic_of, hamiltonian_identities, hdw_darboux_solve, lift_cover_hdw, solve_eta_hamiltonian};
use kontakt_core::jet::{characteristic, prolong, tangency_check, JetChart};
use kontakt_core::kcontact::{
    build_presymplectic_cover, build_symplectic_cover, build_symplectization, check_polarisation, compatibility_check,
    construct_from_symmetries, k_symplectic_validate, reeb_frame, validate_at_point, validate_k_contact,
    verify_darboux_form, DarbouxPartition, KContactStructure, Status,
};
use kontakt_core::liegroup::{hdw_invariant_system, invariant_kcontact_check, maurer_cartan, validate_structure, LieAlgebraData};
use kontakt_core::{Error, Result};

use crate::model::{resolve_point, CheckDirective, Model, PointEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Field,
    Form,
    Dist,
    Algebra,
    Chart,
    /// 1-based integer.
    Index,
}

impl ArgKind {
    pub fn noun(self) -> &'static str {
        match self {
            ArgKind::Field => "vector field",
            ArgKind::Form => "form",
            ArgKind::Dist => "distribution",
            ArgKind::Algebra => "algebra",
            ArgKind::Chart => "chart",
            ArgKind::Index => "index",
        }
    }
}

/// Fixed leading arguments, optionally followed by a run of `rest` with at least `min_rest` entries.
#[derive(Clone, Copy, Debug)]
pub struct Signature {
    pub fixed: &'static [ArgKind],
    pub rest: Option<(ArgKind, usize)>,
}

impl Signature {
    pub const fn exact(fixed: &'static [ArgKind]) -> Self {
        Signature { fixed, rest: None }
    }

    pub const fn variadic(fixed: &'static [ArgKind], rest: ArgKind, min: usize) -> Self {
        Signature {
            fixed,
            rest: Some((rest, min)),
        }
    }

    pub fn arity(&self) -> (usize, Option<usize>) {
        match self.rest {
            None => (self.fixed.len(), Some(self.fixed.len())),
            Some((_, m)) => (self.fixed.len() + m, None),
        }
    }

    pub fn kind_at(&self, i: usize) -> ArgKind {
        self.fixed.get(i).copied().unwrap_or_else(|| self.rest.expect("arity checked").0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    GenericPass,
    /// Violated condition id, when the check has numbered conditions.
    Fail(Option<u8>),
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail(None)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Rank {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub ranks: IndexMap<String, Rank>,
    pub witnesses: Vec<String>,
}

impl Outcome {
    fn new(verdict: Verdict) -> Self {
        Outcome {
            verdict,
            ranks: IndexMap::new(),
            witnesses: Vec::new(),
        }
    }

    fn rank(mut self, key: &str, r: usize) -> Self {
        self.ranks.insert(key.into(), Rank::One(r));
        self
    }

    fn ranks(mut self, key: &str, r: Vec<usize>) -> Self {
        self.ranks.insert(key.into(), Rank::Many(r));
        self
    }

    fn witness(mut self, w: String) -> Self {
        self.witnesses.push(w);
        self
    }
}

/// Resolved inputs of one directive.
pub struct Ctx<'a> {
    pub model: &'a Model,
    pub directive: &'a CheckDirective,
    pub at: Option<&'a [PointEntry]>,
    pub max: Option<usize>,
}

fn missing(what: &str, name: &str) -> Error {
    Error::PreconditionViolated(format!("{what} {name} is not declared"))
}

impl<'a> Ctx<'a> {
    fn arg(&self, i: usize) -> &'a str {
        &self.directive.args[i]
    }

    pub fn field(&self, i: usize) -> Result<&'a VectorField> {
        self.model.field(self.arg(i)).ok_or_else(|| missing("vector field", self.arg(i)))
    }

    pub fn form(&self, i: usize) -> Result<&'a Form> {
        self.model.form(self.arg(i)).ok_or_else(|| missing("form", self.arg(i)))
    }

    pub fn dist(&self, i: usize) -> Result<&'a Distribution> {
        self.model.dist(self.arg(i)).ok_or_else(|| missing("distribution", self.arg(i)))
    }

    pub fn algebra(&self, i: usize) -> Result<&'a LieAlgebraData> {
        self.model.algebra(self.arg(i)).ok_or_else(|| missing("algebra", self.arg(i)))
    }

    /// 0-based value of a 1-based index argument.
    pub fn index(&self, i: usize) -> Result<usize> {
        match self.arg(i).parse::<usize>() {
            Ok(v) if v > 0 => Ok(v - 1),
            _ => Err(Error::PreconditionViolated(format!("bad index {}", self.arg(i)))),
        }
    }

    pub fn indices_from(&self, start: usize) -> Result<Vec<usize>> {
        (start..self.directive.args.len()).map(|i| self.index(i)).collect()
    }

    pub fn point(&self, chart: &Chart) -> Result<Option<Vec<BigRational>>> {
        match self.at {
            None => Ok(None),
            Some(p) => resolve_point(p, chart).map(Some).map_err(Error::PreconditionViolated),
        }
    }

    fn jet(&self, x: &VectorField) -> Result<&'a JetChart> {
        self.model
            .jet_for(x.chart())
            .ok_or_else(|| Error::PreconditionViolated(format!("{} is not declared on a jet chart", self.arg(0))))
    }
}

pub trait CheckKind: Send + Sync {
    fn name(&self) -> &'static str;
    fn signature(&self) -> Signature;
    fn summary(&self) -> &'static str;
    fn run(&self, cx: &Ctx<'_>) -> Result<Outcome>;
}

type RunFn = fn(&Ctx<'_>) -> Result<Outcome>;

/// A check backed by a plain function.
struct FnCheck {
    name: &'static str,
    sig: Signature,
    summary: &'static str,
    run: RunFn,
}

impl CheckKind for FnCheck {
    fn name(&self) -> &'static str {
        self.name
    }

    fn signature(&self) -> Signature {
        self.sig
    }

    fn summary(&self) -> &'static str {
        self.summary
    }

    fn run(&self, cx: &Ctx<'_>) -> Result<Outcome> {
        (self.run)(cx)
    }
}

/// The k-contact validation, which also honours `at`.
struct KContactCheck;

impl CheckKind for KContactCheck {
    fn name(&self) -> &'static str {
        "kcontact"
    }

    fn signature(&self) -> Signature {
        Signature::exact(&[ArgKind::Form])
    }

    fn summary(&self) -> &'static str {
        "validate the three k-contact conditions (generic, or at a point with `at`)"
    }

    fn run(&self, cx: &Ctx<'_>) -> Result<Outcome> {
        let eta = cx.form(0)?;
        let rep = validate_k_contact(eta)?;
        let verdict = match cx.point(eta.chart())? {
            Some(p) => {
                let c = validate_at_point(eta, &p)?;
                match c.iter().position(|ok| !ok) {
                    None => Verdict::Pass,
                    Some(i) => Verdict::Fail(Some(i as u8 + 1)),
                }
            }
            None => match rep.status {
                Status::Pass => Verdict::Pass,
                Status::GenericPass => Verdict::GenericPass,
                Status::Fail(c) => Verdict::Fail(Some(c)),
            },
        };
        let mut out = Outcome::new(verdict)
            .rank("ker_eta", rep.ranks.ker_eta)
            .rank("ker_deta", rep.ranks.ker_deta)
            .rank("ker_eta_plus_ker_deta", rep.ranks.union);
        for r in rep.reeb.iter().flatten() {
            out = out.witness(r.render());
        }
        Ok(out)
    }
}

#[derive(Default)]
pub struct Registry {
    kinds: IndexMap<&'static str, Box<dyn CheckKind>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Every built-in kind.
    pub fn standard() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(KContactCheck));
        for c in builtin() {
            r.register(Box::new(c));
        }
        r
    }

    /// Later registrations replace earlier ones of the same name.
    pub fn register(&mut self, k: Box<dyn CheckKind>) {
        self.kinds.insert(k.name(), k);
    }

    pub fn get(&self, name: &str) -> Option<&dyn CheckKind> {
        self.kinds.get(name).map(|b| b.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn CheckKind> {
        self.kinds.values().map(|b| b.as_ref())
    }
}

use ArgKind::{Algebra as A, Dist as D, Field as F, Form as W, Index as I};

fn builtin() -> Vec<FnCheck> {
    let c = |name, sig, summary, run: RunFn| FnCheck { name, sig, summary, run };
    vec![
        c("reeb", Signature::exact(&[W]), "solve for the Reeb frame", reeb),
        c("flag", Signature::exact(&[D]), "Lie flag growth vector (generic, and at a point with `at`)", flag),
        c("rank", Signature::exact(&[D]), "generic rank (and rank at a point with `at`)", rank),
        c("mni", Signature::exact(&[D]), "maximal non-integrability", mni),
        c("involutive", Signature::exact(&[D]), "Frobenius involutivity", involutive),
        c("symmetry", Signature::exact(&[F, D]), "Lie symmetry of a distribution", symmetry),
        c("conformal", Signature::exact(&[F, W]), "conformal symmetry certificate", conformal),
        c("compatible", Signature::exact(&[W, W]), "two forms with proportional volume forms", compatible),
        c("polarisation", Signature::exact(&[W, D]), "polarisation of a k-contact form", polarisation),
        c("darboux", Signature::exact(&[W]), "Darboux normal form", darboux),
        c("isotropic", Signature::exact(&[D, W]), "isotropy of a subdistribution of ker η", isotropic),
        c("ksymplectic", Signature::exact(&[W]), "closed, non-degenerate vector-valued 2-form", ksymplectic),
        c("cover", Signature::exact(&[W]), "symplectic cover self-checks", cover),
        c("presymplectic", Signature::exact(&[W]), "presymplectic cover is closed", presymplectic),
        c("symplectization", Signature::exact(&[W]), "symplectization is k-symplectic", symplectization),
        c(
            "construct",
            Signature::variadic(&[D, W], F, 1),
            "k-contact form from commuting symmetries equals the declared form",
            construct,
        ),
        c("hamiltonian", Signature::exact(&[W, W]), "η-Hamiltonian field of a k-function", hamiltonian),
        c("identities", Signature::exact(&[W, W]), "Hamiltonian identities for a k-function", identities),
        c("hdw", Signature::exact(&[W, W]), "HDW k-vector field in Darboux coordinates, with its cover lift", hdw),
        c("jacobi", Signature::exact(&[A]), "structure constants satisfy Jacobi", jacobi),
        c(
            "invariant",
            Signature::variadic(&[A], I, 1),
            "left-invariant k-contact form on the index set",
            invariant,
        ),
        c("maurer", Signature::exact(&[A, I]), "Maurer–Cartan differential of one coframe element", maurer),
        c(
            "hdw_algebraic",
            Signature::variadic(&[A], I, 1),
            "algebraic part of the invariant HDW system vanishes",
            hdw_algebraic,
        ),
        c("prolong", Signature::exact(&[F, F]), "first prolongation equals the declared field", prolong_check),
        c(
            "characteristic",
            Signature::exact(&[F, W]),
            "characteristic equals the declared k-function",
            characteristic_check,
        ),
        c("tangency", Signature::exact(&[F]), "prolongation preserves the Cartan distribution", tangency),
    ]
}

fn render_fields(fields: &[VectorField]) -> Vec<String> {
    fields.iter().map(|f| f.render()).collect()
}

fn reeb(cx: &Ctx<'_>) -> Result<Outcome> {
    let r = reeb_frame(cx.form(0)?)?;
    let mut out = Outcome::new(Verdict::Pass);
    out.witnesses = render_fields(&r);
    Ok(out)
}

const DEFAULT_FLAG_CAP: usize = 6;

fn flag(cx: &Ctx<'_>) -> Result<Outcome> {
    let d = cx.dist(0)?;
    let f = lie_flag(d, cx.max.unwrap_or(DEFAULT_FLAG_CAP));
    let mut out = Outcome::new(Verdict::Pass).ranks("growth", f.growth.ranks.clone());
    if let Some(p) = cx.point(d.chart())? {
        out = out.ranks("at_point", f.growth_at(&p)?);
    }
    Ok(out)
}

fn rank(cx: &Ctx<'_>) -> Result<Outcome> {
    let d = cx.dist(0)?;
    let mut out = Outcome::new(Verdict::Pass).rank("generic", d.generic_rank());
    if let Some(p) = cx.point(d.chart())? {
        out = out.rank("at_point", d.rank_at_point(&p)?);
    }
    Ok(out)
}

fn mni(cx: &Ctx<'_>) -> Result<Outcome> {
    Ok(Outcome::new(Verdict::of(is_maximally_nonintegrable(cx.dist(0)?)?)))
}

fn involutive(cx: &Ctx<'_>) -> Result<Outcome> {
    let d = cx.dist(0)?;
    Ok(Outcome::new(Verdict::of(d.is_involutive())).rank("generic", d.generic_rank()))
}

fn symmetry(cx: &Ctx<'_>) -> Result<Outcome> {
    Ok(Outcome::new(Verdict::of(is_lie_symmetry(cx.field(0)?, cx.dist(1)?)?)))
}

fn conformal(cx: &Ctx<'_>) -> Result<Outcome> {
    let z = cx.form(1)?;
    let cert = conformal_symmetry_multiplier(cx.field(0)?, z)?;
    let mut out = Outcome::new(Verdict::of(cert.verdict));
    for (a, row) in cert.multiplier.iter().flatten().enumerate() {
        for (b, f) in row.iter().enumerate() {
            if !f.is_zero() {
                out = out.witness(format!("f[{}][{}] = {}", a + 1, b + 1, z.chart().render(f)));
            }
        }
    }
    Ok(out)
}

fn compatible(cx: &Ctx<'_>) -> Result<Outcome> {
    let z1 = cx.form(0)?;
    let rep = compatibility_check(z1, cx.form(1)?)?;
    let mut out = Outcome::new(Verdict::of(rep.compatible));
    if let Some(f) = &rep.factor {
        out = out.witness(z1.chart().render(f));
    }
    Ok(out)
}

fn structure(cx: &Ctx<'_>, i: usize) -> Result<KContactStructure> {
    KContactStructure::new(cx.form(i)?)
}

fn polarisation(cx: &Ctx<'_>) -> Result<Outcome> {
    let st = structure(cx, 0)?;
    Ok(Outcome::new(Verdict::of(check_polarisation(&st, cx.dist(1)?)?)))
}

fn darboux(cx: &Ctx<'_>) -> Result<Outcome> {
    Ok(Outcome::new(Verdict::of(verify_darboux_form(cx.form(0)?, None, None)?)))
}

fn isotropic(cx: &Ctx<'_>) -> Result<Outcome> {
    Ok(Outcome::new(Verdict::of(isotropy_check(cx.dist(0)?, cx.form(1)?)?)))
}

fn ksymplectic(cx: &Ctx<'_>) -> Result<Outcome> {
    Ok(Outcome::new(Verdict::of(k_symplectic_validate(cx.form(0)?)?)))
}

fn cover(cx: &Ctx<'_>) -> Result<Outcome> {
    let c = build_symplectic_cover(&structure(cx, 0)?)?;
    let mut out = Outcome::new(Verdict::of(c.checks.all()));
    for (name, ok) in [
        ("d_theta_is_omega", c.checks.d_theta_is_omega),
        ("theta_semibasic", c.checks.theta_semibasic),
        ("homogeneous", c.checks.homogeneous),
        ("closed", c.checks.closed),
    ] {
        if !ok {
            out = out.witness(format!("{name} fails"));
        }
    }
    Ok(out)
}

fn presymplectic(cx: &Ctx<'_>) -> Result<Outcome> {
    let c = build_presymplectic_cover(&structure(cx, 0)?)?;
    Ok(Outcome::new(Verdict::of(c.closed)).rank("omega", c.rank))
}

fn symplectization(cx: &Ctx<'_>) -> Result<Outcome> {
    Ok(Outcome::new(Verdict::of(build_symplectization(cx.form(0)?)?.valid)))
}

fn construct(cx: &Ctx<'_>) -> Result<Outcome> {
    let d = cx.dist(0)?;
    let eta = cx.form(1)?;
    let s: Vec<VectorField> = (2..cx.directive.args.len()).map(|i| cx.field(i).cloned()).collect::<Result<_>>()?;
    let built = construct_from_symmetries(d, &KVectorField::new(s.clone())?)?;
    let inverts = built == *eta && reeb_frame(&built)? == s;
    Ok(Outcome::new(Verdict::of(inverts)).witness(built.render()))
}

fn hamiltonian(cx: &Ctx<'_>) -> Result<Outcome> {
    let st = structure(cx, 0)?;
    let h = cx.form(1)?;
    let x = solve_eta_hamiltonian(&st, h)?;
    let back = characteristic_of(&st, &x)?;
    Ok(Outcome::new(Verdict::of(&back == h)).witness(x.render()))
}

fn identities(cx: &Ctx<'_>) -> Result<Outcome> {
    let st = structure(cx, 0)?;
    let ids = hamiltonian_identities(&st, cx.form(1)?)?;
    let mut out = Outcome::new(Verdict::of(ids.all()));
    for (name, ok) in [
        ("lie_derivative", ids.lie_derivative),
        ("dissipation", ids.dissipation),
        ("reeb_commutator", ids.reeb_commutator),
    ] {
        if !ok {
            out = out.witness(format!("{name} fails"));
        }
    }
    Ok(out)
}

fn hdw(cx: &Ctx<'_>) -> Result<Outcome> {
    let eta = cx.form(0)?;
    let st = structure(cx, 0)?;
    let h = cx.form(1)?;
    if h.degree() != 0 || h.channels() != 1 {
        return Err(Error::DegreeError("the HDW Hamiltonian must be a single function".into()));
    }
    let partition = DarbouxPartition::infer(eta).ok_or(Error::NotDarboux)?;
    let h = h.value(0);
    let sol = hdw_darboux_solve(&st, &partition, &h)?;
    let cover = build_symplectic_cover(&st)?;
    lift_cover_hdw(&st, &cover, &sol.field, &h)?;
    let mut out = Outcome::new(Verdict::of(sol.residual.is_zero()));
    out.witnesses = render_fields(sol.field.fields());
    Ok(out)
}

fn jacobi(cx: &Ctx<'_>) -> Result<Outcome> {
    let c = cx.algebra(0)?;
    Ok(Outcome::new(Verdict::of(validate_structure(c))).rank("dim", c.dim()))
}

fn invariant(cx: &Ctx<'_>) -> Result<Outcome> {
    let c = cx.algebra(0)?;
    let rep = invariant_kcontact_check(c, &cx.indices_from(1)?)?;
    let mut out = Outcome::new(Verdict::of(rep.passes)).rank("ker_deta", rep.ker_deta.len());
    for a in cx.indices_from(1)? {
        out = out.witness(format!("d eta{} = {}", a + 1, maurer_cartan(c, a).render()));
    }
    Ok(out)
}

fn maurer(cx: &Ctx<'_>) -> Result<Outcome> {
    let c = cx.algebra(0)?;
    let a = cx.index(1)?;
    if a >= c.dim() {
        return Err(Error::PreconditionViolated(format!("index {} outside 1..={}", a + 1, c.dim())));
    }
    Ok(Outcome::new(Verdict::Pass).witness(maurer_cartan(c, a).render()))
}

fn hdw_algebraic(cx: &Ctx<'_>) -> Result<Outcome> {
    let sys = hdw_invariant_system(cx.algebra(0)?, &cx.indices_from(1)?)?;
    Ok(Outcome::new(Verdict::of(sys.algebraic_is_zero()))
        .rank("unknowns", sys.unknowns.len())
        .rank("solutions", sys.solutions.len()))
}

fn prolong_check(cx: &Ctx<'_>) -> Result<Outcome> {
    let x = cx.field(0)?;
    let pr = prolong(cx.jet(x)?, x)?;
    Ok(Outcome::new(Verdict::of(&pr == cx.field(1)?)).witness(pr.render()))
}

fn characteristic_check(cx: &Ctx<'_>) -> Result<Outcome> {
    let x = cx.field(0)?;
    let h = characteristic(cx.jet(x)?, x)?;
    Ok(Outcome::new(Verdict::of(&h == cx.form(1)?)).witness(h.render()))
}

fn tangency(cx: &Ctx<'_>) -> Result<Outcome> {
    let x = cx.field(0)?;
    Ok(Outcome::new(Verdict::of(tangency_check(cx.jet(x)?, x)?)))
}
