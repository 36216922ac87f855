use kontakt_core::dist::{is_maximally_nonintegrable, kernel_of_one_form, Distribution};
use kontakt_core::expr::ScalarExpr;
use kontakt_core::geom::{Chart, ChartRef, GenKind, KVectorField, VectorField};
use kontakt_core::jet::build_jet_chart;
use kontakt_core::kcontact::*;
use kontakt_core::parse::{parse_expr, parse_form, parse_vector_field};
use kontakt_core::Error;

fn vf(c: &ChartRef, s: &str) -> VectorField {
    parse_vector_field(s, c).unwrap()
}

fn r6() -> (ChartRef, kontakt_core::geom::Form) {
    let c = Chart::new("R6", &["x", "y", "p", "q", "z", "t"]).unwrap();
    let eta = parse_form("dz - p*dx; dt - q*dy", &c, Some(2)).unwrap();
    (c, eta)
}

#[test]
fn r6_validates_with_reeb() {
    let (c, eta) = r6();
    let rep = validate_k_contact(&eta).unwrap();
    assert_eq!(rep.status, Status::GenericPass);
    assert_eq!(rep.reeb.as_ref().unwrap(), &vec![vf(&c, "d/dz"), vf(&c, "d/dt")]);
    assert_eq!(
        rep.ker_eta.render(),
        vec!["d/dx + (p)*d/dz", "d/dy + (q)*d/dt", "d/dp", "d/dq"]
    );
    let st = KContactStructure::new(&eta).unwrap();
    let any = Distribution::new(&c, vec![vf(&c, "d/dp"), vf(&c, "d/dq")]).unwrap();
    assert!(!check_polarisation(&st, &any).unwrap());
    assert!(!verify_darboux_form(&eta, None, None).unwrap());
}

#[test]
fn exp_rescaling_is_compatible_but_not_k_contact() {
    let c = Chart::new("R4", &["x", "y", "z", "p"]).unwrap().with_gen(GenKind::Exp, 2).unwrap();
    let eta = parse_form("dx - y*dp; dz - p*dy", &c, Some(2)).unwrap();
    let zeta = eta.scale(&parse_expr("exp(z)", &c).unwrap());
    let rep = compatibility_check(&eta, &zeta).unwrap();
    assert!(rep.compatible);
    assert_eq!(rep.factor.unwrap(), parse_expr("exp(z)^2", &c).unwrap());
    assert_eq!(rep.first.status, Status::GenericPass);
    assert_eq!(rep.second.status, Status::Fail(2));
    assert_eq!(rep.second.ranks.ker_deta, 0);
}

#[test]
fn incompatible_pair() {
    let c = Chart::new("R2", &["x", "y"]).unwrap();
    let rep = compatibility_check(&parse_form("dx", &c, None).unwrap(), &parse_form("dy", &c, None).unwrap()).unwrap();
    assert!(!rep.compatible);
}

#[test]
fn jet_reparametrisation_factor() {
    let j = build_jet_chart(1, 1).unwrap();
    let f = parse_expr("1 + x^2", &j.chart).unwrap();
    let rep = compatibility_check(&j.eta, &j.eta.scale(&f)).unwrap();
    assert_eq!(rep.factor.unwrap(), f);
}

#[test]
fn engel_and_goursat_from_symmetries() {
    let c = Chart::new("engel", &["x1", "x2", "x3", "x4"]).unwrap();
    let d = Distribution::new(&c, vec![vf(&c, "d/dx4"), vf(&c, "x4*d/dx3 + x3*d/dx2 + d/dx1")]).unwrap();
    let s = KVectorField::new(vec![vf(&c, "d/dx2"), vf(&c, "d/dx3 + x1*d/dx2")]).unwrap();
    let eta = construct_from_symmetries(&d, &s).unwrap();
    let printed = parse_form("dx2 - (x3 - x4*x1)*dx1 - x1*dx3; dx3 - x4*dx1", &c, Some(2)).unwrap();
    assert_eq!(eta, printed);
    assert_eq!(reeb_frame(&eta).unwrap(), s.fields());

    let g = Chart::new("goursat", &["x1", "x2", "x3", "x4", "x5"]).unwrap();
    let d = Distribution::new(&g, vec![vf(&g, "d/dx5"), vf(&g, "x5*d/dx4 + x4*d/dx3 + x3*d/dx2 + d/dx1")]).unwrap();
    let s = KVectorField::new(vec![
        vf(&g, "d/dx2"),
        vf(&g, "x1*d/dx2 + d/dx3"),
        vf(&g, "1/2*x1^2*d/dx2 + x1*d/dx3 + d/dx4"),
    ])
    .unwrap();
    let eta = construct_from_symmetries(&d, &s).unwrap();
    let printed = parse_form(
        "dx2 - (x3 - x4*x1 + 1/2*x5*x1^2)*dx1 - x1*dx3 + 1/2*x1^2*dx4; dx3 - x1*dx4 + (x1*x5 - x4)*dx1; dx4 - x5*dx1",
        &g,
        Some(3),
    )
    .unwrap();
    assert_eq!(eta, printed);
    assert_eq!(reeb_frame(&eta).unwrap(), s.fields());
}

#[test]
fn construct_errors() {
    let c = Chart::new("R2", &["x", "y"]).unwrap();
    let d = Distribution::new(&c, vec![vf(&c, "d/dx")]).unwrap();
    let eta = construct_from_symmetries(&d, &KVectorField::new(vec![vf(&c, "d/dy")]).unwrap()).unwrap();
    assert_eq!(eta, parse_form("dy", &c, None).unwrap());
    let bad = construct_from_symmetries(&d, &KVectorField::new(vec![vf(&c, "d/dx")]).unwrap());
    assert_eq!(bad.unwrap_err(), Error::NotSupplementary);
    let c3 = Chart::new("R3", &["x", "y", "z"]).unwrap();
    let d = Distribution::new(&c3, vec![vf(&c3, "d/dx"), vf(&c3, "d/dy + x*d/dz")]).unwrap();
    let bad = construct_from_symmetries(&d, &KVectorField::new(vec![vf(&c3, "x*d/dz")]).unwrap());
    assert!(matches!(bad, Err(Error::NotASymmetry(_))));
}

#[test]
fn polarisation_and_darboux() {
    let cc = canonical_chart(2, 2).unwrap();
    let st = KContactStructure::new(&cc.eta).unwrap();
    let v = cc.partition.polarisation(&cc.chart);
    assert!(check_polarisation(&st, &v).unwrap());
    assert!(verify_darboux_form(&cc.eta, Some(&cc.partition), Some(&v)).unwrap());
    assert_eq!(DarbouxPartition::infer(&cc.eta).unwrap(), cc.partition);
    let j = build_jet_chart(2, 3).unwrap();
    assert!(check_polarisation(&j.structure, &j.polarisation).unwrap());
    assert!(verify_darboux_form(&j.eta, None, Some(&j.polarisation)).unwrap());
    let bad = DarbouxPartition {
        base: vec![0],
        fibre: vec![1],
        momenta: vec![vec![1]],
    };
    assert!(matches!(verify_darboux_form(&j.eta, Some(&bad), None), Err(Error::PartitionError(_))));
}

#[test]
fn reeb_of_canonical_and_invariants() {
    for (n, k) in [(1, 1), (1, 3), (2, 2), (3, 1)] {
        let cc = canonical_chart(n, k).unwrap();
        let st = KContactStructure::new(&cc.eta).unwrap();
        for (a, r) in st.reeb().iter().enumerate() {
            assert_eq!(r, &VectorField::basis(&cc.chart, cc.partition.fibre[a]));
            assert!(st.deta().interior(r).unwrap().is_zero());
            assert!(st.eta().lie_derivative(r).unwrap().is_zero());
        }
        let ker = kernel_of_one_form(&cc.eta).unwrap();
        assert!(is_maximally_nonintegrable(&ker).unwrap());
    }
}

#[test]
fn k_symplectic_and_covers() {
    let c3 = Chart::new("R3", &["x", "y", "z"]).unwrap();
    assert!(!k_symplectic_validate(&parse_form("dx^dy", &c3, None).unwrap()).unwrap());

    let cc = canonical_chart(2, 1).unwrap();
    let st = KContactStructure::new(&cc.eta).unwrap();
    let cover = build_symplectic_cover(&st).unwrap();
    assert!(cover.checks.all());
    assert!(k_symplectic_validate(&cover.omega).unwrap());

    let (_, eta) = r6();
    let st = KContactStructure::new(&eta).unwrap();
    let pre = build_presymplectic_cover(&st).unwrap();
    assert!(pre.closed);
    assert_eq!(pre.rank, 8);
    let cover = build_symplectic_cover(&st).unwrap();
    assert!(cover.checks.all());

    let cc = canonical_chart(1, 2).unwrap();
    let sym = build_symplectization(&cc.eta).unwrap();
    assert!(sym.valid);
}

#[test]
fn degenerate_symplectization() {
    for (n, k) in [(1, 2), (2, 2), (1, 3)] {
        let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        for a in 1..=k {
            for i in 1..=n {
                names.push(format!("p{a}_{i}"));
            }
        }
        let c = Chart::new("sum", &names).unwrap();
        let p = |a: usize, i: usize| n + (a % k) * n + i;
        let mut chans = Vec::new();
        for a in 0..k {
            let mut comps = vec![ScalarExpr::zero(); c.dim()];
            comps[p(a + 1, 0)] = ScalarExpr::one();
            for i in 0..n {
                comps[i] = -ScalarExpr::coord(p(a, i));
            }
            chans.push(kontakt_core::geom::Form::one_form(&c, &comps));
        }
        let eta = kontakt_core::geom::Form::from_channels(&chans).unwrap();
        let rep = validate_k_contact(&eta).unwrap();
        assert_eq!(rep.ranks.ker_deta, 0, "n={n} k={k}");
        assert_eq!(rep.status, Status::Fail(2));
        assert!(build_symplectization(&eta).unwrap().valid, "n={n} k={k}");
    }
}
