use kontakt_core::dist::{is_lie_symmetry, lie_flag};
use kontakt_core::expr::ScalarExpr;
use kontakt_core::geom::VectorField;
use kontakt_core::ham::solve_eta_hamiltonian;
use kontakt_core::jet::*;
use kontakt_core::kcontact::{validate_k_contact, Status};
use kontakt_core::parse::{parse_expr, parse_vector_field};
use kontakt_core::Error;

/// First-order prolongation from the total-derivative formula
/// φ_i^α = D_i ζ^α − Σ_l y_l^α D_i ξ^l with D_i = ∂_{x^i} + Σ_β y_i^β ∂_{y^β}.
fn oracle_prolong(j: &JetChart, v: &VectorField) -> VectorField {
    let d = |i: usize, f: &ScalarExpr| {
        let mut r = f.diff(j.x[i]);
        for b in 0..j.k {
            r = &r + &(&ScalarExpr::coord(j.yd[b][i]) * &f.diff(j.y[b]));
        }
        r
    };
    let mut pr = v.clone();
    for a in 0..j.k {
        for i in 0..j.m {
            let mut phi = d(i, v.comp(j.y[a]));
            for l in 0..j.m {
                phi = &phi - &(&ScalarExpr::coord(j.yd[a][l]) * &d(i, v.comp(j.x[l])));
            }
            pr = pr.with_comp(j.yd[a][i], phi);
        }
    }
    pr
}

fn project(j: &JetChart, v: &VectorField) -> VectorField {
    let mut p = v.clone();
    for &i in j.yd.iter().flatten() {
        p = p.with_comp(i, ScalarExpr::zero());
    }
    p
}

#[test]
fn hamilton_jacobi_corpus_round_trip() {
    let j = corpus_chart("hamilton_jacobi").unwrap();
    let entries = corpus("hamilton_jacobi").unwrap();
    assert!(entries.len() >= 20);
    for e in &entries {
        let x = parse_vector_field(&e.field, &j.chart).unwrap();
        let expected = parse_vector_field(&e.prolongation, &j.chart).unwrap();
        assert_eq!(oracle_prolong(&j, &x), expected, "oracle {}", e.name);
        let pr = prolong(&j, &x).unwrap();
        assert_eq!(pr, expected, "{}", e.name);
        let h = characteristic(&j, &x).unwrap();
        assert_eq!(h.value(0), parse_expr(&e.characteristic[0], &j.chart).unwrap(), "{}", e.name);
        assert_eq!(j.eta.interior(&pr).unwrap().neg(), h, "{}", e.name);
        assert_eq!(solve_eta_hamiltonian(&j.structure, &h).unwrap(), pr, "{}", e.name);
        assert!(tangency_check(&j, &x).unwrap(), "{}", e.name);
        assert!(is_lie_symmetry(&pr, &j.cartan).unwrap(), "{}", e.name);
        assert_eq!(project(&j, &pr), x, "{}", e.name);
    }
}

#[test]
fn printed_examples() {
    let j = corpus_chart("hamilton_jacobi").unwrap();
    let du = parse_vector_field("d/du", &j.chart).unwrap();
    assert_eq!(prolong(&j, &du).unwrap(), du);
    assert_eq!(characteristic(&j, &du).unwrap().value(0), ScalarExpr::int(-1));
    let g = parse_vector_field("x0*d/dx2 + 1/2*x2*d/du", &j.chart).unwrap();
    assert_eq!(characteristic(&j, &g).unwrap().value(0), parse_expr("x0*u2 - x2/2", &j.chart).unwrap());
}

#[test]
fn dirac_corpus() {
    let j = corpus_chart("dirac").unwrap();
    assert_eq!(j.chart.dim(), 44);
    assert_eq!((j.m, j.k), (4, 8));
    let entries = corpus("dirac").unwrap();
    assert_eq!(entries.len(), 4);
    for e in &entries {
        let x = parse_vector_field(&e.field, &j.chart).unwrap();
        let pr = prolong(&j, &x).unwrap();
        assert_eq!(pr, parse_vector_field(&e.prolongation, &j.chart).unwrap());
        assert_eq!(pr, oracle_prolong(&j, &x));
        let h = characteristic(&j, &x).unwrap();
        let want: Vec<ScalarExpr> = e.characteristic.iter().map(|s| parse_expr(s, &j.chart).unwrap()).collect();
        assert_eq!(h.values(), want);
        assert!(tangency_check(&j, &x).unwrap());
    }
    assert!(matches!(corpus("heat"), Err(Error::UnknownCorpus(_))));
}

#[test]
fn jet_charts_are_k_contact() {
    for (m, k) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
        let j = build_jet_chart(m, k).unwrap();
        assert_eq!(j.chart.dim(), m + k + m * k);
        let rep = validate_k_contact(&j.eta).unwrap();
        assert!(rep.status.is_ok());
        assert_ne!(rep.status, Status::Fail(1));
        let reeb: Vec<VectorField> = j.y.iter().map(|&i| VectorField::basis(&j.chart, i)).collect();
        assert_eq!(rep.reeb.unwrap(), reeb);
        let flag = lie_flag(&j.cartan, 4);
        assert_eq!(*flag.growth.ranks.last().unwrap(), m + k + m * k, "m={m} k={k}");
        let vy = VectorField::basis(&j.chart, j.y[0]);
        assert!(tangency_check(&j, &vy).unwrap());
    }
}

#[test]
fn linearity_and_brackets() {
    let j = corpus_chart("hamilton_jacobi").unwrap();
    let entries = corpus("hamilton_jacobi").unwrap();
    let fields: Vec<VectorField> = entries.iter().map(|e| parse_vector_field(&e.field, &j.chart).unwrap()).collect();
    let two = ScalarExpr::int(2);
    let third = ScalarExpr::frac(-1, 3);
    for w in fields.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let combo = a.scale(&two).add(&b.scale(&third)).unwrap();
        let lhs = prolong(&j, &combo).unwrap();
        let rhs = prolong(&j, a).unwrap().scale(&two).add(&prolong(&j, b).unwrap().scale(&third)).unwrap();
        assert_eq!(lhs, rhs);
        let br = a.bracket(b).unwrap();
        let pb = prolong(&j, a).unwrap().bracket(&prolong(&j, b).unwrap()).unwrap();
        assert_eq!(prolong(&j, &br).unwrap(), pb);
    }
}

#[test]
fn non_projectable_is_rejected() {
    let j = build_jet_chart(1, 1).unwrap();
    let bad = parse_vector_field("y1*d/dx", &j.chart).unwrap();
    assert!(matches!(prolong(&j, &bad), Err(Error::NotProjectable(_))));
    let bad = parse_vector_field("d/dy1", &j.chart).unwrap();
    assert!(matches!(characteristic(&j, &bad), Err(Error::NotProjectable(_))));
}
