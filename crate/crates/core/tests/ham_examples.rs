use kontakt_core::expr::ScalarExpr;
use kontakt_core::geom::{KVectorField, VectorField};
use kontakt_core::ham::*;
use kontakt_core::kcontact::*;
use kontakt_core::parse::{parse_expr, parse_vector_field};
use kontakt_core::Error;

fn k2() -> (CanonicalChart, KContactStructure) {
    let cc = canonical_chart(1, 2).unwrap();
    let st = KContactStructure::new(&cc.eta).unwrap();
    (cc, st)
}

fn kf(cc: &CanonicalChart, vals: &[&str]) -> HamKFunction {
    kfunction(&cc.chart, vals.iter().map(|v| parse_expr(v, &cc.chart).unwrap()).collect())
}

#[test]
fn reeb_fields_are_hamiltonian() {
    let (cc, st) = k2();
    let x = solve_eta_hamiltonian(&st, &kf(&cc, &["-1", "0"])).unwrap();
    assert_eq!(x, st.reeb()[0]);
    let h = characteristic_of(&st, &st.reeb()[1]).unwrap();
    assert_eq!(h, kf(&cc, &["0", "-1"]));
    let x = solve_eta_hamiltonian(&st, &kf(&cc, &["2", "3"])).unwrap();
    let expected = st.reeb()[0].scale(&ScalarExpr::int(-2)).sub(&st.reeb()[1].scale(&ScalarExpr::int(3))).unwrap();
    assert_eq!(x, expected);
    let r = reeb_derivation(&st, &kf(&cc, &["z1", "0"])).unwrap();
    assert_eq!(r, parse_vector_field("z1*d/dz1", &cc.chart).unwrap());
}

#[test]
fn characteristic_round_trip() {
    let (cc, st) = k2();
    let dq = parse_vector_field("d/dq", &cc.chart).unwrap();
    assert_eq!(characteristic_of(&st, &dq).unwrap(), kf(&cc, &["p1", "p2"]));
    let dp = parse_vector_field("d/dp1", &cc.chart).unwrap();
    assert!(matches!(characteristic_of(&st, &dp), Err(Error::NotASymmetry(_))));
    let h = kf(&cc, &["p1 + z1*q", "p2 + q*z2"]);
    let x = solve_eta_hamiltonian(&st, &h).unwrap();
    assert_eq!(characteristic_of(&st, &x).unwrap(), h);
}

#[test]
fn bracket_and_dissipation() {
    let (cc, st) = k2();
    let ra = kf(&cc, &["-1", "0"]);
    let rb = kf(&cc, &["0", "-1"]);
    assert!(eta_bracket(&st, &ra, &rb).unwrap().is_zero());
    let h1 = kf(&cc, &["p1", "p2"]);
    let h2 = kf(&cc, &["z1", "0"]);
    assert!(eta_bracket(&st, &h1, &h1).unwrap().is_zero());
    let b12 = eta_bracket(&st, &h1, &h2).unwrap();
    let b21 = eta_bracket(&st, &h2, &h1).unwrap();
    assert!(b12.add(&b21).unwrap().is_zero());
    assert!(is_dissipated(&st, &h2, &h2).unwrap());
    assert!(is_dissipated(&st, &h2, &kf(&cc, &["0", "1"])).unwrap());
    assert!(!is_dissipated(&st, &h2, &kf(&cc, &["1", "0"])).unwrap());
}

#[test]
fn hdw_solutions() {
    let (cc, st) = k2();
    let zero = hdw_darboux_solve(&st, &cc.partition, &ScalarExpr::zero()).unwrap();
    assert!(zero.field.fields().iter().all(|f| f.is_zero()));
    let c = ScalarExpr::int(5);
    let sol = hdw_darboux_solve(&st, &cc.partition, &c).unwrap();
    for (a, f) in sol.field.fields().iter().enumerate() {
        assert_eq!(f.comp(cc.partition.fibre[a]), &ScalarExpr::frac(-5, 2));
        assert!(f.comp(0).is_zero());
    }
    let h = parse_expr("p1*p2 + z1", &cc.chart).unwrap();
    let sol = hdw_darboux_solve(&st, &cc.partition, &h).unwrap();
    let x = sol.field.fields();
    assert_eq!(x[0].comp(0), &parse_expr("p2", &cc.chart).unwrap());
    assert_eq!(x[1].comp(0), &parse_expr("p1", &cc.chart).unwrap());
    assert_eq!(x[0].comp(1), &parse_expr("-p1/2", &cc.chart).unwrap());
    assert_eq!(x[1].comp(2), &parse_expr("-p1/2", &cc.chart).unwrap());
    assert_eq!(x[0].comp(3), &parse_expr("(p1*p2 - z1)/2", &cc.chart).unwrap());
    assert!(sol.residual.is_zero());
    let zk = KVectorField::new(vec![VectorField::zero(&cc.chart); 2]).unwrap();
    let r = hdw_residual(&st, &zk, &ScalarExpr::one()).unwrap();
    assert!(r.scalar.is_one());
    let reeb = KVectorField::new(st.reeb().to_vec()).unwrap();
    let r = hdw_residual(&st, &reeb, &ScalarExpr::int(-2)).unwrap();
    assert!(r.is_zero());
}

#[test]
fn lifts() {
    let (cc, st) = k2();
    let h = parse_expr("p1*p2 + z1*q", &cc.chart).unwrap();
    let sol = hdw_darboux_solve(&st, &cc.partition, &h).unwrap();
    let cover = build_symplectic_cover(&st).unwrap();
    let lift = lift_cover_hdw(&st, &cover, &sol.field, &h).unwrap();
    assert!(lift.uniqueness_hypothesis);
    let bad = KVectorField::new(vec![VectorField::zero(&cc.chart); 2]).unwrap();
    assert_eq!(lift_cover_hdw(&st, &cover, &bad, &h).unwrap_err(), Error::NotAnHdwSolution);

    let hk = kf(&cc, &["z1", "0"]);
    let x = solve_eta_hamiltonian(&st, &hk).unwrap();
    let pre = build_presymplectic_cover(&st).unwrap();
    let y = lift_presymplectic(&st, &pre, &x, &hk).unwrap();
    let z1 = pre.z[0];
    assert_eq!(y.comp(z1), &ScalarExpr::coord(z1));

    let sym = build_symplectization(st.eta()).unwrap();
    let diag = kf(&cc, &["z1", "z2"]);
    let xd = solve_eta_hamiltonian(&st, &diag).unwrap();
    lift_symplectization(&st, &sym, &xd, &diag).unwrap();
    let off = kf(&cc, &["z2", "0"]);
    let xo = solve_eta_hamiltonian(&st, &off).unwrap();
    assert!(matches!(lift_symplectization(&st, &sym, &xo, &off), Err(Error::HypothesisViolated(_))));
}

#[test]
fn not_hamiltonian() {
    let cc = canonical_chart(1, 2).unwrap();
    let st = KContactStructure::new(&cc.eta).unwrap();
    // h^1 depends on p2, which no field can produce through dη^1
    let h = kf(&cc, &["p2", "0"]);
    assert_eq!(solve_eta_hamiltonian(&st, &h).unwrap_err(), Error::NotHamiltonian);
}
