mod common;

use common::{build, field, one_form, poly_spec, two_form, PolySpec};
use kontakt_core::geom::{Chart, ChartRef, CoordinateMap, Form};
use proptest::prelude::*;

fn chart(n: usize) -> ChartRef {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    Chart::new(&format!("R{n}"), &names).unwrap()
}

fn specs(n: usize) -> impl Strategy<Value = Vec<PolySpec>> {
    prop::collection::vec(poly_spec(n, 2, 2), n)
}

fn sized() -> impl Strategy<Value = (usize, Vec<PolySpec>, Vec<PolySpec>, Vec<PolySpec>)> {
    (3usize..=6).prop_flat_map(|n| (Just(n), specs(n), specs(n), specs(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes((n, a, b, _) in sized()) {
        let c = chart(n);
        let f = Form::scalar(&c, build(&a[0]));
        prop_assert!(f.ext_d().ext_d().is_zero());
        prop_assert!(one_form(&c, &a).ext_d().ext_d().is_zero());
        prop_assert!(two_form(&c, &b).ext_d().ext_d().is_zero());
    }

    #[test]
    fn cartan_formula((n, a, b, x) in sized()) {
        let c = chart(n);
        let x = field(&c, &x);
        for f in [one_form(&c, &a), two_form(&c, &b)] {
            prop_assert_eq!(f.lie_derivative_direct(&x).unwrap(), f.lie_derivative_cartan(&x).unwrap());
        }
    }

    #[test]
    fn double_interior_vanishes((n, a, b, _) in sized()) {
        let c = chart(n);
        let x = field(&c, &a);
        let w = two_form(&c, &b);
        prop_assert!(w.interior(&x).unwrap().interior(&x).unwrap().is_zero());
        let y = one_form(&c, &a).wedge(&one_form(&c, &b)).unwrap();
        prop_assert!(y.interior(&x).unwrap().interior(&x).unwrap().is_zero());
    }

    #[test]
    fn bracket_jacobi((n, a, b, d) in sized()) {
        let c = chart(n);
        let (x, y, z) = (field(&c, &a), field(&c, &b), field(&c, &d));
        let j = x.bracket(&y.bracket(&z).unwrap()).unwrap()
            .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap()).unwrap()
            .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
        prop_assert!(x.bracket(&y).unwrap().add(&y.bracket(&x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn d_and_wedge((n, a, b, _) in sized()) {
        let c = chart(n);
        let (p, q) = (one_form(&c, &a), one_form(&c, &b));
        let lhs = p.wedge(&q).unwrap().ext_d();
        let rhs = p.ext_d().wedge(&q).unwrap().sub(&p.wedge(&q.ext_d()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_functoriality(f in specs(3), g in specs(3), a in specs(3)) {
        let c = chart(3);
        let fm = CoordinateMap::new(&c, &c, f.iter().map(|s| Some(build(s))).collect()).unwrap();
        let gm = CoordinateMap::new(&c, &c, g.iter().map(|s| Some(build(s))).collect()).unwrap();
        let alpha = one_form(&c, &a);
        let composed = gm.compose(&fm).unwrap().pullback(&alpha).unwrap();
        prop_assert_eq!(composed, fm.pullback(&gm.pullback(&alpha).unwrap()).unwrap());
        prop_assert_eq!(fm.pullback(&alpha.ext_d()).unwrap(), fm.pullback(&alpha).unwrap().ext_d());
        prop_assert_eq!(CoordinateMap::identity(&c).pullback(&alpha).unwrap(), alpha);
    }
}
