mod common;

use common::{build_on, poly_spec, PolySpec};
use kontakt_core::expr::ScalarExpr;
use kontakt_core::ham::*;
use kontakt_core::kcontact::{canonical_chart, CanonicalChart, KContactStructure};
use proptest::prelude::*;

/// h^α = −ζ^α + Σ_i p_i^α ξ^i for ξ, ζ polynomial in (q, z); these are exactly the
/// characteristics of point symmetries, hence η-Hamiltonian.
fn hamiltonian(cc: &CanonicalChart, xi: &[PolySpec], zeta: &[PolySpec]) -> HamKFunction {
    let p = &cc.partition;
    let vars: Vec<usize> = p.base.iter().chain(&p.fibre).copied().collect();
    let xi: Vec<ScalarExpr> = xi.iter().map(|s| build_on(s, &vars)).collect();
    let vals = (0..cc.k)
        .map(|a| {
            let mut h = -build_on(&zeta[a], &vars);
            for (i, x) in xi.iter().enumerate() {
                h = &h + &(&ScalarExpr::coord(p.momenta[a][i]) * x);
            }
            h
        })
        .collect();
    kfunction(&cc.chart, vals)
}

type Gen = (Vec<PolySpec>, Vec<PolySpec>);

fn gen(n: usize, k: usize) -> impl Strategy<Value = Gen> {
    (
        prop::collection::vec(poly_spec(n + k, 2, 1), n),
        prop::collection::vec(poly_spec(n + k, 2, 1), k),
    )
}

fn triple() -> impl Strategy<Value = (usize, usize, Gen, Gen, Gen)> {
    (1usize..=2, 1usize..=3).prop_flat_map(|(n, k)| (Just(n), Just(k), gen(n, k), gen(n, k), gen(n, k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hamiltonian_calculus((n, k, a, b, c) in triple()) {
        let cc = canonical_chart(n, k).unwrap();
        let st = KContactStructure::new(&cc.eta).unwrap();
        let h1 = hamiltonian(&cc, &a.0, &a.1);
        let h2 = hamiltonian(&cc, &b.0, &b.1);
        let h3 = hamiltonian(&cc, &c.0, &c.1);
        prop_assert!(hamiltonian_identities(&st, &h1).unwrap().all());

        let x1 = solve_eta_hamiltonian(&st, &h1).unwrap();
        let x2 = solve_eta_hamiltonian(&st, &h2).unwrap();
        prop_assert_eq!(characteristic_of(&st, &x1).unwrap(), h1.clone());

        let b12 = eta_bracket(&st, &h1, &h2).unwrap();
        prop_assert!(b12.add(&eta_bracket(&st, &h2, &h1).unwrap()).unwrap().is_zero());
        let xb = solve_eta_hamiltonian(&st, &b12).unwrap();
        prop_assert!(xb.add(&x1.bracket(&x2).unwrap()).unwrap().is_zero());

        let j = eta_bracket(&st, &h1, &eta_bracket(&st, &h2, &h3).unwrap()).unwrap()
            .add(&eta_bracket(&st, &h2, &eta_bracket(&st, &h3, &h1).unwrap()).unwrap()).unwrap()
            .add(&eta_bracket(&st, &h3, &eta_bracket(&st, &h1, &h2).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn hdw_residual_vanishes_on_solutions(n in 1usize..=2, k in 1usize..=3, spec in poly_spec(6, 3, 2)) {
        let cc = canonical_chart(n, k).unwrap();
        let st = KContactStructure::new(&cc.eta).unwrap();
        let vars: Vec<usize> = (0..cc.chart.dim()).collect();
        let h = build_on(&spec, &vars);
        let sol = hdw_darboux_solve(&st, &cc.partition, &h).unwrap();
        prop_assert!(sol.residual.is_zero());
        prop_assert!(hdw_residual(&st, &sol.field, &h).unwrap().is_zero());
    }
}
