use kontakt_core::expr::{Scalar, ScalarExpr};
use kontakt_core::geom::{Chart, GenKind, VectorField};
use kontakt_core::kcontact::{validate_k_contact, Status};
use kontakt_core::liegroup::*;
use kontakt_core::parse::{parse_form, parse_vector_field};
use kontakt_core::Error;

fn eta(a: usize) -> InvariantForm {
    InvariantForm::basis(a - 1)
}

fn pair(a: usize, b: usize) -> InvariantForm {
    eta(a).wedge(&eta(b))
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Brute-force Jacobi over every index quadruple, straight from c(a,b,g).
fn jacobi_oracle(c: &LieAlgebraData) -> bool {
    let r = c.dim();
    for a in 0..r {
        for b in 0..r {
            if !(c.c(a, b, 0) + c.c(b, a, 0)).is_zero() {
                return false;
            }
            for g in 0..r {
                for n in 0..r {
                    let mut s = Scalar::zero();
                    for m in 0..r {
                        for (x, y, z) in [(a, b, g), (b, g, a), (g, a, b)] {
                            if !c.c(x, y, m).is_zero() {
                                s += &(c.c(x, y, m) * c.c(m, z, n));
                            }
                        }
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Plain partial-pivot elimination on f64 copies.
fn float_rank_oracle(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    let mut m: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())) else {
            break;
        };
        if m[p][col].abs() < 1e-10 {
            continue;
        }
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank {
                let f = m[i][col] / m[rank][col];
                for j in 0..ncols {
                    m[i][j] -= f * m[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn corpus_algebras_satisfy_jacobi() {
    for name in CORPUS_ALGEBRAS {
        let c = corpus_algebra(name).unwrap();
        assert!(validate_structure(&c), "{name}");
        assert!(jacobi_oracle(&c), "{name}");
        assert!(invariant_d_squared_vanishes(&c), "{name}");
    }
    assert!(matches!(corpus_algebra("so5"), Err(Error::UnknownAlgebra(_))));
    let mut bad = corpus_algebra("su3").unwrap();
    bad.set(0, 1, 2, int(5));
    assert!(!validate_structure(&bad));
    assert!(!jacobi_oracle(&bad));
}

#[test]
fn table_constants() {
    let su3 = corpus_algebra("su3").unwrap();
    assert_eq!(su3.c(3, 4, 7), &-Scalar::sqrt3());
    assert_eq!(su3.c(0, 1, 2), &int(-2));
    let su4 = corpus_algebra("su4").unwrap();
    assert_eq!(su4.dim(), 15);
    assert_eq!(su4.c(0, 1, 2), su3.c(0, 1, 2));
    let rh3 = corpus_algebra("rh3").unwrap();
    assert_eq!(rh3.c(1, 3, 2), &int(1));
    assert_eq!(rh3.nonzero(), vec![(1, 3, 2, int(1))]);
}

#[test]
fn maurer_cartan_differentials() {
    let su3 = corpus_algebra("su3").unwrap();
    let d3 = maurer_cartan(&su3, 2);
    assert_eq!(d3.render(), "2*eta1^eta2 + eta4^eta5 - eta6^eta7");
    let expected = pair(1, 2).scale(&int(2)).add(&pair(4, 5)).add(&pair(6, 7).scale(&int(-1)));
    assert_eq!(d3, expected);
    let d8 = maurer_cartan(&su3, 7);
    assert_eq!(d8, pair(4, 5).add(&pair(6, 7)).scale(&Scalar::sqrt3()));

    let su4 = corpus_algebra("su4").unwrap();
    let s = &Scalar::sqrt6() * &Scalar::from_frac(2, 3);
    assert_eq!(&s * &s, Scalar::from_frac(8, 3));
    assert_eq!(maurer_cartan(&su4, 14), pair(9, 10).add(&pair(11, 12)).add(&pair(13, 14)).scale(&s));

    let u2 = corpus_algebra("u2").unwrap();
    assert!(maurer_cartan(&u2, 3).is_zero());
    assert_eq!(maurer_cartan(&u2, 2), pair(1, 2).scale(&int(-2)));

    let ab = LieAlgebraData::new("abelian", 3);
    assert!((0..3).all(|a| maurer_cartan(&ab, a).is_zero()));
}

#[test]
fn invariant_kcontact_structures() {
    for (name, a) in [("su3", vec![2, 7]), ("su4", vec![2, 7, 14]), ("u2", vec![2, 3]), ("rh3", vec![0, 2])] {
        let c = corpus_algebra(name).unwrap();
        assert_eq!(corpus_reeb_indices(name).unwrap(), a);
        let rep = invariant_kcontact_check(&c, &a).unwrap();
        assert!(rep.passes, "{name}");
        assert!(rep.reeb_is_basis, "{name}");
        for &x in &a {
            for &y in &a {
                assert!((0..c.dim()).all(|g| c.c(x, y, g).is_zero()));
            }
        }
    }
    let su3 = corpus_algebra("su3").unwrap();
    assert!(!invariant_kcontact_check(&su3, &[0, 1]).unwrap().passes);
    assert!(invariant_kcontact_check(&su3, &[]).is_err());
}

#[test]
fn hdw_systems() {
    let rh3 = corpus_algebra("rh3").unwrap();
    let sys = hdw_invariant_system(&rh3, &[0, 2]).unwrap();
    assert!(sys.algebraic_is_zero());
    assert!(!sys.pde_is_zero());

    let su3 = corpus_algebra("su3").unwrap();
    let sys = hdw_invariant_system(&su3, &[2, 7]).unwrap();
    // the γ ∈ A rows are ι_{R_γ}dη^α, which vanish once the Reeb frame is (X_3, X_8)
    assert!(sys.algebraic_is_zero());
    assert!(!sys.pde_is_zero());
    let mut all = sys.algebraic.clone();
    all.extend(sys.pde.iter().cloned());
    let n = sys.unknowns.len();
    assert_eq!(sys.solutions.len(), n - float_rank_oracle(&all, n));
    for v in &sys.solutions {
        for row in &all {
            let mut s = Scalar::zero();
            for (x, y) in row.iter().zip(v) {
                s += &(x * y);
            }
            assert!(s.is_zero());
        }
    }

    let ab = LieAlgebraData::new("abelian", 3);
    let sys = hdw_invariant_system(&ab, &[0]).unwrap();
    assert!(sys.algebraic_is_zero() && sys.pde_is_zero());
    assert_eq!(sys.solutions.len(), 3);
}

/// rh3 in exponential coordinates (t, u, v, w):
/// X1 = ∂t + u∂u + v∂v + w∂w, X2 = e^t∂u, X3 = e^t∂v, X4 = u∂v + e^t∂w.
#[test]
fn rh3_coordinate_realization() {
    let c = Chart::new("rh3", &["t", "u", "v", "w"]).unwrap().with_gen(GenKind::Exp, 0).unwrap();
    let x: Vec<VectorField> = [
        "d/dt + u*d/du + v*d/dv + w*d/dw",
        "exp(t)*d/du",
        "exp(t)*d/dv",
        "u*d/dv + exp(t)*d/dw",
    ]
    .iter()
    .map(|s| parse_vector_field(s, &c).unwrap())
    .collect();
    let alg = corpus_algebra("rh3").unwrap();
    for a in 0..4 {
        for b in 0..4 {
            let mut expected = VectorField::zero(&c);
            for g in 0..4 {
                let k = alg.c(a, b, g);
                if !k.is_zero() {
                    expected = expected.add(&x[g].scale(&ScalarExpr::constant(k.clone()))).unwrap();
                }
            }
            assert_eq!(x[a].bracket(&x[b]).unwrap(), expected, "[X{}, X{}]", a + 1, b + 1);
        }
    }
    let eta = parse_form("dt; (dv - v*dt)/exp(t) - u*(dw - w*dt)/exp(t)^2", &c, Some(2)).unwrap();
    for (a, xa) in x.iter().enumerate() {
        let vals = eta.interior(xa).unwrap().values();
        let want = [a == 0, a == 2];
        for (v, w) in vals.iter().zip(want) {
            assert_eq!(v.is_one(), w);
            assert_eq!(v.is_zero(), !w);
        }
    }
    let rep = validate_k_contact(&eta).unwrap();
    let inv = invariant_kcontact_check(&alg, &[0, 2]).unwrap();
    assert_eq!(rep.status.is_ok(), inv.passes);
    assert_ne!(rep.status, Status::Fail(1));
    assert_eq!(rep.reeb.unwrap(), vec![x[0].clone(), x[2].clone()]);
}
