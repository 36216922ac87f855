use proptest::prelude::*;

use kontakt_cli::{emit_json, parse_model, print_model, run_model, Registry, RunOptions};

const COORDS: [&str; 4] = ["a", "b", "c", "e"];

fn poly() -> impl Strategy<Value = String> + Clone {
    terms(1..4)
}

fn terms(n: std::ops::Range<usize>) -> impl Strategy<Value = String> + Clone {
    prop::collection::vec((-4i64..5, 1i64..4, prop::collection::vec(0u32..3, 4)), n).prop_map(|terms| {
        let parts: Vec<String> = terms
            .iter()
            .map(|(n, d, ex)| {
                let mut s = format!("({n}/{d})");
                for (v, e) in COORDS.iter().zip(ex) {
                    if *e > 0 {
                        s.push_str(&format!("*{v}^{e}"));
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    })
}

fn field() -> impl Strategy<Value = String> {
    field_with(poly())
}

fn field_with(c: impl Strategy<Value = String> + Clone) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::option::of(c), 4).prop_map(|cs| {
        let t: Vec<String> = cs
            .iter()
            .zip(COORDS)
            .filter_map(|(c, v)| c.as_ref().map(|c| format!("({c})*d/d{v}")))
            .collect();
        if t.is_empty() {
            "0".into()
        } else {
            t.join(" + ")
        }
    })
}

fn one_form() -> impl Strategy<Value = String> {
    prop::collection::vec((poly(), 0usize..4), 1..3)
        .prop_map(|ts| ts.iter().map(|(c, i)| format!("({c})*d{}", COORDS[*i])).collect::<Vec<_>>().join(" + "))
}

fn model() -> impl Strategy<Value = String> {
    model_with(field())
}

fn model_with(f: impl Strategy<Value = String>) -> impl Strategy<Value = String> {
    (
        prop::collection::vec(f, 1..4),
        prop::collection::vec(one_form(), 1..3),
        prop::collection::vec((0usize..5, prop::option::of(1usize..5), prop::bool::ANY), 0..5),
        prop::bool::ANY,
    )
        .prop_map(|(fields, chans, checks, algebra)| {
            let mut s = String::from("chart R coords [a, b, c, e]\n");
            for (i, f) in fields.iter().enumerate() {
                s.push_str(&format!("vf X{i} = {f}\n"));
            }
            s.push_str(&format!("form eta channels {} = {}\n", chans.len(), chans.join("; ")));
            let names: Vec<String> = (0..fields.len()).map(|i| format!("X{i}")).collect();
            s.push_str(&format!("dist D = [{}]\ndist K = ker eta\n", names.join(", ")));
            if algebra {
                s.push_str("algebra g dim 3 {\n  c[1 2 3] = sqrt2/2\n  c[2 3 1] = -1 + sqrt3\n}\ncheck jacobi g\n");
            }
            for (kind, max, at) in checks {
                let line = match kind {
                    0 => "check flag D".to_string(),
                    1 => "check rank K".to_string(),
                    2 => "check kcontact eta".to_string(),
                    3 => "check symmetry X0 D".to_string(),
                    _ => "check involutive D".to_string(),
                };
                s.push_str(&line);
                if let (0, Some(m)) = (kind, max) {
                    s.push_str(&format!(" max {m}"));
                }
                if at {
                    s.push_str(" at (a=1/2, e=-3)");
                }
                if kind == 3 {
                    s.push_str(" expect fail");
                }
                s.push('\n');
            }
            s
        })
}

// monomial coefficients keep the symbolic checks cheap
fn light_model() -> impl Strategy<Value = String> {
    model_with(field_with(terms(1..2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn print_parse_round_trip(text in model()) {
        let reg = Registry::standard();
        let m = parse_model(&text, "p", &reg).unwrap();
        let printed = print_model(&m);
        let again = parse_model(&printed, "p", &reg).unwrap();
        prop_assert_eq!(&again, &m);
        prop_assert_eq!(print_model(&again), printed);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reports_are_deterministic(text in light_model()) {
        let reg = Registry::standard();
        let m = parse_model(&text, "p", &reg).unwrap();
        let a = emit_json(&run_model(&m, &reg, &RunOptions::default()));
        let b = emit_json(&run_model(&m, &reg, &RunOptions::default()));
        prop_assert_eq!(a, b);
        prop_assert_eq!(run_model(&m, &reg, &RunOptions::default()).checks.len(), m.checks().count());
    }
}
