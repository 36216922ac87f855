use kontakt_cli::corpus::{self, CORPUS};
use kontakt_cli::model::{parse_point, resolve_point, DistSource, Expect, Item, ModelCounts};
use kontakt_cli::{parse_model, print_model, Registry};
use kontakt_core::geom::Chart;
use kontakt_core::jet;
use kontakt_core::liegroup::{corpus_algebra, CORPUS_ALGEBRAS};
use kontakt_core::parse::{parse_form, parse_vector_field};

fn parse(text: &str) -> Result<kontakt_cli::Model, kontakt_cli::ModelError> {
    parse_model(text, "t", &Registry::standard())
}

fn err(text: &str) -> (usize, usize, &'static str) {
    let e = parse(text).unwrap_err();
    (e.line, e.col, e.code)
}

#[test]
fn engel_counts() {
    let m = corpus::load("engel", &Registry::standard()).unwrap().unwrap();
    let n = m.count();
    assert_eq!(
        n,
        ModelCounts {
            charts: 1,
            fields: 4,
            forms: 1,
            dists: 1,
            algebras: 0,
            checks: 3
        }
    );
    let again = parse(&print_model(&m)).unwrap();
    assert_eq!(again.items, m.items);
}

#[test]
fn empty_file() {
    let m = parse("").unwrap();
    assert!(m.items.is_empty());
    let m = parse("# only a comment\n\n   \n").unwrap();
    assert!(m.items.is_empty());
    assert_eq!(print_model(&m), "");
}

#[test]
fn undeclared_coordinate_is_located() {
    assert_eq!(err("chart c coords [x, y]\nvf X = d/dw\n"), (2, 8, "UnknownCoordinate"));
    assert_eq!(err("chart c coords [x, y]\nvf X = x*d/dx + w*d/dy\n"), (2, 17, "UnknownIdentifier"));
}

#[test]
fn structural_errors() {
    assert_eq!(err("vf X = d/dx"), (1, 7, "UnknownIdentifier"));
    assert_eq!(err("chart c coords [x]\nwibble"), (2, 1, "SyntaxError"));
    assert_eq!(err("chart c coords [x, x]").2, "InvalidChart");
    assert_eq!(err("chart c coords [x]\nvf X = d/dx\nvf X = x*d/dx").2, "DuplicateName");
    assert_eq!(err("chart c coords [x]\nvf X = d/dx\ntrans exp(x)").2, "SyntaxError");
    assert_eq!(err("chart c coords [x]\ntrans exp(y)"), (2, 11, "UnknownCoordinate"));
    assert_eq!(err("chart c coords [x]\ncheck nosuch X"), (2, 7, "UnknownIdentifier"));
    assert_eq!(err("chart c coords [x]\nform e channels 2 = dx").2, "ArityMismatch");
    assert_eq!(err("chart c coords [x, y]\nvf X = d/dx\ndist D = [X, Y]"), (3, 14, "UnknownIdentifier"));
    assert_eq!(err("algebra g dim 2 {\n  c[1 2 3] = 1\n}").2, "UnknownIdentifier");
    assert_eq!(err("algebra g dim 2 {\n  c[1 2 1] = x\n}").2, "UnknownIdentifier");
    assert_eq!(err("algebra g dim 2 {\n  c[1 2 1] = 1\n").2, "SyntaxError");
}

#[test]
fn check_arguments_are_typed_and_counted() {
    let head = "chart c coords [x, y, z]\nvf X = d/dx\nform e channels 1 = dz - y*dx\ndist D = [X]\n";
    assert_eq!(err(&format!("{head}check kcontact")), (5, 15, "ArityMismatch"));
    assert_eq!(err(&format!("{head}check kcontact e e")), (5, 18, "ArityMismatch"));
    assert_eq!(err(&format!("{head}check kcontact X")), (5, 16, "TypeError"));
    assert_eq!(err(&format!("{head}check symmetry X Q")), (5, 18, "UnknownIdentifier"));
    assert_eq!(err(&format!("{head}check flag D max")).2, "SyntaxError");
    assert_eq!(err(&format!("{head}check flag D expect maybe")).2, "SyntaxError");
    assert_eq!(err(&format!("{head}check kcontact e expect fail 4")).2, "SyntaxError");
    let m = parse(&format!("{head}check flag D max 3 at (x=1/2, z=-1) expect growth (1, 1)")).unwrap();
    let d = m.checks().next().unwrap();
    assert_eq!(d.max, Some(3));
    assert_eq!(d.expect, Some(Expect::Growth(vec![1, 1])));
    assert_eq!(d.at.as_ref().unwrap().len(), 2);
}

#[test]
fn points() {
    let c = Chart::new("c", &["x", "y", "t"]).unwrap();
    let p = parse_point("x=0, t=1/2").unwrap();
    let v = resolve_point(&p, &c).unwrap();
    assert_eq!(v[2], "1/2".parse().unwrap());
    assert_eq!(v[1], "0".parse().unwrap());
    assert!(resolve_point(&parse_point("1, 2").unwrap(), &c).is_err());
    assert!(resolve_point(&parse_point("w=1").unwrap(), &c).is_err());
    assert!(parse_point("x=1, 2").is_err());
    assert!(parse_point("x=").is_err());
}

#[test]
fn corpus_round_trips() {
    let reg = Registry::standard();
    for (name, src) in CORPUS {
        let m = parse_model(src, name, &reg).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print_model(&m);
        let again = parse_model(&printed, name, &reg).unwrap_or_else(|e| panic!("{name} reprint: {e}"));
        assert_eq!(again, m, "{name}");
        assert_eq!(print_model(&again), printed, "{name}");
    }
}

#[test]
fn algebra_files_match_library_tables() {
    let reg = Registry::standard();
    for name in CORPUS_ALGEBRAS {
        let m = corpus::load(name, &reg).unwrap().unwrap();
        assert_eq!(m.algebra(name).unwrap(), &corpus_algebra(name).unwrap(), "{name}");
    }
}

#[test]
fn jet_files_match_library_entries() {
    let reg = Registry::standard();
    for name in jet::JET_CORPORA {
        let m = corpus::load(name, &reg).unwrap().unwrap();
        let j = jet::corpus_chart(name).unwrap();
        assert_eq!(m.charts().next().unwrap(), &j.chart);
        assert_eq!(m.form("eta").unwrap(), &j.eta);
        let entries = jet::corpus(name).unwrap();
        for e in &entries {
            let f = m.field(&e.name).unwrap();
            assert_eq!(f, &parse_vector_field(&e.field, &j.chart).unwrap());
            let pr = m.field(&format!("pr{}", e.name)).unwrap();
            assert_eq!(pr, &parse_vector_field(&e.prolongation, &j.chart).unwrap());
            let h = m.form(&format!("h{}", e.name)).unwrap();
            assert_eq!(h, &parse_form(&e.characteristic.join("; "), &j.chart, Some(j.k)).unwrap());
        }
        assert_eq!(m.checks().count(), 3 * entries.len() + 1);
    }
}

#[test]
fn kernel_distributions_and_transcendentals() {
    let m = corpus::load("rh3", &Registry::standard()).unwrap().unwrap();
    let k = m
        .items
        .iter()
        .find_map(|i| match i {
            Item::Dist { source, value, .. } => Some((source, value)),
            _ => None,
        })
        .unwrap();
    assert_eq!(k.0, &DistSource::Kernel("eta".into()));
    assert_eq!(k.1.generic_rank(), 2);
    assert!(print_model(&m).contains("trans exp(t)"));
}
