use bicx::bicomplex::{Bicomplex, BicomplexKind};
use bicx::doc::{self, Object};
use bicx::model;
use bicx::twisted;
use bicx::{Error, RingSpec, ViolationKind};

#[test]
fn twisted_disc_round_trip() {
    let x = twisted::twisted_disc(RingSpec::Integers, 3, 0).unwrap();
    let text = doc::serialize(&Object::Twisted(x.clone()));
    let Object::Twisted(y) = doc::parse(&text).unwrap() else {
        panic!("kind changed")
    };
    assert_eq!(x.as_multi(), y.as_multi());
    assert_eq!(doc::serialize(&Object::Twisted(y)), text);
}

#[test]
fn map_round_trip_with_inline_objects() {
    let f = model::disc_onto_vboundary(RingSpec::PrimeField(3), 2, 0).unwrap();
    let obj = Object::BicomplexMap(bicx::bicomplex::BicomplexMap::from_multi(f.clone()).unwrap());
    let back = doc::parse(&doc::serialize(&obj)).unwrap();
    assert_eq!(back.as_multimap().unwrap(), &f);
}

#[test]
fn map_with_relative_references() {
    let dir = tempfile::tempdir().unwrap();
    let ring = RingSpec::Rationals;
    let s = Bicomplex::standard(ring, &BicomplexKind::Sphere { p: 1, q: 0, r: 1 }).unwrap();
    doc::save(&dir.path().join("s.json"), &Object::Bicomplex(s)).unwrap();
    let map = r#"{"schema_version": 1, "ring": "Q", "kind": "map", "source": "s.json", "target": "s.json",
        "components": [{"at": [1, 0], "entries": [[0, 0, "1/2"]]}]}"#;
    std::fs::write(dir.path().join("f.json"), map).unwrap();
    let f = doc::load(&dir.path().join("f.json")).unwrap();
    assert_eq!(f.kind_name(), "bicomplex map");
    assert!(f.as_multimap().unwrap().is_isomorphism());
}

#[test]
fn empty_ranks_give_the_zero_object() {
    for kind in ["chain", "bicomplex", "twisted"] {
        let text = format!(r#"{{"schema_version": 1, "ring": "F_5", "kind": "{kind}", "ranks": []}}"#);
        let obj = doc::parse(&text).unwrap();
        assert_eq!(obj.ring(), RingSpec::PrimeField(5));
        match obj {
            Object::Chain(c) => assert!(c.is_zero()),
            other => assert!(other.as_multi().unwrap().is_zero()),
        }
    }
}

#[test]
fn broken_relations_are_validation_errors() {
    let text = r#"{"schema_version": 1, "ring": "Z", "kind": "bicomplex",
        "ranks": [[1, 1, 1], [0, 1, 1], [1, 0, 1], [0, 0, 1]],
        "differentials": {
            "dh": [{"at": [1, 1], "entries": [[0, 0, "1"]]}, {"at": [1, 0], "entries": [[0, 0, "1"]]}],
            "dv": [{"at": [1, 1], "entries": [[0, 0, "1"]]}, {"at": [0, 1], "entries": [[0, 0, "1"]]}]}}"#;
    match doc::parse(text) {
        Err(Error::Validation(v)) => assert!(v.iter().any(|x| x.kind == ViolationKind::Anticommutation)),
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn bicomplex_rejects_higher_differentials() {
    let text = r#"{"schema_version": 1, "ring": "Z", "kind": "bicomplex",
        "ranks": [[2, 0, 1], [0, 1, 1]],
        "differentials": {"d2": [{"at": [2, 0], "entries": [[0, 0, "1"]]}]}}"#;
    assert!(doc::parse(text).is_err());
    let twisted = text.replace("\"bicomplex\"", "\"twisted\"");
    assert!(doc::parse(&twisted).is_ok());
}

#[test]
fn malformed_documents_are_parse_errors() {
    let cases = [
        r#"{"schema_version": 2, "ring": "Z", "kind": "chain"}"#,
        r#"{"schema_version": 1, "ring": "R", "kind": "chain"}"#,
        r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "extra": 0}"#,
        r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "ranks": [[0, -1]]}"#,
        r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "ranks": [[0, 1], [0, 2]]}"#,
        r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "ranks": [[1, 1], [0, 1]],
            "differentials": {"d": [{"at": [1], "entries": [[3, 0, "1"]]}]}}"#,
        r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "ranks": [[1, 1], [0, 1]],
            "differentials": {"d": [{"at": [1], "entries": [[0, 0, "1/2"]]}]}}"#,
        r#"{"schema_version": 1, "ring": "Z", "kind": "bicomplex", "ranks": [[-1, 0, 1]]}"#,
        r#"not json"#,
    ];
    for c in cases {
        assert!(doc::parse(c).is_err(), "accepted: {c}");
    }
}

#[test]
fn ring_names() {
    for (s, r) in [
        ("ZZ", RingSpec::Integers),
        ("QQ", RingSpec::Rationals),
        ("GF7", RingSpec::PrimeField(7)),
    ] {
        assert_eq!(s.parse::<RingSpec>().unwrap(), r);
    }
    assert!("F_4".parse::<RingSpec>().is_err());
    assert_eq!(RingSpec::PrimeField(3).to_string(), "F_3");
}
