use std::path::Path;
use std::process::{Command, Output};

use bicx::bicomplex::{Bicomplex, BicomplexKind, BicomplexMap};
use bicx::doc::{self, Object};
use bicx::model;
use bicx::multi::{MultiMap, Multicomplex};
use bicx::RingSpec;

fn bicx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicx"))
        .args(args)
        .output()
        .expect("spawn bicx")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn save_map(p: &Path, f: MultiMap) {
    doc::save(p, &Object::BicomplexMap(BicomplexMap::from_multi(f).unwrap())).unwrap();
}

#[test]
fn gen_then_check_and_homology() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "td.json");
    let o = bicx(&["gen", "twisted-disc", "3", "0", "--ring", "Q", "-o", &out]);
    assert!(o.status.success());
    let o = bicx(&["check", &out]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("valid twisted complex over Q"));
    let o = bicx(&["homology", &out]);
    assert!(stdout(&o).contains("acyclic"), "{}", stdout(&o));
}

#[test]
fn gen_with_negative_bidegree_and_multiplicity() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "s.json");
    assert!(bicx(&["gen", "sphere", "1", "-1", "-r", "2", "-o", &out])
        .status
        .success());
    let o = bicx(&["homology", &out]);
    assert!(stdout(&o).contains("H_0 = Z^2"), "{}", stdout(&o));
}

#[test]
fn torsion_homology_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x2.json");
    std::fs::write(
        &file,
        r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "ranks": [[1, 1], [0, 1]],
            "differentials": {"d": [{"at": [1], "entries": [[0, 0, "2"]]}]}}"#,
    )
    .unwrap();
    let o = bicx(&["homology", &file.to_string_lossy()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("H_0 = Z/2"), "{}", stdout(&o));
}

#[test]
fn classify_disc_onto_vertical_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.json");
    save_map(
        &file,
        model::disc_onto_vboundary(RingSpec::PrimeField(2), 2, 0).unwrap(),
    );
    let o = bicx(&["classify", &file.to_string_lossy(), "--structure", "tot", "--rlp"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("structure: tot"));
    assert!(s.contains("weak equivalence: yes"), "{s}");
    assert!(s.contains("fibration: false"), "{s}");
    assert!(s.contains("H^v iso for p > 0 fails at column 1"), "{s}");
    assert!(s.contains("rlp against J: false"), "{s}");
}

#[test]
fn ce_classify_names_the_failing_cycle_surjectivity() {
    let dir = tempfile::tempdir().unwrap();
    for (p, q) in [(1, 0), (2, -1), (3, 2)] {
        let file = dir.path().join(format!("f{p}.json"));
        save_map(
            &file,
            model::disc_onto_vboundary(RingSpec::Integers, p, q).unwrap(),
        );
        let o = bicx(&["classify", &file.to_string_lossy(), "--structure", "ce"]);
        assert!(o.status.success());
        let s = stdout(&o);
        assert!(s.contains("fibration: false"), "{s}");
        let line = s
            .lines()
            .find(|l| l.contains("Z^v surjectivity fails at"))
            .expect("no Z^v evidence");
        assert!(line.contains(&format!("({p},{q})")), "{s}");
    }
}

#[test]
fn same_seed_same_report() {
    let a = bicx(&["verify-paper", "--max-p", "2", "--seed", "11", "--ring", "F_2"]);
    let b = bicx(&["verify-paper", "--max-p", "2", "--seed", "11", "--ring", "F_2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn ss_reports_pages() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "s.json");
    assert!(
        bicx(&["gen", "h-boundary", "2", "0", "--ring", "F_3", "-o", &out])
            .status
            .success()
    );
    let o = bicx(&["ss", &out, "--max-page", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("page 2:") && s.contains("E-infinity:"), "{s}");
    let o = bicx(&["ss", &path(dir.path(), "s.json"), "--max-page", "2"]);
    assert!(o.status.success());
}

#[test]
fn ss_over_integers_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "s.json");
    assert!(bicx(&["gen", "disc", "1", "0", "-o", &out]).status.success());
    assert_eq!(bicx(&["ss", &out]).status.code(), Some(1));
}

#[test]
fn tensor_of_discs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, t) = (
        path(dir.path(), "a.json"),
        path(dir.path(), "b.json"),
        path(dir.path(), "t.json"),
    );
    assert!(bicx(&["gen", "disc", "1", "0", "-o", &a]).status.success());
    assert!(bicx(&["gen", "sphere", "0", "2", "-o", &b]).status.success());
    assert!(bicx(&["tensor", &a, &b, "-o", &t]).status.success());
    let Object::Bicomplex(x) = doc::load(Path::new(&t)).unwrap() else {
        panic!("not a bicomplex")
    };
    let expected =
        Bicomplex::standard(RingSpec::Integers, &BicomplexKind::Disc { p: 1, q: 2, r: 1 }).unwrap();
    assert_eq!(x.ranks(), expected.ranks());
}

#[test]
fn ce_resolve_writes_augmentation() {
    let dir = tempfile::tempdir().unwrap();
    let (c, e) = (path(dir.path(), "c.json"), path(dir.path(), "eps.json"));
    assert!(bicx(&["gen", "chain-disc", "0", "1", "-o", &c]).status.success());
    assert!(bicx(&["ce-resolve", &c, "-o", &e]).status.success());
    let o = bicx(&["classify", &e, "--structure", "ce"]);
    assert!(stdout(&o).contains("trivial fibration: true"), "{}", stdout(&o));
}

#[test]
fn lift_exists_and_fails() {
    let ring = RingSpec::PrimeField(2);
    let zero = Multicomplex::zero(ring);
    let disc = Bicomplex::standard(ring, &BicomplexKind::Disc { p: 1, q: 0, r: 1 })
        .unwrap()
        .into_multi();
    let sphere = Bicomplex::standard(ring, &BicomplexKind::Sphere { p: 0, q: 0, r: 1 })
        .unwrap()
        .into_multi();
    let g = model::disc_onto_vboundary(ring, 1, 0).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    save_map(&d.join("i.json"), MultiMap::zero(&zero, &disc));
    save_map(&d.join("u.json"), MultiMap::zero(&zero, &disc));
    save_map(&d.join("f.json"), g.clone());
    save_map(&d.join("g.json"), g);
    let h = path(d, "h.json");
    let o = bicx(&["lift", &d.to_string_lossy(), "-o", &h]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(doc::load(Path::new(&h)).unwrap().as_multimap().is_some());

    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    save_map(&d.join("i.json"), MultiMap::zero(&zero, &sphere));
    save_map(&d.join("u.json"), MultiMap::zero(&zero, &zero));
    save_map(&d.join("f.json"), MultiMap::identity(&sphere));
    save_map(&d.join("g.json"), MultiMap::zero(&zero, &sphere));
    let o = bicx(&["lift", &d.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no lift"));
}

#[test]
fn non_commuting_square_is_rejected() {
    let ring = RingSpec::PrimeField(2);
    let sphere = Bicomplex::standard(ring, &BicomplexKind::Sphere { p: 0, q: 0, r: 1 })
        .unwrap()
        .into_multi();
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    save_map(&d.join("i.json"), MultiMap::identity(&sphere));
    save_map(&d.join("u.json"), MultiMap::identity(&sphere));
    save_map(&d.join("f.json"), MultiMap::zero(&sphere, &sphere));
    save_map(&d.join("g.json"), MultiMap::identity(&sphere));
    let o = bicx(&["lift", &d.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("g∘u"));
}

#[test]
fn exit_codes() {
    assert_eq!(bicx(&["check", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(bicx(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        bicx(&["gen", "truncated-boundary", "3", "0"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "bogus": 1}"#,
    )
    .unwrap();
    assert_eq!(bicx(&["check", &bad.to_string_lossy()]).status.code(), Some(1));
    let nonzero_square = dir.path().join("sq.json");
    std::fs::write(
        &nonzero_square,
        r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "ranks": [[2, 1], [1, 1], [0, 1]],
            "differentials": {"d": [{"at": [2], "entries": [[0, 0, "1"]]}, {"at": [1], "entries": [[0, 0, "1"]]}]}}"#,
    )
    .unwrap();
    let o = bicx(&["check", &nonzero_square.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_paper_small() {
    let o = bicx(&["verify-paper", "--max-p", "2", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("9/9 checks passed"));
}
