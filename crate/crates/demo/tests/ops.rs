use bicx_demo::ops;

#[test]
fn disc_table_for_the_pictures() {
    let v = ops::disc_table(4, 0, "Q").unwrap();
    assert_eq!(v["disc"].as_array().unwrap().len(), 16);
    assert_eq!(v["boundary"].as_array().unwrap().len(), 11);
    assert_eq!(v["disc_acyclic"], true);
    assert_eq!(v["boundary_acyclic"], true);
    assert!(ops::disc_table(9, 0, "Q").is_err());
    assert!(ops::disc_table(2, 0, "R").is_err());
}

#[test]
fn homology_of_sample() {
    let v = ops::homology(&bicx_demo::sample_document()).unwrap();
    assert_eq!(v["kind"], "twisted complex");
    assert!(v["homology"].as_array().unwrap().is_empty());
    let x2 = r#"{"schema_version": 1, "ring": "Z", "kind": "chain", "ranks": [[1, 1], [0, 1]],
        "differentials": {"d": [{"at": [1], "entries": [[0, 0, "2"]]}]}}"#;
    let v = ops::homology(x2).unwrap();
    assert_eq!(v["homology"][0]["module"], "Z/2");
}

#[test]
fn pages_of_sample() {
    let v = ops::spectral_pages(&bicx_demo::sample_document(), 3).unwrap();
    let pages = v["pages"].as_array().unwrap();
    assert!(pages.len() >= 3);
    assert!(pages.last().unwrap()["cells"].as_array().unwrap().is_empty());
    assert!(ops::spectral_pages("{}", 2).is_err());
}
