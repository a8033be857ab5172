use std::sync::Arc;

use subfib::funty::{check_fun_structure, heyting_fun_structure, subobject_fun_structure};
use subfib::gcwf::check_gcwf;
use subfib::io::{load_model, save_model, Model, ModelError};
use subfib::models::{doctrine_gcwf, finset_skeleton, heyting_sample, kernel_pair_gcwf, subobject_gcwf};

fn round_trip(m: &Model) -> Model {
    let text = m.to_json();
    let back = Model::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
    back
}

#[test]
fn kernel_pair_round_trips() {
    let kp = kernel_pair_gcwf(Arc::new(finset_skeleton(1).unwrap())).unwrap();
    let mut m = Model::default();
    m.add_gcwf("kp", &kp.gcwf);
    let back = round_trip(&m);
    let g = back.gcwf(Some("kp")).unwrap();
    assert_eq!(g.types().object_count(), kp.gcwf.types().object_count());
    assert!(check_gcwf(g).is_ok());
}

#[test]
fn fun_structures_round_trip() {
    let s = subobject_gcwf(2).unwrap();
    let fs = subobject_fun_structure(&s).unwrap();
    let mut m = Model::default();
    m.add_gcwf("sub", &s.gcwf);
    m.add_fun_structure("sub.fun", "sub", &fs);
    let back = round_trip(&m);
    let r = check_fun_structure(back.fun_structure(None).unwrap());
    assert!(r.is_ok(), "{r}");
}

#[test]
fn doctrine_round_trips_through_a_file() {
    let (p, spec) = heyting_sample();
    let d = doctrine_gcwf(&p).unwrap();
    let fs = heyting_fun_structure(&d, &spec).unwrap();
    let mut m = Model::default();
    m.add_gcwf("doc", &d.gcwf);
    m.add_fun_structure("doc.imp", "doc", &fs);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doc.json");
    save_model(&m, &path).unwrap();
    let first = std::fs::read_to_string(&path).unwrap();
    let back = load_model(&path).unwrap();
    save_model(&back, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
}

#[test]
fn malformed_files_are_parse_errors() {
    for text in [
        "{",
        r#"{"version": 2}"#,
        r#"{"version": 1, "extra": 0}"#,
        r#"{"version": 1, "functors": {"f": {"source": "a", "target": "a", "objects": {}, "morphisms": {}}}}"#,
    ] {
        assert!(matches!(Model::from_json(text), Err(ModelError::Parse(_))), "{text}");
    }
}

#[test]
fn incomplete_table_is_rejected() {
    // the composite e.e is never given
    let text = r#"{
      "version": 1,
      "categories": {"c": {
        "objects": ["a"],
        "morphisms": [{"name": "1", "dom": "a", "cod": "a"}, {"name": "e", "dom": "a", "cod": "a"}],
        "identities": {"a": "1"},
        "composition": []
      }}
    }"#;
    match Model::from_json(text) {
        Err(ModelError::Invalid { entity, report }) => {
            assert_eq!(entity, "c");
            assert!(!report.is_ok());
        }
        other => panic!("expected a validation failure, got {:?}", other.map(|_| ())),
    }
}
