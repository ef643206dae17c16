//! Inputs that must be rejected, each with its own error.

use dimerwall_core::chambers::{chamber_of, walls};
use dimerwall_core::model::ModelFile;
use dimerwall_core::tiling::Tiling;
use dimerwall_core::wallcross::{cross_wall, verify_crossing};
use dimerwall_core::Error;

fn load(file: &str) -> ModelFile {
    let path = format!("{}/tests/{file}", env!("CARGO_MANIFEST_DIR"));
    ModelFile::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn univalent_node() {
    let err = Tiling::from_file(&load("univalent.json")).unwrap_err();
    assert_eq!(err.name(), "UnivalentNode");
}

#[test]
fn sphere_is_not_a_torus() {
    let err = Tiling::from_file(&load("sphere.json")).unwrap_err();
    assert_eq!(err.name(), "NotTorusCellular");
}

#[test]
fn degenerate_model() {
    let err = Tiling::from_file(&load("degenerate.json")).unwrap_err();
    assert_eq!(err, Error::DegenerateModel(vec!["e3".into()]));
}

#[test]
fn non_generic_parameters() {
    let t = Tiling::catalog("conifold").unwrap();
    assert_eq!(chamber_of(&t, &[0, 0]).unwrap_err(), Error::NonGenericParameter(vec![0]));
    let t = Tiling::catalog("spp").unwrap();
    assert_eq!(chamber_of(&t, &[1, 0, -1]).unwrap_err().name(), "NonGenericParameter");
    assert_eq!(chamber_of(&t, &[1, 1, 1]).unwrap_err().name(), "InvalidParameter");
}

#[test]
fn unknown_model() {
    assert_eq!(Tiling::catalog("dp3").unwrap_err().name(), "UnknownModel");
}

#[test]
fn corrupted_predictions_are_caught() {
    for (name, theta) in [("conifold", vec![1, -1]), ("spp", vec![2, -1, -1]), ("c3z3", vec![2, -1, -1])] {
        let t = Tiling::catalog(name).unwrap();
        let ch = chamber_of(&t, &theta).unwrap();
        for w in walls(&t, &ch).unwrap() {
            let clean = cross_wall(&t, &ch, &w).unwrap();
            assert!(verify_crossing(&t, &mut clean.clone()).unwrap());
            for v in 0..clean.predicted.classes.len() {
                let mut bad = clean.clone();
                bad.predicted.classes[v][0] += 1;
                assert!(!verify_crossing(&t, &mut bad).unwrap(), "{name} vertex {v}");
            }
            let mut bad = clean.clone();
            bad.predicted.triangles.reverse();
            bad.predicted.triangles.truncate(1);
            assert!(!verify_crossing(&t, &mut bad).unwrap());
        }
    }
}
