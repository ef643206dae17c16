//! Catalog fixtures: regenerated by the brute-force oracles and compared with
//! both the stored files and the main pipeline.

mod common;

use std::collections::BTreeSet;

use common::{seed, CATALOG};
use dimerwall_core::oracle::{fixture, Fixture};
use dimerwall_core::reps::fixed_points;
use dimerwall_core::tiling::Tiling;
use dimerwall_core::wallcross::explore;
use dimerwall_exact::enumerate_regular_unimodular_triangulations;

fn stored(name: &str) -> Fixture {
    let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).unwrap()
}

#[test]
fn fixtures_are_current() {
    for name in CATALOG {
        let t = Tiling::catalog(name).unwrap();
        assert_eq!(fixture(&t.quiver).unwrap(), stored(name), "{name}: rerun --regen-fixtures");
    }
}

#[test]
fn pipeline_matches_fixtures() {
    for name in CATALOG {
        let f = stored(name);
        let t = Tiling::catalog(name).unwrap();
        assert_eq!(t.quiver.num_vertices, f.faces, "{name}");
        assert_eq!(t.quiver.num_arrows(), f.edges, "{name}");
        assert_eq!(t.quiver.model.nodes.len(), f.nodes, "{name}");
        assert_eq!(t.matchings.matchings.len(), f.matchings, "{name}");
        let got: BTreeSet<_> = t.polygon.polygon.vertices.iter().copied().collect();
        let want: BTreeSet<_> = f.polygon.iter().copied().collect();
        assert_eq!(got, want, "{name}");
        let mult: Vec<_> = t.polygon.multiplicities.iter().map(|(p, m)| (*p, *m)).collect();
        assert_eq!(mult, f.multiplicities, "{name}");
        assert_eq!(t.polygon.normalized_area(), f.normalized_area, "{name}");
        assert_eq!(
            enumerate_regular_unimodular_triangulations(&t.polygon.polygon).len(),
            f.triangulations,
            "{name}"
        );
        let g = explore(&t, &seed(&t), 100).unwrap();
        assert!(!g.budget_exceeded);
        assert_eq!(g.nodes.len(), f.chambers, "{name}");
        let fp = fixed_points(&t.quiver, &t.patterns, &seed(&t)).unwrap();
        assert_eq!(fp.len() as i64, f.normalized_area, "{name}");
    }
}

#[test]
fn catalog_sizes() {
    let sizes: Vec<(usize, usize, usize)> = CATALOG.iter().map(|n| {
        let f = stored(n);
        (f.faces, f.edges, f.nodes)
    }).collect();
    assert_eq!(sizes, vec![(1, 3, 2), (2, 4, 2), (3, 7, 4), (3, 9, 6)]);
}
