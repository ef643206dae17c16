use dimerwall_core::oracle::monomials_up_to;
use dimerwall_core::paths::path_census;
use dimerwall_core::tiling::Tiling;

#[test]
fn c3_counts_commutative_monomials() {
    let t = Tiling::catalog("c3").unwrap();
    for len in 0..=6 {
        let c = path_census(&t.quiver, len).unwrap();
        assert_eq!(c.pair(0, 0).classes, monomials_up_to(len), "length {len}");
        assert!(c.confluent);
    }
}

#[test]
fn conifold_length_two_at_v0() {
    let t = Tiling::catalog("conifold").unwrap();
    let c = path_census(&t.quiver, 2).unwrap();
    let p = c.pair(t.quiver.v0, t.quiver.v0);
    // four products of an arrow out and one back, plus the trivial path
    assert_eq!(p.classes, 5);
    assert_eq!(p.paths, 5);
}

#[test]
fn weights_separate_classes() {
    for name in ["c3", "conifold", "spp", "c3z3"] {
        let t = Tiling::catalog(name).unwrap();
        let c = path_census(&t.quiver, 6).unwrap();
        assert!(c.weights_distinct, "{name}");
    }
}
