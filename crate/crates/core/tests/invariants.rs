mod common;

use std::collections::BTreeSet;

use common::{seed, CATALOG};
use dimerwall_core::chambers::chamber_of;
use dimerwall_core::dimer::matching_class;
use dimerwall_core::moduli::class_of_path;
use dimerwall_core::oracle::{admissible_patterns, matchings_by_subsets, stable_set};
use dimerwall_core::reps::{closed_supports, is_stable};
use dimerwall_core::tiling::Tiling;
use dimerwall_exact::{rational_rank, BigInt, Point};
use proptest::prelude::*;

#[test]
fn matched_once_around_every_node() {
    for name in CATALOG {
        let t = Tiling::catalog(name).unwrap();
        let q = &t.quiver;
        for m in &t.matchings.matchings {
            for a in 0..q.num_arrows() {
                let inside = (m.mask >> a & 1) as usize;
                let count = |p: &Vec<usize>| p.iter().filter(|&&b| m.mask >> b & 1 == 1).count();
                assert_eq!(count(&q.p_plus[a]), 1 - inside, "{name} arrow {a}");
                assert_eq!(count(&q.p_minus[a]), 1 - inside, "{name} arrow {a}");
            }
            for w in &q.omega {
                assert_eq!(w.iter().filter(|&&b| m.mask >> b & 1 == 1).count(), 1);
            }
        }
    }
}

#[test]
fn small_cycles_agree_modulo_relations() {
    for name in CATALOG {
        let t = Tiling::catalog(name).unwrap();
        let q = &t.quiver;
        let rels: Vec<Vec<BigInt>> = q.rel.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let base = rational_rank(&rels);
        for c in &q.small_cycles {
            let mut diff = q.exponent(&c.arrows);
            for (d, w) in diff.iter_mut().zip(q.exponent(&q.omega[c.start])) {
                *d -= w;
            }
            let mut with = rels.clone();
            with.push(diff.iter().map(|&x| x.into()).collect());
            assert_eq!(rational_rank(&with), base, "{name}");
        }
    }
}

#[test]
fn matchings_agree_with_subset_scan() {
    for name in CATALOG {
        let t = Tiling::catalog(name).unwrap();
        let fast: BTreeSet<Vec<usize>> = t.matchings.matchings.iter().map(|m| m.edges.clone()).collect();
        let slow: BTreeSet<Vec<usize>> = matchings_by_subsets(&t.quiver.model).into_iter().collect();
        assert_eq!(fast, slow, "{name}");
    }
}

#[test]
fn c3z3_polygon_up_to_sign() {
    let t = Tiling::catalog("c3z3").unwrap();
    let got: BTreeSet<Point> = t.polygon.polygon.vertices.iter().map(|p| [-p[0], -p[1]]).collect();
    assert_eq!(got, BTreeSet::from([[1, 0], [0, 1], [-1, -1]]));
    assert_eq!(t.polygon.normalized_area(), 3);
}

#[test]
fn patterns_agree_with_relation_evaluation() {
    for name in CATALOG {
        let t = Tiling::catalog(name).unwrap();
        let table: BTreeSet<u64> = t.patterns.patterns.iter().map(|p| p.zero).collect();
        let slow: BTreeSet<u64> = admissible_patterns(&t.quiver).into_iter().collect();
        assert_eq!(table, slow, "{name}");
        let s = seed(&t);
        let fast: BTreeSet<u64> = t.patterns.stable(&s).map(|p| p.zero).collect();
        assert_eq!(fast, stable_set(&t.quiver, &s), "{name}");
    }
}

#[test]
fn stability_examples() {
    let t = Tiling::catalog("conifold").unwrap();
    let q = &t.quiver;
    let full = q.all_arrows_mask();
    assert!(closed_supports(q, 0).unwrap().is_empty());
    assert!(is_stable(q, 0, &[1, -1]).unwrap());
    assert!(is_stable(q, 0, &[-1, 1]).unwrap());
    assert_eq!(closed_supports(q, full).unwrap(), vec![0b01, 0b10]);
    assert!(!is_stable(q, full, &[1, -1]).unwrap());
    let back: u64 = (0..4).filter(|&a| q.arrows[a].source == 1).map(|a| 1 << a).sum();
    assert_eq!(closed_supports(q, back).unwrap(), vec![0b10]);
    assert!(!is_stable(q, back, &[1, -1]).unwrap());
}

#[test]
fn tautological_classes_are_path_independent() {
    for name in CATALOG {
        let t = Tiling::catalog(name).unwrap();
        let q = &t.quiver;
        let ch = chamber_of(&t, &seed(&t)).unwrap();
        // every path of length at most 3 from v0 against the stored class
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for p in &frontier {
                let end = p.last().map_or(q.v0, |&a| q.arrows[a].target);
                for (a, arr) in q.arrows.iter().enumerate() {
                    if arr.source == end {
                        let mut np = p.clone();
                        np.push(a);
                        next.push(np);
                    }
                }
            }
            for p in &next {
                let end = q.arrows[*p.last().unwrap()].target;
                let c = class_of_path(&t, &ch.fan, p);
                // a path is a section of L_end, so its divisor is linearly equivalent to L_end
                assert_eq!(ch.fan.canonical_class(&c), ch.fan.canonical_class(&ch.classes[end]), "{name} {p:?}");
            }
            frontier = next;
        }
    }
}

proptest! {
    #[test]
    fn reference_change_translates_classes(name in prop::sample::select(CATALOG.to_vec()), pick in 0usize..16) {
        let t = Tiling::catalog(name).unwrap();
        let model = &t.quiver.model;
        let ms = &t.matchings.matchings;
        let r = &ms[pick % ms.len()].edges;
        let shift = matching_class(model, &ms[0].edges, r);
        for m in ms {
            let c = matching_class(model, &m.edges, r);
            prop_assert_eq!(c, [m.class[0] + shift[0], m.class[1] + shift[1]]);
        }
    }
}
