mod common;

use std::collections::BTreeSet;

use common::{sample_thetas, seed, CATALOG};
use dimerwall_core::chambers::{chamber_of, lift, walls, Chamber, WallKind};
use dimerwall_core::moduli::{curve_degrees, curve_pairing, line_bundle};
use dimerwall_core::reps::{fixed_points, pairing};
use dimerwall_core::tiling::Tiling;
use dimerwall_core::wallcross::{cross_wall, explore, verify_crossing};
use proptest::prelude::*;

fn det3(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn check_fan(t: &Tiling, ch: &Chamber, theta: &[i64]) {
    let fan = &ch.fan;
    let area = t.polygon.normalized_area();
    for r in &fan.rays {
        assert_eq!(r.generator[2], 1);
        assert_eq!([r.generator[0], r.generator[1]], r.point);
    }
    for c in &fan.cones {
        let g = c.map(|i| fan.rays[i].generator);
        assert_eq!(det3(g[0], g[1], g[2]).abs(), 1, "{theta:?}");
    }
    assert_eq!(fan.cones.len() as i64, area);
    assert!(fan.triangulation.is_valid_unimodular());
    let fp = fixed_points(&t.quiver, &t.patterns, theta).unwrap();
    assert_eq!(fp.len() as i64, area, "{theta:?}");

    let lt = line_bundle(&ch.classes, theta);
    for (_, d) in curve_degrees(fan, &lt) {
        assert!(d > 0, "{theta:?}");
    }

    // the two evaluations of the degree of L(η) agree on a basis of Θ
    let n = t.num_vertices();
    for i in 0..n.saturating_sub(1) {
        let mut x = vec![0; n - 1];
        x[i] = 1;
        let eta = lift(&x);
        let l = line_bundle(&ch.classes, &eta);
        for c in fan.compact_curves() {
            assert_eq!(curve_pairing(fan, &ch.classes, &eta, c).unwrap(), fan.degree(&l, c).unwrap());
        }
    }
}

fn check_walls(t: &Tiling, ch: &Chamber) {
    for w in walls(t, ch).unwrap() {
        let topo = &w.topology;
        assert!(topo.r1_connected && topo.r2_connected);
        assert!((1..=2).contains(&topo.boundary_components));
        let ty = w.wall_type.as_ref().unwrap();

        // L(θ₀) is nef with degree 0 exactly on the contracted curves
        let l0 = line_bundle(&ch.classes, &w.theta0);
        let zero: BTreeSet<usize> = curve_degrees(&ch.fan, &l0)
            .into_iter()
            .inspect(|&(_, d)| assert!(d >= 0))
            .filter(|&(_, d)| d == 0)
            .map(|(c, _)| c)
            .collect();
        assert_eq!(zero, ty.contracted_curves.iter().copied().collect());

        let mut rec = cross_wall(t, ch, &w).unwrap();
        assert!(verify_crossing(t, &mut rec).unwrap());
        let far = rec.recomputed.as_ref().unwrap();
        match ty.kind {
            WallKind::Zero => {
                assert!(zero.is_empty());
                assert_eq!(far.triangles, ch.fan.triangulation.triangles);
            }
            WallKind::I => {
                // the flopped curve is the only one missing on the far side
                assert!(ch.fan.triangulation.differs_by_flip(&rec_triangulation(t, &rec.theta_prime)));
                assert_eq!(zero.len(), 1);
            }
            WallKind::III => {
                let k = ty.contracted_divisor.unwrap();
                assert!(zero.iter().all(|&c| ch.fan.curves[c].rays.contains(&k)));
                assert_eq!(far.triangles, ch.fan.triangulation.triangles);
            }
        }
        // θ' is across this wall only
        assert!(pairing(&rec.theta_prime, w.r1_mask) < 0);
        for &r in &ch.census {
            if r != w.r1_mask {
                assert!(pairing(&rec.theta_prime, r) != 0);
            }
        }
    }
}

fn rec_triangulation(t: &Tiling, theta: &[i64]) -> dimerwall_exact::Triangulation {
    chamber_of(t, theta).unwrap().fan.triangulation
}

#[test]
fn sampled_parameters() {
    for name in CATALOG {
        let t = Tiling::catalog(name).unwrap();
        let thetas = sample_thetas(&t, 20);
        if t.num_vertices() > 1 {
            assert_eq!(thetas.len(), 20);
        }
        for theta in thetas {
            let ch = chamber_of(&t, &theta).unwrap();
            assert!(ch.contains(&theta));
            check_fan(&t, &ch, &theta);
            check_walls(&t, &ch);
        }
    }
}

#[test]
fn every_chamber_graph_is_involutive() {
    for name in CATALOG {
        let t = Tiling::catalog(name).unwrap();
        let g = explore(&t, &seed(&t), 100).unwrap();
        assert!(g.all_agree(), "{name}");
        assert!(g.all_involutive(), "{name}");
    }
}

#[test]
fn chambers_are_equal_or_disjoint() {
    let t = Tiling::catalog("spp").unwrap();
    let g = explore(&t, &seed(&t), 100).unwrap();
    for (i, a) in g.chambers.iter().enumerate() {
        for (j, b) in g.chambers.iter().enumerate() {
            if i != j {
                assert!(!b.contains(&a.interior));
            }
        }
    }
}

fn stable_zero_sets(t: &Tiling, theta: &[i64]) -> Vec<u64> {
    t.patterns.stable(theta).map(|p| p.zero).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stable_set_is_constant_on_chambers(
        model in prop::sample::select(vec!["conifold", "spp", "c3z3"]),
        a in -9i64..10,
        b in -9i64..10,
        k in 1i64..4,
    ) {
        let t = Tiling::catalog(model).unwrap();
        let theta = if t.num_vertices() == 2 { vec![a, -a] } else { vec![a, b, -a - b] };
        prop_assume!(dimerwall_core::reps::check_generic(&t.quiver, &theta).is_ok());
        let ch = chamber_of(&t, &theta).unwrap();
        let base = stable_zero_sets(&t, &theta);
        let scaled: Vec<i64> = theta.iter().map(|x| k * x).collect();
        let mixed: Vec<i64> = theta.iter().zip(&ch.interior).map(|(x, y)| k * x + y).collect();
        for p in [scaled, ch.interior.clone(), mixed] {
            prop_assert!(ch.contains(&p));
            prop_assert_eq!(stable_zero_sets(&t, &p), base.clone());
        }
    }

    #[test]
    fn canonical_classes_ignore_characters(
        u in prop::array::uniform3(-5i64..6),
        v in 0usize..3,
    ) {
        let t = Tiling::catalog("c3z3").unwrap();
        let ch = chamber_of(&t, &[2, -1, -1]).unwrap();
        let c = &ch.classes[v];
        let shifted: Vec<i64> = c.iter().zip(ch.fan.principal(u)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(ch.fan.canonical_class(&shifted), ch.fan.canonical_class(c));
    }
}
