//! Brute-force reference computations used to generate golden fixtures and
//! to cross-check the main pipeline. Nothing here shares code with the
//! routines it checks beyond the parsed model and its quiver.

use std::collections::{BTreeMap, BTreeSet};

use dimerwall_exact::{convex_hull, interior_point, BigInt, ConvexPolygon, Point};
use serde::{Deserialize, Serialize};

use crate::dimer::{DimerModel, Quiver};
use crate::error::Result;

/// Perfect matchings by scanning every edge subset, sorted by edge list.
pub fn matchings_by_subsets(model: &DimerModel) -> Vec<Vec<usize>> {
    let ne = model.edges.len();
    assert!(ne <= 24, "subset scan is exponential");
    let mut out = Vec::new();
    for s in 0u64..1 << ne {
        let mut hits = vec![0; model.nodes.len()];
        for (e, edge) in model.edges.iter().enumerate() {
            if s >> e & 1 == 1 {
                hits[edge.black] += 1;
                hits[edge.white] += 1;
            }
        }
        if hits.iter().all(|&h| h == 1) {
            out.push((0..ne).filter(|&e| s >> e & 1 == 1).collect::<Vec<_>>());
        }
    }
    out.sort();
    out
}

/// Classes relative to the first matching in sorted order.
pub fn matching_classes(model: &DimerModel, matchings: &[Vec<usize>]) -> Vec<Point> {
    let sum = |m: &Vec<usize>| {
        m.iter().fold([0, 0], |acc, &e| {
            let w = model.edges[e].winding;
            [acc[0] + w[0], acc[1] + w[1]]
        })
    };
    let base = sum(&matchings[0]);
    matchings
        .iter()
        .map(|m| {
            let s = sum(m);
            [s[0] - base[0], s[1] - base[1]]
        })
        .collect()
}

/// Zero sets of representations with values 0/1 that satisfy the relations,
/// found by evaluating both sides of every relation.
pub fn admissible_patterns(q: &Quiver) -> Vec<u64> {
    let na = q.num_arrows();
    (0u64..1 << na)
        .filter(|&z| {
            let alive = |p: &Vec<usize>| p.iter().all(|&a| z >> a & 1 == 0);
            (0..na).all(|a| alive(&q.p_plus[a]) == alive(&q.p_minus[a]))
        })
        .collect()
}

/// Supports of subrepresentations: vertex sets with no support arrow leaving.
fn submodule_supports(q: &Quiver, zero: u64) -> Vec<u64> {
    let n = q.num_vertices;
    (1u64..(1 << n) - 1)
        .filter(|&r| {
            q.arrows
                .iter()
                .enumerate()
                .all(|(a, arr)| zero >> a & 1 == 1 || r >> arr.source & 1 == 0 || r >> arr.target & 1 == 1)
        })
        .collect()
}

fn weight(theta: &[i64], r: u64) -> i64 {
    (0..theta.len()).filter(|&v| r >> v & 1 == 1).map(|v| theta[v]).sum()
}

/// Zero sets of all `θ`-stable 0/1 representations.
pub fn stable_set(q: &Quiver, theta: &[i64]) -> BTreeSet<u64> {
    admissible_patterns(q)
        .into_iter()
        .filter(|&z| submodule_supports(q, z).iter().all(|&r| weight(theta, r) > 0))
        .collect()
}

fn normal(n: usize, r: u64) -> Vec<BigInt> {
    let last = (r >> (n - 1) & 1) as i64;
    (0..n - 1).map(|v| BigInt::from((r >> v & 1) as i64 - last)).collect()
}

/// Chambers as connected unions of cells of the arrangement of all
/// hyperplanes `θ(χ_R) = 0`, where adjacent cells are joined when their
/// stable sets coincide. Returns one sample parameter per chamber.
pub fn chambers_by_arrangement(q: &Quiver) -> Result<Vec<Vec<i64>>> {
    let n = q.num_vertices;
    if n == 1 {
        return Ok(vec![vec![0]]);
    }
    let planes: Vec<Vec<BigInt>> = (1u64..1 << (n - 1)).map(|r| normal(n, r)).collect();
    let k = planes.len();
    assert!(k <= 16, "sign-vector scan is exponential");
    let signed = |signs: u32, skip: Option<usize>| -> Vec<Vec<BigInt>> {
        (0..k)
            .filter(|&i| Some(i) != skip)
            .map(|i| {
                if signs >> i & 1 == 1 {
                    planes[i].clone()
                } else {
                    planes[i].iter().map(|x| -x).collect()
                }
            })
            .collect()
    };
    let mut cells: Vec<(u32, Vec<i64>)> = Vec::new();
    for signs in 0u32..1 << k {
        if let Ok(p) = interior_point(&signed(signs, None), &[], n - 1) {
            let x: Vec<i64> = p.iter().map(|v| i64::try_from(v).expect("small")).collect();
            let mut theta = x.clone();
            theta.push(-x.iter().sum::<i64>());
            cells.push((signs, theta));
        }
    }
    let stable: Vec<BTreeSet<u64>> = cells.iter().map(|(_, t)| stable_set(q, t)).collect();
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn root(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = root(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let diff = cells[i].0 ^ cells[j].0;
            if diff.count_ones() != 1 || stable[i] != stable[j] {
                continue;
            }
            let h = diff.trailing_zeros() as usize;
            if interior_point(&signed(cells[i].0, Some(h)), &[planes[h].clone()], n - 1).is_ok() {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut reps: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for i in 0..cells.len() {
        let r = root(&mut parent, i);
        reps.entry(r).or_insert_with(|| cells[i].1.clone());
    }
    Ok(reps.into_values().collect())
}

/// Unimodular triangulations of a lattice polygon by exhaustive covering
/// with unimodular triangles; each is a sorted triangle list.
pub fn unimodular_triangulations(polygon: &ConvexPolygon) -> Vec<Vec<[Point; 3]>> {
    let pts = polygon.lattice_points();
    let area = polygon.normalized_area() as usize;
    let cr = |o: Point, a: Point, b: Point| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut tris = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for l in j + 1..pts.len() {
                if cr(pts[i], pts[j], pts[l]).abs() == 1 {
                    tris.push([pts[i], pts[j], pts[l]]);
                }
            }
        }
    }
    // interiors overlap unless some edge line separates them
    let separated = |a: &[Point; 3], b: &[Point; 3]| {
        [a, b].iter().any(|t| {
            (0..3).any(|e| {
                let (p, q, r) = (t[e], t[(e + 1) % 3], t[(e + 2) % 3]);
                let side = cr(p, q, r).signum();
                let other = if std::ptr::eq(*t, a) { b } else { a };
                other.iter().all(|&x| cr(p, q, x) * side <= 0)
            })
        })
    };
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        tris: &[[Point; 3]],
        area: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<[Point; 3]>>,
        separated: &dyn Fn(&[Point; 3], &[Point; 3]) -> bool,
    ) {
        if chosen.len() == area {
            out.push(chosen.iter().map(|&i| tris[i]).collect());
            return;
        }
        for i in start..tris.len() {
            if chosen.iter().all(|&c| separated(&tris[c], &tris[i])) {
                chosen.push(i);
                rec(i + 1, tris, area, chosen, out, separated);
                chosen.pop();
            }
        }
    }
    rec(0, &tris, area, &mut chosen, &mut out, &separated);
    out
}

/// Number of monomials of degree at most `len` in three variables.
pub fn monomials_up_to(len: usize) -> usize {
    (0..=len).map(|d| (d + 1) * (d + 2) / 2).sum()
}

/// Golden data for a catalog model, all from the brute-force routines above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub faces: usize,
    pub edges: usize,
    pub nodes: usize,
    pub matchings: usize,
    pub polygon: Vec<Point>,
    pub multiplicities: Vec<(Point, usize)>,
    pub normalized_area: i64,
    pub triangulations: usize,
    pub chambers: usize,
}

pub fn fixture(q: &Quiver) -> Result<Fixture> {
    let model = &q.model;
    let ms = matchings_by_subsets(model);
    let classes = matching_classes(model, &ms);
    let mut mult: BTreeMap<Point, usize> = BTreeMap::new();
    for c in &classes {
        *mult.entry(*c).or_default() += 1;
    }
    let polygon = ConvexPolygon::new(&classes)?;
    Ok(Fixture {
        name: model.name.clone(),
        // Euler characteristic of the torus
        faces: model.edges.len() - model.nodes.len(),
        edges: model.edges.len(),
        nodes: model.nodes.len(),
        matchings: ms.len(),
        polygon: convex_hull(&classes),
        multiplicities: mult.into_iter().collect(),
        normalized_area: polygon.normalized_area(),
        triangulations: unimodular_triangulations(&polygon).len(),
        chambers: chambers_by_arrangement(q)?.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::Tiling;

    #[test]
    fn catalog_fixtures() {
        let got: Vec<(usize, usize, i64, usize, usize)> = ["c3", "conifold", "spp", "c3z3"]
            .iter()
            .map(|n| {
                let f = fixture(&Tiling::catalog(n).unwrap().quiver).unwrap();
                (f.faces, f.matchings, f.normalized_area, f.triangulations, f.chambers)
            })
            .collect();
        assert_eq!(got, vec![(1, 3, 1, 1, 1), (2, 4, 2, 2, 2), (3, 6, 3, 3, 6), (3, 6, 3, 1, 3)]);
    }

    #[test]
    fn monomials() {
        assert_eq!(monomials_up_to(2), 10);
        assert_eq!(monomials_up_to(6), 84);
    }
}
