//! The toric fan of the moduli space, tautological bundles as divisor
//! classes, and intersection numbers on curves and compact surfaces.
//!
//! A divisor class is a coefficient vector over the rays of a fan; two vectors
//! are linearly equivalent when they differ by `(⟨u, ν_ρ⟩)_ρ` for some `u`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use dimerwall_exact::{solve_rational, BigInt, BigRational, Point, Triangulation};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::dimer::mask_items;
use crate::error::{Error, Result};
use crate::reps::check_generic;
use crate::tiling::Tiling;

/// A torus-invariant prime divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ray {
    /// Index into the tiling's matchings.
    pub matching: usize,
    pub point: Point,
    pub generator: [i64; 3],
    /// Whether the divisor is compact (the point is interior to the polygon).
    pub compact: bool,
}

/// A torus-invariant curve: a two-dimensional cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Curve {
    /// The two rays spanning the cone, ascending.
    pub rays: [usize; 2],
    /// Third rays of the adjacent maximal cones (two for a compact curve).
    pub opposite: Vec<usize>,
    pub compact: bool,
    /// For compact curves, `ν_o0 + ν_o1 = a ν_r0 + b ν_r1`.
    pub a: i64,
    pub b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanModel {
    /// Sorted by lattice point.
    pub rays: Vec<Ray>,
    /// Maximal cones as ascending ray triples, sorted.
    pub cones: Vec<[usize; 3]>,
    /// Zero set of the fixed point of each cone.
    pub fixed_points: Vec<u64>,
    pub curves: Vec<Curve>,
    #[serde(skip)]
    pub triangulation: Triangulation,
}

fn det3(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Solves `M u = c` for a unimodular 3x3 `M` given by rows.
fn solve_unimodular(rows: [[i64; 3]; 3], c: [i64; 3]) -> [i64; 3] {
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let b: Vec<BigRational> = c.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let u = solve_rational(&a, &b).expect("unimodular system");
    let mut out = [0; 3];
    for (o, x) in out.iter_mut().zip(&u) {
        *o = x.to_integer().to_i64().expect("small solution");
    }
    out
}

impl FanModel {
    pub fn ray_index(&self, point: Point) -> Option<usize> {
        self.rays.iter().position(|r| r.point == point)
    }

    pub fn compact_divisors(&self) -> Vec<usize> {
        (0..self.rays.len()).filter(|&k| self.rays[k].compact).collect()
    }

    pub fn compact_curves(&self) -> Vec<usize> {
        (0..self.curves.len()).filter(|&c| self.curves[c].compact).collect()
    }

    pub fn curve_index(&self, r0: usize, r1: usize) -> Option<usize> {
        let key = [r0.min(r1), r0.max(r1)];
        self.curves.iter().position(|c| c.rays == key)
    }

    /// Intersection number `D_ρ · C` for a compact curve.
    pub fn intersection(&self, rho: usize, curve: usize) -> i64 {
        let c = &self.curves[curve];
        let mut d = 0;
        for &o in &c.opposite {
            if o == rho {
                d += 1;
            }
        }
        if c.rays[0] == rho {
            d -= c.a;
        }
        if c.rays[1] == rho {
            d -= c.b;
        }
        d
    }

    /// Degree of a divisor class on a compact curve.
    pub fn degree(&self, class: &[i64], curve: usize) -> Result<i64> {
        let c = &self.curves[curve];
        if !c.compact {
            return Err(Error::NonCompactCurve(curve));
        }
        Ok(class[c.opposite[0]] + class[c.opposite[1]] - c.a * class[c.rays[0]] - c.b * class[c.rays[1]])
    }

    /// The principal divisor of the character `u`.
    pub fn principal(&self, u: [i64; 3]) -> Vec<i64> {
        self.rays
            .iter()
            .map(|r| (0..3).map(|i| u[i] * r.generator[i]).sum())
            .collect()
    }

    /// The lexicographically first ray triple with unimodular generators.
    fn reference_triple(&self) -> [usize; 3] {
        let n = self.rays.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let g = |x: usize| self.rays[x].generator;
                    if det3(g(i), g(j), g(k)).abs() == 1 {
                        return [i, j, k];
                    }
                }
            }
        }
        unreachable!("a smooth fan has a unimodular cone")
    }

    /// Normal form of a class modulo linear equivalence: the representative
    /// vanishing on the reference triple.
    pub fn canonical_class(&self, class: &[i64]) -> Vec<i64> {
        let t = self.reference_triple();
        let rows = t.map(|i| self.rays[i].generator);
        let u = solve_unimodular(rows, t.map(|i| class[i]));
        let p = self.principal(u);
        class.iter().zip(&p).map(|(x, y)| x - y).collect()
    }

    /// Canonical form keyed by lattice point, for comparison across fans.
    pub fn canonical_by_point(&self, class: &[i64]) -> BTreeMap<Point, i64> {
        self.rays
            .iter()
            .map(|r| r.point)
            .zip(self.canonical_class(class))
            .collect()
    }

    /// Rays sharing a maximal cone with `k`.
    pub fn neighbors(&self, k: usize) -> Vec<usize> {
        let s: BTreeSet<usize> = self
            .cones
            .iter()
            .filter(|c| c.contains(&k))
            .flat_map(|c| c.iter().copied())
            .filter(|&j| j != k)
            .collect();
        s.into_iter().collect()
    }
}

/// The fan of `M_θ` assembled from torus-fixed points, with every structural
/// invariant checked.
pub fn fan(t: &Tiling, theta: &[i64]) -> Result<FanModel> {
    check_generic(&t.quiver, theta)?;
    let mut rays: Vec<Ray> = Vec::new();
    let mut fixed: Vec<u64> = Vec::new();
    for p in t.patterns.stable(theta) {
        match p.orbit_dim {
            2 => {
                let m = t.matchings.index_of_mask(p.zero).ok_or_else(|| {
                    Error::FanConsistency(format!(
                        "two-dimensional orbit with zero set {:?} which is not a perfect matching",
                        mask_items(p.zero)
                    ))
                })?;
                let point = t.matchings.matchings[m].class;
                rays.push(Ray {
                    matching: m,
                    point,
                    generator: t.lattice.valuations[m],
                    compact: !t.polygon.polygon.on_boundary(point),
                });
            }
            0 => fixed.push(p.zero),
            _ => {}
        }
    }
    rays.sort_by_key(|r| r.point);
    for w in rays.windows(2) {
        if w[0].point == w[1].point {
            return Err(Error::FanConsistency(format!(
                "two divisor matchings at lattice point {:?}",
                w[0].point
            )));
        }
    }
    for r in &rays {
        if r.generator[2] != 1 {
            return Err(Error::FanConsistency(format!("ray {:?} is not at height 1", r.generator)));
        }
    }

    let mut cones: Vec<([usize; 3], u64)> = Vec::new();
    for &z in &fixed {
        let members: Vec<usize> = (0..rays.len())
            .filter(|&i| t.matchings.matchings[rays[i].matching].mask & !z == 0)
            .collect();
        let [a, b, c] = members[..] else {
            return Err(Error::FanConsistency(format!(
                "fixed point {:?} lies on {} divisors",
                mask_items(z),
                members.len()
            )));
        };
        if det3(rays[a].generator, rays[b].generator, rays[c].generator).abs() != 1 {
            return Err(Error::FanConsistency(format!("cone {:?} is not unimodular", [a, b, c])));
        }
        cones.push(([a, b, c], z));
    }
    cones.sort();
    let triangulation = Triangulation::new(
        t.polygon.polygon.clone(),
        cones.iter().map(|(c, _)| c.map(|i| rays[i].point)),
    );
    if triangulation.triangles.len() != cones.len()
        || cones.len() as i64 != t.polygon.normalized_area()
        || !triangulation.is_valid_unimodular()
    {
        return Err(Error::FanConsistency(format!(
            "{} cones do not triangulate the polygon of normalized area {}",
            cones.len(),
            t.polygon.normalized_area()
        )));
    }

    let mut faces: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
    for (c, _) in &cones {
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            faces.entry([c[i], c[j]]).or_default().push(c[k]);
        }
    }
    let mut curves = Vec::new();
    for (pair, opposite) in faces {
        let compact = opposite.len() == 2;
        let (mut a, mut b) = (0, 0);
        if compact {
            let g = |i: usize| rays[i].generator;
            let lhs: Vec<i64> = (0..3).map(|x| g(opposite[0])[x] + g(opposite[1])[x]).collect();
            let m: Vec<Vec<BigRational>> = (0..3)
                .map(|x| vec![g(pair[0])[x].into(), g(pair[1])[x].into()])
                .map(|r: Vec<i64>| r.into_iter().map(|v| BigRational::from_integer(BigInt::from(v))).collect())
                .collect();
            let rhs: Vec<BigRational> = lhs.iter().map(|&v| BigRational::from_integer(v.into())).collect();
            let sol = solve_rational(&m, &rhs)
                .filter(|s| s.iter().all(|x| x.is_integer()))
                .ok_or_else(|| Error::FanConsistency(format!("no integral wall relation for {pair:?}")))?;
            a = sol[0].to_integer().to_i64().expect("small");
            b = sol[1].to_integer().to_i64().expect("small");
            if a + b != 2 {
                return Err(Error::FanConsistency(format!("wall relation of {pair:?} violates height")));
            }
        }
        curves.push(Curve {
            rays: pair,
            opposite,
            compact,
            a,
            b,
        });
    }

    Ok(FanModel {
        rays,
        fixed_points: cones.iter().map(|&(_, z)| z).collect(),
        cones: cones.into_iter().map(|(c, _)| c).collect(),
        curves,
        triangulation,
    })
}

/// Shortest paths from `v0` to every vertex, preferring lower arrow indices.
pub fn paths_from_v0(t: &Tiling) -> Result<Vec<Vec<usize>>> {
    let q = &t.quiver;
    let mut path: Vec<Option<Vec<usize>>> = vec![None; q.num_vertices];
    path[q.v0] = Some(Vec::new());
    let mut queue = VecDeque::from([q.v0]);
    while let Some(v) = queue.pop_front() {
        for (a, arr) in q.arrows.iter().enumerate() {
            if arr.source == v && path[arr.target].is_none() {
                let mut p = path[v].clone().unwrap();
                p.push(a);
                path[arr.target] = Some(p);
                queue.push_back(arr.target);
            }
        }
    }
    path.into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or(Error::Unreachable(v)))
        .collect()
}

/// The divisor of the section given by a path: coefficient on `ρ` is the
/// number of arrows of the path in the matching of `ρ`.
pub fn class_of_path(t: &Tiling, fan: &FanModel, path: &[usize]) -> Vec<i64> {
    fan.rays
        .iter()
        .map(|r| {
            let mask = t.matchings.matchings[r.matching].mask;
            path.iter().filter(|&&a| mask >> a & 1 == 1).count() as i64
        })
        .collect()
}

/// `L_v` for every vertex, normalized by `L_{v0} = 0`.
pub fn tautological_classes(t: &Tiling, fan: &FanModel) -> Result<Vec<Vec<i64>>> {
    Ok(paths_from_v0(t)?.iter().map(|p| class_of_path(t, fan, p)).collect())
}

/// `Σ_v η(v) L_v`.
pub fn line_bundle(classes: &[Vec<i64>], eta: &[i64]) -> Vec<i64> {
    let n = classes.first().map_or(0, Vec::len);
    (0..n).map(|i| classes.iter().zip(eta).map(|(c, e)| c[i] * e).sum()).collect()
}

/// Degrees of a class on every compact curve, in curve order.
pub fn curve_degrees(fan: &FanModel, class: &[i64]) -> Vec<(usize, i64)> {
    fan.compact_curves()
        .into_iter()
        .map(|c| (c, fan.degree(class, c).expect("compact")))
        .collect()
}

/// `Σ_v χ(L_v ⊗ O_ℓ) θ(v)` with `χ(L_v ⊗ O_ℓ) = deg L_v|_ℓ + 1`.
pub fn curve_pairing(fan: &FanModel, classes: &[Vec<i64>], theta: &[i64], curve: usize) -> Result<i64> {
    let mut s = 0;
    for (c, th) in classes.iter().zip(theta) {
        s += (fan.degree(c, curve)? + 1) * th;
    }
    Ok(s)
}

/// The compact toric surface `D_k`: its boundary curves `C_kj` and their
/// intersection matrix.
struct Surface {
    neighbors: Vec<usize>,
    form: Vec<Vec<i64>>,
}

impl Surface {
    fn new(fan: &FanModel, k: usize) -> Result<Surface> {
        if !fan.rays.get(k).is_some_and(|r| r.compact) {
            return Err(Error::NonCompactDivisor(k));
        }
        let neighbors = fan.neighbors(k);
        let n = neighbors.len();
        let mut form = vec![vec![0; n]; n];
        for (x, &j) in neighbors.iter().enumerate() {
            let c = fan.curve_index(k, j).expect("edge of a cone");
            form[x][x] = fan.intersection(j, c);
            for (y, &l) in neighbors.iter().enumerate() {
                if x != y {
                    let mut tri = [k, j, l];
                    tri.sort();
                    if fan.cones.contains(&tri) {
                        form[x][y] = 1;
                    }
                }
            }
        }
        Ok(Surface { neighbors, form })
    }

    /// Riemann–Roch with `K = -Σ C_kj`: `χ(x) = 1 + (x.x - x.K) / 2`.
    fn chi(&self, x: &[i64]) -> i64 {
        let n = x.len();
        let ix: Vec<i64> = (0..n).map(|i| (0..n).map(|j| self.form[i][j] * x[j]).sum()).collect();
        let xx: i64 = (0..n).map(|i| x[i] * ix[i]).sum();
        let xk: i64 = -ix.iter().sum::<i64>();
        let twice = xx - xk;
        debug_assert!(twice % 2 == 0, "Riemann–Roch parity");
        1 + twice / 2
    }

    /// Restriction of a threefold class to the surface in the `C_kj` basis,
    /// using `D_k|_{D_k} = K`.
    fn restrict(&self, k: usize, class: &[i64]) -> Vec<i64> {
        self.neighbors.iter().map(|&j| class[j] - class[k]).collect()
    }
}

/// `(χ(L|_D), χ(L^∨ ⊗ ω_D))` for the compact divisor of ray `k`.
pub fn surface_chi(fan: &FanModel, k: usize, class: &[i64]) -> Result<(i64, i64)> {
    let s = Surface::new(fan, k)?;
    let x = s.restrict(k, class);
    let dual_twist: Vec<i64> = x.iter().map(|v| -v - 1).collect();
    Ok((s.chi(&x), s.chi(&dual_twist)))
}

/// Self-intersection numbers `C_kj^2` on the surface of ray `k`, keyed by the
/// neighboring ray.
pub fn surface_curve_squares(fan: &FanModel, k: usize) -> Result<Vec<(usize, i64)>> {
    let s = Surface::new(fan, k)?;
    Ok(s.neighbors.iter().enumerate().map(|(x, &j)| (j, s.form[x][x])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(name: &str, theta: &[i64]) -> (Tiling, FanModel, Vec<Vec<i64>>) {
        let t = Tiling::catalog(name).unwrap();
        let f = fan(&t, theta).unwrap();
        let c = tautological_classes(&t, &f).unwrap();
        (t, f, c)
    }

    #[test]
    fn c3_is_one_cone() {
        let (_, f, c) = setup("c3", &[0]);
        assert_eq!(f.cones, vec![[0, 1, 2]]);
        assert!(f.compact_curves().is_empty());
        assert_eq!(c, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn conifold_diagonals() {
        let (_, f1, c1) = setup("conifold", &[1, -1]);
        let (_, f2, _) = setup("conifold", &[-1, 1]);
        assert_eq!(f1.cones.len(), 2);
        assert_ne!(f1.triangulation, f2.triangulation);
        assert!(f1.triangulation.differs_by_flip(&f2.triangulation));
        let l = f1.compact_curves();
        assert_eq!(l.len(), 1);
        // L_{v0} = 0 and L(θ) is positive on the flopping curve
        assert!(c1[0].iter().all(|&x| x == 0));
        let lt = line_bundle(&c1, &[1, -1]);
        assert!(f1.degree(&lt, l[0]).unwrap() > 0);
        assert_eq!(curve_pairing(&f1, &c1, &[1, -1], l[0]).unwrap(), 1);
        assert!(line_bundle(&c1, &[0, 0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn c3z3_surface() {
        let (_, f, _) = setup("c3z3", &[2, -1, -1]);
        let k = f.compact_divisors();
        assert_eq!(k.len(), 1);
        let k = k[0];
        // local P^2: each boundary line has self-intersection 1
        let sq = surface_curve_squares(&f, k).unwrap();
        assert_eq!(sq.len(), 3);
        assert!(sq.iter().all(|&(_, s)| s == 1));
        let zero = vec![0; f.rays.len()];
        assert_eq!(surface_chi(&f, k, &zero).unwrap(), (1, 1));
        let mut line = zero.clone();
        line[sq[0].0] = 1;
        assert_eq!(surface_chi(&f, k, &line).unwrap().0, 3);
        // D_k restricted to itself is the canonical class, degree -3 on lines
        let mut dk = zero.clone();
        dk[k] = 1;
        for (c, d) in curve_degrees(&f, &dk) {
            if f.curves[c].rays.contains(&k) {
                assert_eq!(d, -3);
            }
        }
        let boundary = f.rays.iter().position(|r| !r.compact).unwrap();
        assert_eq!(surface_chi(&f, boundary, &zero), Err(Error::NonCompactDivisor(boundary)));
    }

    #[test]
    fn canonical_form_kills_principal_divisors() {
        let (_, f, c) = setup("c3z3", &[2, -1, -1]);
        for class in &c {
            let canon = f.canonical_class(class);
            let shifted: Vec<i64> = class.iter().zip(f.principal([1, -2, 3])).map(|(x, y)| x + y).collect();
            assert_eq!(f.canonical_class(&shifted), canon);
        }
    }
}
