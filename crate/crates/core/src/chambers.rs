//! Chambers in the space of stability parameters, their walls, and the
//! classification of the contraction at each wall.
//!
//! Cones live in `Θ ≅ Q^{n-1}`, coordinatized by the first `n - 1` entries of
//! `θ`; the last entry is minus their sum.

use std::collections::{BTreeMap, BTreeSet};

use dimerwall_exact::{convex_hull, cross, interior_point, BigInt, Point, RationalCone};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::dimer::{mask_items, Quiver};
use crate::error::{Error, Result};
use crate::moduli::{curve_degrees, fan, line_bundle, surface_chi, tautological_classes, FanModel};
use crate::reps::{check_generic, pairing, support_census};
use crate::tiling::Tiling;

pub(crate) fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) fn small(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(format!("{x} does not fit in i64"))))
        .collect()
}

/// The linear form `η ↦ Σ_v a_v η_v` in `Θ` coordinates.
pub fn theta_form(a: &[i64]) -> Vec<i64> {
    let last = a[a.len() - 1];
    a[..a.len() - 1].iter().map(|x| x - last).collect()
}

/// The normal of the hyperplane `η(χ_R) = 0` in `Θ` coordinates.
pub fn subset_normal(n: usize, r: u64) -> Vec<i64> {
    theta_form(&(0..n).map(|v| (r >> v & 1) as i64).collect::<Vec<_>>())
}

/// Completes `Θ` coordinates to a parameter.
pub fn lift(x: &[i64]) -> Vec<i64> {
    let mut t = x.to_vec();
    t.push(-x.iter().sum::<i64>());
    t
}

#[derive(Clone, Debug, Serialize)]
pub struct Chamber {
    pub theta: Vec<i64>,
    /// Subsets `R` with `χ_R` in the census, as masks.
    pub census: Vec<u64>,
    #[serde(serialize_with = "ser_cone")]
    pub cone: RationalCone,
    /// Primitive sum of the cone's generators, lifted to a parameter.
    pub interior: Vec<i64>,
    pub fan: FanModel,
    pub classes: Vec<Vec<i64>>,
}

fn ser_cone<S: serde::Serializer>(c: &RationalCone, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let conv = |v: &Vec<Vec<BigInt>>| -> Vec<Vec<String>> {
        v.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    };
    let mut st = s.serialize_struct("RationalCone", 3)?;
    st.serialize_field("ambient_rank", &c.ambient_rank)?;
    st.serialize_field("generators", &conv(&c.generators))?;
    st.serialize_field("halfspaces", &conv(&c.halfspaces))?;
    st.end()
}

impl Chamber {
    /// Canonical identity of the chamber: its primitive H-representation.
    pub fn key(&self) -> Vec<Vec<BigInt>> {
        self.cone.halfspaces.clone()
    }

    pub fn num_vertices(&self) -> usize {
        self.theta.len()
    }

    pub fn contains(&self, theta: &[i64]) -> bool {
        let x = big(&theta[..theta.len() - 1]);
        self.cone.contains_in_interior(&x)
    }
}

fn census_cone(n: usize, census: &[u64]) -> RationalCone {
    let hs: Vec<Vec<BigInt>> = census.iter().map(|&r| big(&subset_normal(n, r))).collect();
    RationalCone::from_halfspaces(&hs, n - 1)
}

/// The chamber of a generic `θ` together with its moduli space.
pub fn chamber_of(t: &Tiling, theta: &[i64]) -> Result<Chamber> {
    let q = &t.quiver;
    check_generic(q, theta)?;
    let n = q.num_vertices;
    let census = support_census(q, &t.patterns, theta)?;
    let cone = census_cone(n, &census);
    let strict: Vec<Vec<BigInt>> = census.iter().map(|&r| big(&subset_normal(n, r))).collect();
    let p = interior_point(&strict, &[], n - 1)?;
    let g = p.iter().fold(BigInt::from(0), |g, x| num_integer::Integer::gcd(&g, x));
    let p: Vec<BigInt> = if g > BigInt::from(1) { p.iter().map(|x| x / &g).collect() } else { p };
    let interior = lift(&small(&p)?);
    let fan = fan(t, theta)?;
    let classes = tautological_classes(t, &fan)?;
    let lt = line_bundle(&classes, theta);
    for (c, d) in curve_degrees(&fan, &lt) {
        if d <= 0 {
            return Err(Error::FanConsistency(format!(
                "L(θ) has degree {d} on compact curve {:?}",
                fan.curves[c].rays
            )));
        }
    }
    Ok(Chamber {
        theta: theta.to_vec(),
        census,
        cone,
        interior,
        fan,
        classes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WallKind {
    #[serde(rename = "0")]
    Zero,
    I,
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidSide {
    RigidSub,
    RigidQuot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionTopology {
    pub r1_connected: bool,
    pub r2_connected: bool,
    pub r1_simply_connected: bool,
    pub r2_simply_connected: bool,
    pub boundary_components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallType {
    pub kind: WallKind,
    /// For type 0, the sides whose module is rigid; both when undecided.
    pub rigid: Vec<RigidSide>,
    /// Compact curves of degree 0 under `L(θ₀)`.
    pub contracted_curves: Vec<usize>,
    /// For type III, the ray of the contracted divisor.
    pub contracted_divisor: Option<usize>,
    /// For types I and III, a contracted curve.
    pub fiber: Option<usize>,
}

impl WallType {
    pub fn label(&self) -> String {
        match self.kind {
            WallKind::I => "I".into(),
            WallKind::III => "III".into(),
            WallKind::Zero => {
                let s: Vec<&str> = self
                    .rigid
                    .iter()
                    .map(|r| match r {
                        RigidSide::RigidSub => "rigid-sub",
                        RigidSide::RigidQuot => "rigid-quot",
                    })
                    .collect();
                format!("0-{}", s.join("/"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallDescriptor {
    pub facet: usize,
    /// Inward primitive normal in `Θ` coordinates; equals the normal of `R₁`.
    pub normal: Vec<i64>,
    pub r1: Vec<usize>,
    pub r2: Vec<usize>,
    #[serde(skip)]
    pub r1_mask: u64,
    /// A parameter in the relative interior of the facet on no other wall.
    pub theta0: Vec<i64>,
    /// A generic parameter just across the facet.
    pub theta_prime: Vec<i64>,
    /// Zero sets of `θ`-stable patterns that are not `θ₀`-stable.
    pub unstable_patterns: Vec<Vec<usize>>,
    pub z_dim: usize,
    /// Rays of the divisorial part of the unstable locus.
    pub z_divisors: Vec<usize>,
    pub topology: RegionTopology,
    pub wall_type: Option<WallType>,
}

impl WallDescriptor {
    pub fn v0_side_is_r1(&self, v0: usize) -> bool {
        self.r1_mask >> v0 & 1 == 1
    }

    /// The reduced unstable-locus divisor as a class.
    pub fn z_class(&self, num_rays: usize) -> Vec<i64> {
        let mut z = vec![0; num_rays];
        for &k in &self.z_divisors {
            z[k] = 1;
        }
        z
    }
}

/// `θ₀ = Σ N^i g_i` over the facet generators, for the least `N >= 2` that
/// avoids every hyperplane other than the facet's own.
fn wall_parameter(n: usize, gens: &[Vec<i64>], r1: u64) -> Vec<i64> {
    let full = (1u64 << n) - 1;
    let r2 = full & !r1;
    if gens.is_empty() {
        return vec![0; n];
    }
    for base in 2i64.. {
        let mut x = vec![0i64; n - 1];
        let mut w = 1i64;
        for g in gens {
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += w * gi;
            }
            w *= base;
        }
        let th = lift(&x);
        if (1..full).all(|r| r == r1 || r == r2 || pairing(&th, r) != 0) {
            return th;
        }
    }
    unreachable!()
}

/// `θ' = m θ₀ - u` for the least `m >= 1` keeping every other hyperplane's
/// sign, where `u` is positive on `R₁` and sums to zero.
fn crossing_parameter(theta0: &[i64], r1: u64) -> Vec<i64> {
    let n = theta0.len();
    let full = (1u64 << n) - 1;
    let r2 = full & !r1;
    let (n1, n2) = (r1.count_ones() as i64, r2.count_ones() as i64);
    let u: Vec<i64> = (0..n).map(|v| if r1 >> v & 1 == 1 { n2 } else { -n1 }).collect();
    for m in 1i64.. {
        let th: Vec<i64> = (0..n).map(|v| m * theta0[v] - u[v]).collect();
        let ok = (1..full).all(|r| {
            let p = pairing(&th, r);
            if r == r1 || r == r2 {
                p != 0
            } else {
                p.signum() == pairing(theta0, r).signum()
            }
        });
        if ok {
            return th;
        }
    }
    unreachable!()
}

fn components(nodes: &[usize], adjacent: impl Fn(usize, usize) -> bool) -> usize {
    let mut seen = vec![false; nodes.len()];
    let mut count = 0;
    for s in 0..nodes.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..nodes.len() {
                if !seen[j] && adjacent(nodes[i], nodes[j]) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    count
}

/// Topology of a union of closed faces on the torus: (connected, simply connected).
fn region_topology(q: &Quiver, r: u64) -> (bool, bool) {
    let faces = mask_items(r);
    let closure_nodes: Vec<BTreeSet<usize>> = faces.iter().map(|&f| q.face_nodes(f)).collect();
    let idx: BTreeMap<usize, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let connected = components(&faces, |a, b| !closure_nodes[idx[&a]].is_disjoint(&closure_nodes[idx[&b]])) == 1;
    let nodes: BTreeSet<usize> = closure_nodes.iter().flatten().copied().collect();
    let edges: BTreeSet<usize> = faces.iter().flat_map(|&f| q.face_edges(f)).collect();
    let euler = nodes.len() as i64 - edges.len() as i64 + faces.len() as i64;
    (connected, connected && euler == 1)
}

/// Topology of `R₁`, `R₂` and their common boundary.
pub fn topology(q: &Quiver, r1: u64) -> RegionTopology {
    let r2 = q.all_vertices_mask() & !r1;
    let (c1, s1) = region_topology(q, r1);
    let (c2, s2) = region_topology(q, r2);
    let boundary: Vec<usize> = q
        .arrows
        .iter()
        .enumerate()
        .filter(|(_, a)| (r1 >> a.source & 1) != (r1 >> a.target & 1))
        .map(|(e, _)| e)
        .collect();
    let model = &q.model;
    let ends = |e: usize| [model.edges[e].black, model.edges[e].white];
    let boundary_components = components(&boundary, |a, b| ends(a).iter().any(|x| ends(b).contains(x)));
    RegionTopology {
        r1_connected: c1,
        r2_connected: c2,
        r1_simply_connected: s1,
        r2_simply_connected: s2,
        boundary_components,
    }
}

/// One descriptor per facet of the chamber, without type.
pub fn facets(t: &Tiling, ch: &Chamber) -> Result<Vec<WallDescriptor>> {
    let q = &t.quiver;
    let n = q.num_vertices;
    if n < 2 {
        return Ok(Vec::new());
    }
    let full = q.all_vertices_mask();
    let mut out = Vec::new();
    for (index, f) in ch.cone.facets().iter().enumerate() {
        let normal = small(f)?;
        let candidates: Vec<u64> = ch
            .census
            .iter()
            .copied()
            .filter(|&r| subset_normal(n, r) == normal)
            .collect();
        let r1 = match candidates[..] {
            [r] => r,
            [] => return Err(Error::WallAmbiguity(format!("no census subset supports facet {normal:?}"))),
            _ => {
                return Err(Error::WallAmbiguity(format!(
                    "subsets {:?} all support facet {normal:?}",
                    candidates.iter().map(|&r| mask_items(r)).collect::<Vec<_>>()
                )))
            }
        };
        let mut hs = ch.cone.halfspaces.clone();
        hs.push(f.iter().map(|x| -x).collect());
        let face = RationalCone::from_halfspaces(&hs, n - 1);
        let gens: Vec<Vec<i64>> = face.generators.iter().map(|g| small(g)).collect::<Result<_>>()?;
        let theta0 = wall_parameter(n, &gens, r1);
        let theta_prime = crossing_parameter(&theta0, r1);

        let mut unstable = Vec::new();
        let mut z_dim = 0;
        for p in t.patterns.stable(&ch.theta) {
            if p.closed.contains(&r1) {
                unstable.push(mask_items(p.zero));
                z_dim = z_dim.max(p.orbit_dim);
            }
        }
        let z_divisors: Vec<usize> = (0..ch.fan.rays.len())
            .filter(|&k| {
                let mask = t.matchings.matchings[ch.fan.rays[k].matching].mask;
                t.patterns.get(mask).is_some_and(|p| p.closed.contains(&r1))
            })
            .collect();

        out.push(WallDescriptor {
            facet: index,
            normal,
            r1: mask_items(r1),
            r2: mask_items(full & !r1),
            r1_mask: r1,
            theta0,
            theta_prime,
            unstable_patterns: unstable,
            z_dim,
            z_divisors,
            topology: topology(q, r1),
            wall_type: None,
        });
    }
    Ok(out)
}

/// Position of a lattice point relative to a convex polygon given by its
/// counterclockwise vertices.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Position {
    Vertex,
    Edge,
    Interior,
}

fn position(hull: &[Point], p: Point) -> Position {
    if hull.contains(&p) {
        return Position::Vertex;
    }
    let k = hull.len();
    let on_edge = (0..k).any(|i| cross(hull[i], hull[(i + 1) % k], p) == 0);
    if on_edge {
        Position::Edge
    } else {
        Position::Interior
    }
}

/// Types the wall by the exceptional locus of `L(θ₀)`.
pub fn classify_wall(t: &Tiling, ch: &Chamber, wall: &WallDescriptor) -> Result<WallDescriptor> {
    let fan = &ch.fan;
    let topo = &wall.topology;
    if !topo.r1_connected || !topo.r2_connected {
        return Err(Error::TopologyMismatch(format!(
            "regions {:?} / {:?} are not both connected",
            wall.r1, wall.r2
        )));
    }
    if !(1..=2).contains(&topo.boundary_components) {
        return Err(Error::TopologyMismatch(format!(
            "boundary of {:?} has {} components",
            wall.r1, topo.boundary_components
        )));
    }

    let l0 = line_bundle(&ch.classes, &wall.theta0);
    let mut contracted = Vec::new();
    for (c, d) in curve_degrees(fan, &l0) {
        if d < 0 {
            return Err(Error::FanConsistency(format!("L(θ₀) has degree {d} on curve {c}")));
        }
        if d == 0 {
            contracted.push(c);
        }
    }

    // cells of the coarsened subdivision
    let m = fan.cones.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &c in &contracted {
        let pair = fan.curves[c].rays;
        let touching: Vec<usize> = (0..m)
            .filter(|&i| fan.cones[i].contains(&pair[0]) && fan.cones[i].contains(&pair[1]))
            .collect();
        for w in touching.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut cells: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..m {
        let root = find(&mut parent, i);
        cells.entry(root).or_default().extend(fan.cones[i]);
    }
    let mut divisors = Vec::new();
    for k in 0..fan.rays.len() {
        let mut positions = Vec::new();
        for rays in cells.values().filter(|s| s.contains(&k)) {
            let pts: Vec<Point> = rays.iter().map(|&r| fan.rays[r].point).collect();
            positions.push(position(&convex_hull(&pts), fan.rays[k].point));
        }
        if positions.contains(&Position::Interior) {
            return Err(Error::TypeII(format!(
                "divisor at {:?} is contracted to a point",
                fan.rays[k].point
            )));
        }
        let on_edge = positions.iter().filter(|&&p| p == Position::Edge).count();
        if on_edge == positions.len() {
            divisors.push(k);
        } else if on_edge > 0 {
            return Err(Error::NonPrimitiveContraction(format!(
                "divisor at {:?} is only partly contracted",
                fan.rays[k].point
            )));
        }
    }

    let (kind, divisor, fiber) = if !divisors.is_empty() {
        if divisors.len() > 1 {
            return Err(Error::NonPrimitiveContraction(format!("{} divisors contracted", divisors.len())));
        }
        let k = divisors[0];
        let fiber = contracted.iter().copied().find(|&c| fan.curves[c].rays.contains(&k));
        (WallKind::III, Some(k), fiber)
    } else if !contracted.is_empty() {
        if contracted.len() > 1 {
            return Err(Error::NonPrimitiveContraction(format!(
                "{} disjoint curves contracted",
                contracted.len()
            )));
        }
        (WallKind::I, None, Some(contracted[0]))
    } else {
        (WallKind::Zero, None, None)
    };

    let expected_dim = if kind == WallKind::I { 1 } else { 2 };
    if wall.z_dim != expected_dim {
        return Err(Error::TopologyMismatch(format!(
            "type {kind:?} wall with unstable locus of dimension {}",
            wall.z_dim
        )));
    }
    let expected_count = match kind {
        WallKind::Zero => Some(1),
        WallKind::III => Some(2),
        WallKind::I => None,
    };
    if let Some(c) = expected_count {
        if topo.boundary_components != c {
            return Err(Error::TopologyMismatch(format!(
                "type {kind:?} wall but boundary has {} components",
                topo.boundary_components
            )));
        }
    }
    let mut rigid = Vec::new();
    if kind == WallKind::Zero {
        if topo.r1_simply_connected {
            rigid.push(RigidSide::RigidSub);
        }
        if topo.r2_simply_connected {
            rigid.push(RigidSide::RigidQuot);
        }
        if rigid.is_empty() {
            return Err(Error::TopologyMismatch(format!(
                "type 0 wall with neither {:?} nor {:?} simply connected",
                wall.r1, wall.r2
            )));
        }
        if wall.z_divisors.is_empty() {
            return Err(Error::TopologyMismatch("type 0 wall without divisorial unstable locus".into()));
        }
    }
    let _ = t;
    let mut typed = wall.clone();
    typed.wall_type = Some(WallType {
        kind,
        rigid,
        contracted_curves: contracted,
        contracted_divisor: divisor,
        fiber,
    });
    Ok(typed)
}

/// Facets of the chamber, each classified.
pub fn walls(t: &Tiling, ch: &Chamber) -> Result<Vec<WallDescriptor>> {
    facets(t, ch)?.iter().map(|w| classify_wall(t, ch, w)).collect()
}

/// Linear forms `a` (full coordinates) with `Σ a_v η_v > 0` on the chamber,
/// read off from the geometry of `M_θ`.
pub fn geometric_inequalities(ch: &Chamber) -> Result<Vec<Vec<i64>>> {
    let fan = &ch.fan;
    let cl = &ch.classes;
    let mut forms = Vec::new();
    for c in fan.compact_curves() {
        let a: Vec<i64> = cl.iter().map(|l| fan.degree(l, c).map(|d| d + 1)).collect::<Result<_>>()?;
        forms.push(a);
    }
    for k in fan.compact_divisors() {
        for lv in cl {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for lw in cl {
                let diff: Vec<i64> = lw.iter().zip(lv).map(|(x, y)| x - y).collect();
                let back: Vec<i64> = diff.iter().map(|x| -x).collect();
                pos.push(surface_chi(fan, k, &diff)?.0);
                // χ(M ⊗ ω_D) = χ(M^∨) by Serre duality
                neg.push(-surface_chi(fan, k, &back)?.1);
            }
            forms.push(pos);
            forms.push(neg);
        }
    }
    Ok(forms)
}

/// The chamber as cut out by the Euler-characteristic inequalities of curves
/// and compact divisors; must coincide with the census cone.
pub fn chamber_from_geometry(ch: &Chamber) -> Result<RationalCone> {
    let n = ch.num_vertices();
    let hs: Vec<Vec<BigInt>> = geometric_inequalities(ch)?
        .iter()
        .map(|a| theta_form(a))
        .filter(|h| h.iter().any(|&x| x != 0))
        .map(|h| big(&h))
        .collect();
    let cone = RationalCone::from_halfspaces(&hs, n - 1);
    if cone != ch.cone {
        let sep = cone
            .halfspaces
            .iter()
            .find(|h| !ch.cone.halfspaces.contains(h))
            .or_else(|| ch.cone.halfspaces.iter().find(|h| !cone.halfspaces.contains(h)))
            .map(|h| small(h))
            .transpose()?;
        return Err(Error::GeometryMismatch(format!(
            "geometric and census cones differ along {sep:?}"
        )));
    }
    Ok(cone)
}
