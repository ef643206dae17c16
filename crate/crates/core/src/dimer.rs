//! Dimer models on the torus, their dual quivers, perfect matchings and the
//! characteristic polygon.
//!
//! Conventions. Edge `e` has two darts: `2e` runs black to white and `2e + 1`
//! white to black. A face is traced by arriving at a node along some edge and
//! leaving along the edge preceding it in that node's counterclockwise
//! rotation. The arrow of `e` goes from the face of dart `2e + 1` to the face
//! of dart `2e`, which puts the white node on its right.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use dimerwall_exact::{smith_normal_form, ConvexPolygon, IntMatrix, Point};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arrows are stored in `u64` masks.
pub const MAX_EDGES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub black: usize,
    pub white: usize,
    pub winding: [i64; 2],
}

/// A bipartite graph on the torus given by a rotation system and edge
/// winding vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimerModel {
    pub name: String,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Counterclockwise order of incident edges at each node.
    pub rotation: Vec<Vec<usize>>,
    pub v0: Option<usize>,
}

impl DimerModel {
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].black == v || self.edges[e].white == v)
            .collect()
    }

    fn position(&self, v: usize, e: usize) -> usize {
        self.rotation[v].iter().position(|&x| x == e).expect("edge in rotation")
    }

    pub fn next_ccw(&self, v: usize, e: usize) -> usize {
        let r = &self.rotation[v];
        r[(self.position(v, e) + 1) % r.len()]
    }

    pub fn prev_ccw(&self, v: usize, e: usize) -> usize {
        let r = &self.rotation[v];
        r[(self.position(v, e) + r.len() - 1) % r.len()]
    }

    pub fn black_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].color == Color::Black).collect()
    }

    pub fn white_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].color == Color::White).collect()
    }

    fn head(&self, dart: usize) -> usize {
        let e = &self.edges[dart / 2];
        if dart % 2 == 0 {
            e.white
        } else {
            e.black
        }
    }

    fn next_dart(&self, dart: usize) -> usize {
        let v = self.head(dart);
        let e = self.prev_ccw(v, dart / 2);
        if self.nodes[v].color == Color::White {
            2 * e + 1
        } else {
            2 * e
        }
    }

    fn dart_winding(&self, dart: usize) -> [i64; 2] {
        let w = self.edges[dart / 2].winding;
        if dart % 2 == 0 {
            w
        } else {
            [-w[0], -w[1]]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub edge: usize,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallCycle {
    pub node: usize,
    pub start: usize,
    pub arrows: Vec<usize>,
}

/// The dual quiver with its relations. Arrow `a` is dual to edge `a`.
#[derive(Clone, Debug)]
pub struct Quiver {
    pub model: DimerModel,
    pub num_vertices: usize,
    pub arrows: Vec<Arrow>,
    /// Path around the white node of each arrow, clockwise, from its target
    /// back to its source.
    pub p_plus: Vec<Vec<usize>>,
    /// Path around the black node, counterclockwise, same endpoints.
    pub p_minus: Vec<Vec<usize>>,
    /// `vec(p_plus) - vec(p_minus)` in `Z^A`.
    pub rel: Vec<Vec<i64>>,
    pub plus_mask: Vec<u64>,
    pub minus_mask: Vec<u64>,
    pub v0: usize,
    /// One cycle around every node.
    pub small_cycles: Vec<SmallCycle>,
    /// A small cycle based at each vertex.
    pub omega: Vec<Vec<usize>>,
    /// Darts bounding each face, in walk order.
    pub face_darts: Vec<Vec<usize>>,
}

impl Quiver {
    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn all_arrows_mask(&self) -> u64 {
        mask_of(0..self.arrows.len())
    }

    pub fn all_vertices_mask(&self) -> u64 {
        mask_of(0..self.num_vertices)
    }

    /// Nodes on the boundary of a face.
    pub fn face_nodes(&self, f: usize) -> BTreeSet<usize> {
        self.face_darts[f].iter().map(|&d| self.model.head(d)).collect()
    }

    /// Edges on the boundary of a face.
    pub fn face_edges(&self, f: usize) -> BTreeSet<usize> {
        self.face_darts[f].iter().map(|&d| d / 2).collect()
    }

    /// Exponent vector of a path.
    pub fn exponent(&self, path: &[usize]) -> Vec<i64> {
        let mut v = vec![0; self.arrows.len()];
        for &a in path {
            v[a] += 1;
        }
        v
    }

    /// Whether `path` is a path from `from` to `to` (the empty path is the
    /// trivial path at `from`).
    pub fn is_path(&self, path: &[usize], from: usize, to: usize) -> bool {
        let mut cur = from;
        for &a in path {
            if self.arrows[a].source != cur {
                return false;
            }
            cur = self.arrows[a].target;
        }
        cur == to
    }

    /// Incidence rows of the coboundary map: entry `+1` at arrows into `v`,
    /// `-1` at arrows out of `v`.
    pub fn incidence(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.arrows.len()]; self.num_vertices];
        for (a, arr) in self.arrows.iter().enumerate() {
            m[arr.target][a] += 1;
            m[arr.source][a] -= 1;
        }
        m
    }
}

pub fn mask_of(items: impl IntoIterator<Item = usize>) -> u64 {
    items.into_iter().fold(0u64, |m, i| m | (1u64 << i))
}

pub fn mask_items(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Checks every dimer-model invariant and builds the dual quiver.
pub fn validate_and_build(model: &DimerModel) -> Result<Quiver> {
    let ne = model.edges.len();
    if ne == 0 {
        return Err(Error::NotTorusCellular("no edges".into()));
    }
    if ne > MAX_EDGES {
        return Err(Error::TooLarge(format!("{ne} edges, at most {MAX_EDGES} supported")));
    }
    for e in &model.edges {
        if model.nodes[e.black].color != Color::Black || model.nodes[e.white].color != Color::White {
            return Err(Error::NotBipartite(e.id.clone()));
        }
    }
    for v in 0..model.nodes.len() {
        let incident: BTreeSet<usize> = model.incident(v).into_iter().collect();
        let listed: BTreeSet<usize> = model.rotation[v].iter().copied().collect();
        if incident != listed || listed.len() != model.rotation[v].len() {
            return Err(Error::InvalidRotation {
                node: model.nodes[v].id.clone(),
                reason: "rotation must list each incident edge exactly once".into(),
            });
        }
    }
    for (v, n) in model.nodes.iter().enumerate() {
        if model.rotation[v].len() == 1 {
            return Err(Error::UnivalentNode(n.id.clone()));
        }
    }
    check_connected(model)?;

    // faces, starting with the source face of arrow 0
    let mut face_of = vec![usize::MAX; 2 * ne];
    let mut face_darts: Vec<Vec<usize>> = Vec::new();
    let order = std::iter::once(1).chain(std::iter::once(0)).chain(2..2 * ne);
    for start in order {
        if face_of[start] != usize::MAX {
            continue;
        }
        let f = face_darts.len();
        let mut walk = Vec::new();
        let mut d = start;
        loop {
            face_of[d] = f;
            walk.push(d);
            d = model.next_dart(d);
            if d == start {
                break;
            }
        }
        face_darts.push(walk);
    }
    let nf = face_darts.len();
    let euler = nf as i64 - ne as i64 + model.nodes.len() as i64;
    if euler != 0 {
        return Err(Error::NotTorusCellular(format!("Euler characteristic {euler}")));
    }
    for (f, walk) in face_darts.iter().enumerate() {
        let w = walk.iter().fold([0, 0], |acc, &d| {
            let x = model.dart_winding(d);
            [acc[0] + x[0], acc[1] + x[1]]
        });
        if w != [0, 0] {
            return Err(Error::NotTorusCellular(format!("face {f} winds by {w:?}")));
        }
    }
    check_homology_onto(model)?;

    let v0 = model.v0.unwrap_or(0);
    if v0 >= nf {
        return Err(Error::Parse(format!("v0 = {v0} but there are {nf} faces")));
    }

    let arrows: Vec<Arrow> = (0..ne)
        .map(|e| Arrow {
            edge: e,
            source: face_of[2 * e + 1],
            target: face_of[2 * e],
        })
        .collect();
    let mut p_plus = Vec::with_capacity(ne);
    let mut p_minus = Vec::with_capacity(ne);
    for (e, edge) in model.edges.iter().enumerate() {
        let mut plus = Vec::new();
        let mut cur = model.prev_ccw(edge.white, e);
        while cur != e {
            plus.push(cur);
            cur = model.prev_ccw(edge.white, cur);
        }
        let mut minus = Vec::new();
        let mut cur = model.next_ccw(edge.black, e);
        while cur != e {
            minus.push(cur);
            cur = model.next_ccw(edge.black, cur);
        }
        p_plus.push(plus);
        p_minus.push(minus);
    }
    let mut quiver = Quiver {
        model: model.clone(),
        num_vertices: nf,
        arrows,
        rel: Vec::new(),
        plus_mask: p_plus.iter().map(|p| mask_of(p.iter().copied())).collect(),
        minus_mask: p_minus.iter().map(|p| mask_of(p.iter().copied())).collect(),
        p_plus,
        p_minus,
        v0,
        small_cycles: Vec::new(),
        omega: Vec::new(),
        face_darts,
    };
    quiver.rel = (0..ne)
        .map(|a| {
            let plus = quiver.exponent(&quiver.p_plus[a]);
            let minus = quiver.exponent(&quiver.p_minus[a]);
            plus.iter().zip(&minus).map(|(x, y)| x - y).collect()
        })
        .collect();
    for (a, arr) in quiver.arrows.iter().enumerate() {
        debug_assert!(quiver.is_path(&quiver.p_plus[a], arr.target, arr.source));
        debug_assert!(quiver.is_path(&quiver.p_minus[a], arr.target, arr.source));
    }
    quiver.small_cycles = (0..model.nodes.len())
        .map(|v| {
            let first = model.rotation[v][0];
            let rest = if model.nodes[v].color == Color::White {
                &quiver.p_plus[first]
            } else {
                &quiver.p_minus[first]
            };
            let mut arrows = vec![first];
            arrows.extend(rest);
            SmallCycle {
                node: v,
                start: quiver.arrows[first].source,
                arrows,
            }
        })
        .collect();
    quiver.omega = (0..nf)
        .map(|v| {
            let a = (0..ne)
                .find(|&a| quiver.arrows[a].source == v)
                .expect("every face has an outgoing arrow");
            let mut c = vec![a];
            c.extend(&quiver.p_plus[a]);
            c
        })
        .collect();
    Ok(quiver)
}

fn check_connected(model: &DimerModel) -> Result<()> {
    let n = model.nodes.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &e in &model.rotation[v] {
            let edge = &model.edges[e];
            let u = if edge.black == v { edge.white } else { edge.black };
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

/// The winding vectors of graph cycles must generate `Z^2`; otherwise the
/// windings describe a cover of the torus rather than the torus itself.
fn check_homology_onto(model: &DimerModel) -> Result<()> {
    let n = model.nodes.len();
    let mut pos: Vec<Option<[i64; 2]>> = vec![None; n];
    pos[0] = Some([0, 0]);
    let mut tree = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &e in &model.rotation[v] {
            let edge = &model.edges[e];
            let p = pos[v].unwrap();
            let (u, q) = if edge.black == v {
                (edge.white, [p[0] + edge.winding[0], p[1] + edge.winding[1]])
            } else {
                (edge.black, [p[0] - edge.winding[0], p[1] - edge.winding[1]])
            };
            if pos[u].is_none() {
                pos[u] = Some(q);
                tree.insert(e);
                queue.push_back(u);
            }
        }
    }
    let mut cols = Vec::new();
    for (e, edge) in model.edges.iter().enumerate() {
        if tree.contains(&e) {
            continue;
        }
        let b = pos[edge.black].unwrap();
        let w = pos[edge.white].unwrap();
        cols.push(vec![
            (b[0] + edge.winding[0] - w[0]).into(),
            (b[1] + edge.winding[1] - w[1]).into(),
        ]);
    }
    if cols.is_empty() {
        return Err(Error::NotTorusCellular("the graph has no cycles".into()));
    }
    let m = IntMatrix::from_columns(2, &cols);
    let d = smith_normal_form(&m).invariant_factors();
    if d.len() == 2 && d.iter().all(|x| x.is_one()) {
        Ok(())
    } else {
        Err(Error::NotTorusCellular(format!(
            "cycle windings generate a subgroup with invariant factors {:?}",
            d.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectMatching {
    pub edges: Vec<usize>,
    #[serde(skip)]
    pub mask: u64,
    /// Homology class relative to the reference matching.
    pub class: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingSet {
    /// Sorted by edge list; the first one is the reference.
    pub matchings: Vec<PerfectMatching>,
    pub non_degenerate: bool,
    /// Edges contained in no matching.
    pub unmatched_edges: Vec<usize>,
}

impl MatchingSet {
    pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
        self.matchings.iter().position(|m| m.mask == mask)
    }
}

/// All perfect matchings by exact-cover backtracking over black nodes.
pub fn perfect_matchings(model: &DimerModel) -> Result<MatchingSet> {
    let blacks = model.black_nodes();
    let whites = model.white_nodes();
    let mut found: Vec<Vec<usize>> = Vec::new();
    if blacks.len() == whites.len() {
        let mut used = vec![false; model.nodes.len()];
        let mut chosen = Vec::new();
        extend_matching(model, &blacks, 0, &mut used, &mut chosen, &mut found);
    }
    if found.is_empty() {
        return Err(Error::NoPerfectMatching);
    }
    for m in &mut found {
        m.sort();
    }
    found.sort();
    let reference = found[0].clone();
    let matchings: Vec<PerfectMatching> = found
        .into_iter()
        .map(|edges| PerfectMatching {
            mask: mask_of(edges.iter().copied()),
            class: matching_class(model, &edges, &reference),
            edges,
        })
        .collect();
    let covered = matchings.iter().fold(0u64, |m, d| m | d.mask);
    let unmatched_edges: Vec<usize> = (0..model.edges.len()).filter(|e| covered >> e & 1 == 0).collect();
    Ok(MatchingSet {
        non_degenerate: unmatched_edges.is_empty(),
        matchings,
        unmatched_edges,
    })
}

fn extend_matching(
    model: &DimerModel,
    blacks: &[usize],
    i: usize,
    used: &mut [bool],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == blacks.len() {
        out.push(chosen.clone());
        return;
    }
    for &e in &model.rotation[blacks[i]] {
        let w = model.edges[e].white;
        if used[w] {
            continue;
        }
        used[w] = true;
        chosen.push(e);
        extend_matching(model, blacks, i + 1, used, chosen, out);
        chosen.pop();
        used[w] = false;
    }
}

/// `h(D) = sum of windings over D - sum over D_ref`, edges oriented black to
/// white.
pub fn matching_class(model: &DimerModel, d: &[usize], d_ref: &[usize]) -> [i64; 2] {
    let sum = |s: &[usize]| {
        s.iter().fold([0i64, 0], |acc, &e| {
            let w = model.edges[e].winding;
            [acc[0] + w[0], acc[1] + w[1]]
        })
    };
    let (a, b) = (sum(d), sum(d_ref));
    [a[0] - b[0], a[1] - b[1]]
}

/// Matching classes with multiplicities and their convex hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolygon {
    pub multiplicities: BTreeMap<Point, usize>,
    pub polygon: ConvexPolygon,
}

impl LatticePolygon {
    pub fn normalized_area(&self) -> i64 {
        self.polygon.normalized_area()
    }
}

pub fn characteristic_polygon(matchings: &MatchingSet) -> Result<LatticePolygon> {
    let mut multiplicities = BTreeMap::new();
    for m in &matchings.matchings {
        *multiplicities.entry(m.class).or_insert(0) += 1;
    }
    let points: Vec<Point> = multiplicities.keys().copied().collect();
    let polygon = ConvexPolygon::new(&points)?;
    Ok(LatticePolygon {
        multiplicities,
        polygon,
    })
}
