//! Crossing walls: predicted moduli on the far side of a wall, checked
//! against recomputation, and the graph of all chambers.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use dimerwall_exact::{enumerate_regular_unimodular_triangulations, BigInt, Point, Triangulation};
use serde::Serialize;

use crate::chambers::{chamber_of, lift, small, walls, Chamber, WallDescriptor, WallKind};
use crate::error::{Error, Result};
use crate::moduli::{line_bundle, FanModel};
use crate::tiling::Tiling;

/// A fan's triangulation with tautological classes in canonical form, keyed
/// by ray lattice points so that different fans can be compared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTable {
    pub rays: Vec<Point>,
    pub triangles: Vec<[Point; 3]>,
    /// Canonical class of `L_v` for every vertex, in ray order.
    pub classes: Vec<Vec<i64>>,
}

impl ClassTable {
    fn new(fan: &FanModel, triangulation: &Triangulation, classes: &[Vec<i64>]) -> ClassTable {
        ClassTable {
            rays: fan.rays.iter().map(|r| r.point).collect(),
            triangles: triangulation.triangles.clone(),
            classes: classes.iter().map(|c| fan.canonical_class(c)).collect(),
        }
    }

    pub fn of_chamber(ch: &Chamber) -> ClassTable {
        ClassTable::new(&ch.fan, &ch.fan.triangulation, &ch.classes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingRecord {
    /// Interior parameter of the source chamber.
    pub source: Vec<i64>,
    pub wall: WallDescriptor,
    pub theta_prime: Vec<i64>,
    pub predicted: ClassTable,
    pub recomputed: Option<ClassTable>,
    pub agreement: Option<bool>,
    /// `deg L_v|_ℓ` on the contracted curve, for types I and III.
    pub degrees: Option<Vec<i64>>,
}

fn flip(fan: &FanModel, curve: usize) -> Triangulation {
    let c = &fan.curves[curve];
    let [r0, r1] = c.rays;
    let [o0, o1] = [c.opposite[0], c.opposite[1]];
    let mut tris: Vec<[usize; 3]> = fan
        .cones
        .iter()
        .copied()
        .filter(|t| !(t.contains(&r0) && t.contains(&r1)))
        .collect();
    tris.push([o0, o1, r0]);
    tris.push([o0, o1, r1]);
    Triangulation::new(
        fan.triangulation.polygon.clone(),
        tris.into_iter().map(|t| t.map(|i| fan.rays[i].point)),
    )
}

/// Predicts the moduli space across `wall` from the update rule of its type.
pub fn cross_wall(t: &Tiling, ch: &Chamber, wall: &WallDescriptor) -> Result<CrossingRecord> {
    let ty = wall
        .wall_type
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("wall has not been classified".into()))?;
    let fan = &ch.fan;
    let v0 = t.quiver.v0;
    let v0_in_r1 = wall.v0_side_is_r1(v0);
    let fiber_degrees = |curve: usize| -> Result<Vec<i64>> {
        ch.classes.iter().map(|l| fan.degree(l, curve)).collect()
    };
    let (triangulation, classes, degrees) = match ty.kind {
        WallKind::I => {
            let l = ty.fiber.expect("type I has a fiber");
            let deg = fiber_degrees(l)?;
            let allowed = if v0_in_r1 { [0, -1] } else { [0, 1] };
            if let Some(d) = deg.iter().find(|d| !allowed.contains(d)) {
                return Err(Error::DegreeViolation(format!(
                    "degree {d} on the flopped curve, allowed {allowed:?}"
                )));
            }
            (flip(fan, l), ch.classes.clone(), Some(deg))
        }
        WallKind::III => {
            let k = ty.contracted_divisor.expect("type III has a divisor");
            let l = ty.fiber.expect("type III has a fiber");
            let deg = fiber_degrees(l)?;
            let (target, sign) = if v0_in_r1 { (-1, -1) } else { (1, 1) };
            let classes = ch
                .classes
                .iter()
                .zip(&deg)
                .map(|(c, &d)| {
                    let mut c = c.clone();
                    if d == target {
                        c[k] += sign;
                    }
                    c
                })
                .collect();
            (fan.triangulation.clone(), classes, Some(deg))
        }
        WallKind::Zero => {
            let z = wall.z_class(fan.rays.len());
            let r2 = &wall.r2;
            let shifted: Vec<Vec<i64>> = ch
                .classes
                .iter()
                .enumerate()
                .map(|(w, c)| {
                    let s = r2.contains(&w) as i64;
                    c.iter().zip(&z).map(|(x, y)| x - s * y).collect()
                })
                .collect();
            let base = shifted[v0].clone();
            let classes = shifted
                .iter()
                .map(|c| c.iter().zip(&base).map(|(x, y)| x - y).collect())
                .collect();
            (fan.triangulation.clone(), classes, None)
        }
    };
    Ok(CrossingRecord {
        source: ch.interior.clone(),
        wall: wall.clone(),
        theta_prime: wall.theta_prime.clone(),
        predicted: ClassTable::new(fan, &triangulation, &classes),
        recomputed: None,
        agreement: None,
        degrees,
    })
}

/// Recomputes the far side from scratch and records whether the prediction
/// matches it exactly. Returns the far chamber.
pub fn verify_crossing_chamber(t: &Tiling, rec: &mut CrossingRecord) -> Result<Chamber> {
    let far = chamber_of(t, &rec.theta_prime)?;
    let table = ClassTable::of_chamber(&far);
    rec.agreement = Some(table == rec.predicted);
    rec.recomputed = Some(table);
    Ok(far)
}

pub fn verify_crossing(t: &Tiling, rec: &mut CrossingRecord) -> Result<bool> {
    verify_crossing_chamber(t, rec)?;
    Ok(rec.agreement == Some(true))
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphNode {
    pub theta: Vec<i64>,
    pub halfspaces: Vec<Vec<i64>>,
    pub table: ClassTable,
    /// `L_C` applied to the generators of the closed chamber.
    pub nef_image: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    /// `None` when the far chamber was not admitted because of the budget.
    pub to: Option<usize>,
    pub record: CrossingRecord,
    /// Crossing back from the far chamber predicts this chamber exactly.
    pub involution: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberGraph {
    pub model: String,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub budget_exceeded: bool,
    #[serde(skip)]
    pub chambers: Vec<Chamber>,
}

impl ChamberGraph {
    /// Number of walls, each counted once from either side.
    pub fn wall_count(&self) -> usize {
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|e| e.to.map(|b| (e.from.min(b), e.from.max(b))))
            .collect();
        pairs.sort();
        pairs.dedup();
        pairs.len()
    }

    pub fn all_agree(&self) -> bool {
        self.edges.iter().all(|e| e.record.agreement == Some(true))
    }

    pub fn all_involutive(&self) -> bool {
        self.edges.iter().all(|e| e.involution)
    }

    pub fn wall_labels(&self) -> Vec<String> {
        self.edges
            .iter()
            .map(|e| e.record.wall.wall_type.as_ref().map_or("?".into(), |w| w.label()))
            .collect()
    }

    pub fn kinds(&self) -> Vec<WallKind> {
        self.edges
            .iter()
            .filter_map(|e| e.record.wall.wall_type.as_ref().map(|w| w.kind))
            .collect()
    }
}

fn nef_image(ch: &Chamber) -> Result<Vec<Vec<i64>>> {
    ch.cone
        .generators
        .iter()
        .map(|g| {
            let eta = lift(&small(g)?);
            Ok(ch.fan.canonical_class(&line_bundle(&ch.classes, &eta)))
        })
        .collect()
}

fn node(ch: &Chamber) -> Result<GraphNode> {
    Ok(GraphNode {
        theta: ch.interior.clone(),
        halfspaces: ch.cone.halfspaces.iter().map(|h| small(h)).collect::<Result<_>>()?,
        table: ClassTable::of_chamber(ch),
        nef_image: nef_image(ch)?,
    })
}

/// Breadth-first closure of the chamber graph from the chamber of `seed`.
pub fn explore(t: &Tiling, seed: &[i64], max_chambers: usize) -> Result<ChamberGraph> {
    if max_chambers == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let start = chamber_of(t, seed)?;
    let mut index: BTreeMap<Vec<Vec<BigInt>>, usize> = BTreeMap::new();
    index.insert(start.key(), 0);
    let mut graph = ChamberGraph {
        model: t.name().to_string(),
        nodes: vec![node(&start)?],
        edges: Vec::new(),
        budget_exceeded: false,
        chambers: vec![start],
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let ch = graph.chambers[i].clone();
        for wall in walls(t, &ch)? {
            let mut rec = cross_wall(t, &ch, &wall)?;
            let far = verify_crossing_chamber(t, &mut rec)?;
            let key = far.key();
            let to = match index.get(&key) {
                Some(&j) => Some(j),
                None if graph.chambers.len() < max_chambers => {
                    let j = graph.chambers.len();
                    index.insert(key, j);
                    graph.nodes.push(node(&far)?);
                    graph.chambers.push(far);
                    queue.push_back(j);
                    Some(j)
                }
                None => {
                    graph.budget_exceeded = true;
                    None
                }
            };
            graph.edges.push(GraphEdge {
                from: i,
                to,
                record: rec,
                involution: false,
            });
        }
    }
    for e in 0..graph.edges.len() {
        let edge = &graph.edges[e];
        let Some(b) = edge.to else { continue };
        let a = edge.from;
        let back_normal: Vec<i64> = edge.record.wall.normal.iter().map(|x| -x).collect();
        let ok = graph.edges.iter().any(|r| {
            r.from == b
                && r.to == Some(a)
                && r.record.wall.normal == back_normal
                && r.record.predicted == graph.nodes[a].table
        }) && edge.record.predicted == graph.nodes[b].table;
        graph.edges[e].involution = ok;
    }
    Ok(graph)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReachabilityReport {
    /// All regular unimodular triangulations of the polygon.
    pub triangulations: Vec<Vec<[Point; 3]>>,
    /// For each chamber, its index into `triangulations`.
    pub chamber_triangulation: Vec<Option<usize>>,
    pub realized: Vec<usize>,
    pub missing: Vec<usize>,
    /// Whether every chamber's triangulation occurs in the enumeration.
    pub consistent: bool,
    pub complete: bool,
    pub nef_images: Vec<Vec<Vec<i64>>>,
}

impl ReachabilityReport {
    pub fn summary(&self) -> String {
        format!("triangulations realized: {}/{}", self.realized.len(), self.triangulations.len())
    }
}

pub fn reachability_report(t: &Tiling, graph: &ChamberGraph) -> ReachabilityReport {
    let all = enumerate_regular_unimodular_triangulations(&t.polygon.polygon);
    let triangulations: Vec<Vec<[Point; 3]>> = all.iter().map(|x| x.triangles.clone()).collect();
    let chamber_triangulation: Vec<Option<usize>> = graph
        .nodes
        .iter()
        .map(|n| triangulations.iter().position(|x| *x == n.table.triangles))
        .collect();
    let realized: Vec<usize> = (0..triangulations.len())
        .filter(|i| chamber_triangulation.contains(&Some(*i)))
        .collect();
    let missing = (0..triangulations.len()).filter(|i| !realized.contains(i)).collect();
    ReachabilityReport {
        consistent: chamber_triangulation.iter().all(Option::is_some),
        complete: !graph.budget_exceeded,
        triangulations,
        chamber_triangulation,
        realized,
        missing,
        nef_images: graph.nodes.iter().map(|n| n.nef_image.clone()).collect(),
    }
}

/// The chamber graph in DOT, nodes labelled by triangulation index.
pub fn to_dot(graph: &ChamberGraph, report: &ReachabilityReport) -> String {
    let mut s = String::from("graph chambers {\n");
    for (i, t) in report.chamber_triangulation.iter().enumerate() {
        let label = t.map_or("T?".to_string(), |x| format!("T{x}"));
        let _ = writeln!(s, "  c{i} [label=\"{label}\"];");
    }
    for e in &graph.edges {
        if let Some(b) = e.to {
            if e.from < b {
                let label = e.record.wall.wall_type.as_ref().map_or("?".into(), |w| w.label());
                let _ = writeln!(s, "  c{} -- c{b} [label=\"{label}\"];", e.from);
            }
        }
    }
    s.push_str("}\n");
    s
}
