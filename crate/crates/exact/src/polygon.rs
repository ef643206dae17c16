//! Convex lattice polygons and their regular unimodular triangulations.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::cone::interior_point;
use crate::ExactError;

/// A point of `Z^2`.
pub type Point = [i64; 2];

/// Twice the signed area of the triangle `o, a, b`.
pub fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Strict convex hull, counterclockwise, starting at the lexicographically
/// smallest point. Collinear boundary points are dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A two-dimensional convex lattice polygon.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvexPolygon {
    /// Strict hull vertices, counterclockwise.
    pub vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Hull of `points`; fails when they are collinear.
    pub fn new(points: &[Point]) -> Result<Self, ExactError> {
        let vertices = convex_hull(points);
        if vertices.len() < 3 {
            return Err(ExactError::DegeneratePolygon);
        }
        Ok(ConvexPolygon { vertices })
    }

    /// Twice the Euclidean area; the number of unimodular triangles in any
    /// unimodular triangulation.
    pub fn normalized_area(&self) -> i64 {
        let o = self.vertices[0];
        self.vertices
            .windows(2)
            .map(|w| cross(o, w[0], w[1]))
            .sum()
    }

    pub fn contains(&self, p: Point) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0)
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        let n = self.vertices.len();
        self.contains(p)
            && (0..n).any(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], p) == 0)
    }

    /// All lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> Vec<Point> {
        let (xmin, xmax) = minmax(self.vertices.iter().map(|p| p[0]));
        let (ymin, ymax) = minmax(self.vertices.iter().map(|p| p[1]));
        let mut out = Vec::new();
        for x in xmin..=xmax {
            for y in ymin..=ymax {
                if self.contains([x, y]) {
                    out.push([x, y]);
                }
            }
        }
        out
    }

    pub fn interior_points(&self) -> Vec<Point> {
        self.lattice_points()
            .into_iter()
            .filter(|&p| !self.on_boundary(p))
            .collect()
    }

    /// Primitive boundary segments, directed counterclockwise.
    pub fn boundary_segments(&self) -> Vec<(Point, Point)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let g = (b[0] - a[0]).gcd(&(b[1] - a[1]));
            let step = [(b[0] - a[0]) / g, (b[1] - a[1]) / g];
            for k in 0..g {
                out.push((
                    [a[0] + k * step[0], a[1] + k * step[1]],
                    [a[0] + (k + 1) * step[0], a[1] + (k + 1) * step[1]],
                ));
            }
        }
        out
    }
}

fn minmax(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// A triangulation of a lattice polygon. Triangles are stored with sorted
/// vertices and the list itself is sorted, so equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    pub polygon: ConvexPolygon,
    pub triangles: Vec<[Point; 3]>,
}

impl Triangulation {
    pub fn new(polygon: ConvexPolygon, triangles: impl IntoIterator<Item = [Point; 3]>) -> Self {
        let mut triangles: Vec<[Point; 3]> = triangles
            .into_iter()
            .map(|mut t| {
                t.sort();
                t
            })
            .collect();
        triangles.sort();
        triangles.dedup();
        Triangulation { polygon, triangles }
    }

    /// Undirected edges with sorted endpoints, each with the number of
    /// triangles containing it.
    pub fn edges(&self) -> BTreeMap<(Point, Point), usize> {
        let mut m = BTreeMap::new();
        for t in &self.triangles {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                *m.entry((t[i], t[j])).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn interior_edges(&self) -> Vec<(Point, Point)> {
        self.edges()
            .into_iter()
            .filter(|&(_, c)| c == 2)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn vertices(&self) -> BTreeSet<Point> {
        self.triangles.iter().flatten().copied().collect()
    }

    /// Checks unimodularity, disjoint interiors, containment in the polygon
    /// and that the areas add up.
    pub fn is_valid_unimodular(&self) -> bool {
        let area: i64 = self
            .triangles
            .iter()
            .map(|t| cross(t[0], t[1], t[2]).abs())
            .sum();
        self.triangles.iter().all(|t| cross(t[0], t[1], t[2]).abs() == 1)
            && self.triangles.iter().flatten().all(|&p| self.polygon.contains(p))
            && area == self.polygon.normalized_area()
            && self.triangles.iter().enumerate().all(|(i, a)| {
                self.triangles[i + 1..]
                    .iter()
                    .all(|b| !interiors_overlap(a, b))
            })
    }

    /// Whether `other` is obtained from `self` by flipping the diagonal of one
    /// convex quadrilateral.
    pub fn differs_by_flip(&self, other: &Triangulation) -> bool {
        let a: BTreeSet<_> = self.triangles.iter().collect();
        let b: BTreeSet<_> = other.triangles.iter().collect();
        let only_a: Vec<_> = a.difference(&b).collect();
        let only_b: Vec<_> = b.difference(&a).collect();
        if only_a.len() != 2 || only_b.len() != 2 {
            return false;
        }
        let pa: BTreeSet<Point> = only_a.iter().flat_map(|t| t.iter().copied()).collect();
        let pb: BTreeSet<Point> = only_b.iter().flat_map(|t| t.iter().copied()).collect();
        pa.len() == 4 && pa == pb
    }
}

fn orient(t: &[Point; 3]) -> [Point; 3] {
    if cross(t[0], t[1], t[2]) < 0 {
        [t[0], t[2], t[1]]
    } else {
        *t
    }
}

/// Separating-axis test for two nondegenerate triangles: true iff their
/// interiors intersect.
fn interiors_overlap(a: &[Point; 3], b: &[Point; 3]) -> bool {
    let (a, b) = (orient(a), orient(b));
    for (p, q) in [(a, b), (b, a)] {
        for i in 0..3 {
            let (u, v) = (p[i], p[(i + 1) % 3]);
            // the outer side of edge u->v is cross < 0
            if q.iter().all(|&w| cross(u, v, w) <= 0) {
                return false;
            }
        }
    }
    true
}

/// All regular unimodular triangulations of `polygon`, sorted.
///
/// Every unimodular triangulation uses every lattice point as a vertex. The
/// search keeps a frontier of directed edges that still need a triangle on
/// their left and always extends the smallest one, so each triangulation is
/// produced exactly once.
pub fn enumerate_regular_unimodular_triangulations(polygon: &ConvexPolygon) -> Vec<Triangulation> {
    let points = polygon.lattice_points();
    let mut frontier: BTreeSet<(Point, Point)> = polygon.boundary_segments().into_iter().collect();
    let mut placed: Vec<[Point; 3]> = Vec::new();
    let mut out = Vec::new();
    search(polygon, &points, &mut frontier, &mut placed, &mut out);
    let mut out: Vec<Triangulation> = out
        .into_iter()
        .filter(|t| regularity_certificate(t).is_some())
        .collect();
    out.sort();
    out
}

fn search(
    polygon: &ConvexPolygon,
    points: &[Point],
    frontier: &mut BTreeSet<(Point, Point)>,
    placed: &mut Vec<[Point; 3]>,
    out: &mut Vec<Triangulation>,
) {
    let Some(&(u, v)) = frontier.iter().next() else {
        let t = Triangulation::new(polygon.clone(), placed.iter().copied());
        debug_assert!(t.is_valid_unimodular());
        out.push(t);
        return;
    };
    for &w in points {
        if cross(u, v, w) != 1 {
            continue;
        }
        let tri = [u, v, w];
        if placed.iter().any(|t| interiors_overlap(t, &tri)) {
            continue;
        }
        frontier.remove(&(u, v));
        let mut added = Vec::new();
        let mut removed = Vec::new();
        for (x, y) in [(v, w), (w, u)] {
            if frontier.remove(&(x, y)) {
                removed.push((x, y));
            } else {
                frontier.insert((y, x));
                added.push((y, x));
            }
        }
        placed.push(tri);
        search(polygon, points, frontier, placed, out);
        placed.pop();
        for e in added {
            frontier.remove(&e);
        }
        for e in removed {
            frontier.insert(e);
        }
        frontier.insert((u, v));
    }
}

/// Heights on the lattice points (in sorted order) whose lower convex hull
/// induces `t`, if any exist.
///
/// For every interior edge `ab` with opposite vertices `c` and `d`, the
/// lifted `d` must lie strictly above the plane through the lifted `a, b, c`.
/// Writing `d` in barycentric coordinates of `abc` scaled by the triangle's
/// area `D` gives `D h(d) - α h(a) - β h(b) - γ h(c) > 0`.
pub fn regularity_certificate(t: &Triangulation) -> Option<Vec<BigInt>> {
    let points: Vec<Point> = t.polygon.lattice_points();
    let index: BTreeMap<Point, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n = points.len();
    let mut opposite: BTreeMap<(Point, Point), Vec<Point>> = BTreeMap::new();
    for tri in &t.triangles {
        for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            opposite.entry((tri[i], tri[j])).or_default().push(tri[k]);
        }
    }
    let mut strict = Vec::new();
    for ((a, b), opp) in &opposite {
        if opp.len() != 2 {
            continue;
        }
        let (c, d) = (opp[0], opp[1]);
        let det = cross(a.to_owned(), *b, c);
        // d = (α a + β b + γ c) / det
        let alpha = cross(d, *b, c);
        let beta = cross(*a, d, c);
        let gamma = cross(*a, *b, d);
        let mut row = vec![BigInt::from(0); n];
        let sign = det.signum();
        row[index[&d]] += BigInt::from(det * sign);
        row[index[a]] -= BigInt::from(alpha * sign);
        row[index[b]] -= BigInt::from(beta * sign);
        row[index[&c]] -= BigInt::from(gamma * sign);
        strict.push(row);
    }
    // points not used as vertices must also lie strictly above
    for &p in &points {
        if t.vertices().contains(&p) {
            continue;
        }
        let tri = t.triangles.iter().find(|tri| {
            let o = orient(tri);
            (0..3).all(|i| cross(o[i], o[(i + 1) % 3], p) >= 0)
        })?;
        let det = cross(tri[0], tri[1], tri[2]);
        let sign = det.signum();
        let mut row = vec![BigInt::from(0); n];
        row[index[&p]] += BigInt::from(det * sign);
        row[index[&tri[0]]] -= BigInt::from(cross(p, tri[1], tri[2]) * sign);
        row[index[&tri[1]]] -= BigInt::from(cross(tri[0], p, tri[2]) * sign);
        row[index[&tri[2]]] -= BigInt::from(cross(tri[0], tri[1], p) * sign);
        strict.push(row);
    }
    interior_point(&strict, &[], n).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: &[Point]) -> ConvexPolygon {
        ConvexPolygon::new(p).unwrap()
    }

    /// Every set of unimodular triangles with disjoint interiors whose areas
    /// fill the polygon.
    fn brute_force(polygon: &ConvexPolygon) -> BTreeSet<Triangulation> {
        let pts = polygon.lattice_points();
        let mut tris = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    if cross(pts[i], pts[j], pts[k]).abs() == 1 {
                        tris.push([pts[i], pts[j], pts[k]]);
                    }
                }
            }
        }
        let area = polygon.normalized_area() as usize;
        let mut out = BTreeSet::new();
        for mask in 0u64..(1u64 << tris.len()) {
            if mask.count_ones() as usize != area {
                continue;
            }
            let chosen: Vec<_> = (0..tris.len()).filter(|i| mask >> i & 1 == 1).map(|i| tris[i]).collect();
            let t = Triangulation::new(polygon.clone(), chosen);
            if t.is_valid_unimodular() {
                out.insert(t);
            }
        }
        out
    }

    /// Lower-hull check of a height certificate: every lattice point lies
    /// strictly above the plane of every triangle not containing it.
    fn certifies(t: &Triangulation, h: &[BigInt]) -> bool {
        let pts = t.polygon.lattice_points();
        let height = |p: Point| h[pts.iter().position(|&q| q == p).unwrap()].clone();
        t.triangles.iter().all(|tri| {
            pts.iter().filter(|p| !tri.contains(p)).all(|&p| {
                let det = cross(tri[0], tri[1], tri[2]);
                let val = BigInt::from(det) * height(p)
                    - BigInt::from(cross(p, tri[1], tri[2])) * height(tri[0])
                    - BigInt::from(cross(tri[0], p, tri[2])) * height(tri[1])
                    - BigInt::from(cross(tri[0], tri[1], p)) * height(tri[2]);
                val * BigInt::from(det.signum()) > BigInt::from(0)
            })
        })
    }

    fn check(polygon: ConvexPolygon, expected: usize) -> Vec<Triangulation> {
        let ts = enumerate_regular_unimodular_triangulations(&polygon);
        assert_eq!(ts.len(), expected);
        let oracle = brute_force(&polygon);
        assert_eq!(ts.iter().cloned().collect::<BTreeSet<_>>(), oracle);
        for t in &ts {
            assert!(t.is_valid_unimodular());
            let h = regularity_certificate(t).unwrap();
            assert!(certifies(t, &h));
        }
        ts
    }

    #[test]
    fn hull_and_area() {
        let p = poly(&[[0, 0], [2, 0], [1, 0], [0, 1], [1, 1]]);
        assert_eq!(p.vertices, vec![[0, 0], [2, 0], [1, 1], [0, 1]]);
        assert_eq!(p.normalized_area(), 3);
        assert_eq!(p.lattice_points().len(), 5);
        assert_eq!(p.boundary_segments().len(), 5);
        assert!(p.interior_points().is_empty());
        assert_eq!(
            ConvexPolygon::new(&[[0, 0], [1, 1], [2, 2]]),
            Err(ExactError::DegeneratePolygon)
        );
    }

    #[test]
    fn unit_triangle() {
        check(poly(&[[0, 0], [1, 0], [0, 1]]), 1);
    }

    #[test]
    fn unit_square() {
        let ts = check(poly(&[[0, 0], [1, 0], [0, 1], [1, 1]]), 2);
        assert!(ts[0].differs_by_flip(&ts[1]));
    }

    #[test]
    fn triangle_with_interior_point() {
        let p = poly(&[[1, 0], [0, 1], [-1, -1]]);
        assert_eq!(p.normalized_area(), 3);
        assert_eq!(p.interior_points(), vec![[0, 0]]);
        let ts = check(p, 1);
        assert!(ts[0].vertices().contains(&[0, 0]));
    }

    #[test]
    fn trapezoid_and_long_triangle() {
        let ts = check(poly(&[[0, 0], [2, 0], [0, 1], [1, 1]]), 3);
        let flips = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter(|&(i, j)| ts[i].differs_by_flip(&ts[j]))
            .count();
        assert_eq!(flips, 2);
        check(poly(&[[0, 0], [2, 0], [0, 1]]), 1);
    }

    #[test]
    fn larger_polygons() {
        // 2x1 rectangle and the hexagon with one interior point
        check(poly(&[[0, 0], [2, 0], [0, 1], [2, 1]]), 6);
        check(poly(&[[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]]), 18);
    }

    #[test]
    fn dilated_triangle() {
        check(poly(&[[0, 0], [2, 0], [0, 2]]), 4);
    }
}
