//! Zero patterns of representations with dimension vector `(1, ..., 1)`,
//! stability, the torus weight lattice and torus-fixed points.
//!
//! A representation is recorded by its zero set `Z` (a mask over arrows).
//! Whether it satisfies the relations, which subsets of vertices support
//! submodules, and hence stability, depend on `Z` only.

use std::collections::BTreeSet;

use dimerwall_exact::{integer_kernel, rational_rank, solve_rational, BigInt, BigRational, IntMatrix};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::dimer::{mask_items, MatchingSet, Quiver};
use crate::error::{Error, Result};

/// Patterns are enumerated exhaustively, so the arrow count is capped.
pub const MAX_PATTERN_ARROWS: usize = 24;
/// Vertex subsets are enumerated exhaustively.
pub const MAX_VERTICES: usize = 20;

/// `θ(χ_R)`.
pub fn pairing(theta: &[i64], r: u64) -> i64 {
    mask_items(r).into_iter().map(|v| theta[v]).sum()
}

/// Checks that `θ` has one entry per vertex and lies in `Θ`.
pub fn check_theta(q: &Quiver, theta: &[i64]) -> Result<()> {
    if theta.len() != q.num_vertices {
        return Err(Error::InvalidParameter(format!(
            "expected {} entries, got {}",
            q.num_vertices,
            theta.len()
        )));
    }
    if theta.iter().sum::<i64>() != 0 {
        return Err(Error::InvalidParameter("entries must sum to zero".into()));
    }
    Ok(())
}

/// Strong genericity: `θ(χ_R) != 0` for every proper nonempty `R`.
pub fn check_generic(q: &Quiver, theta: &[i64]) -> Result<()> {
    check_theta(q, theta)?;
    let full = q.all_vertices_mask();
    for r in 1..full {
        if pairing(theta, r) == 0 {
            return Err(Error::NonGenericParameter(mask_items(r)));
        }
    }
    Ok(())
}

pub fn is_admissible(q: &Quiver, zero: u64) -> bool {
    (0..q.num_arrows()).all(|a| (q.plus_mask[a] & zero != 0) == (q.minus_mask[a] & zero != 0))
}

/// Vertices reachable in one step along support arrows.
fn successors(q: &Quiver, zero: u64) -> Vec<u64> {
    let mut succ = vec![0u64; q.num_vertices];
    for (a, arr) in q.arrows.iter().enumerate() {
        if zero >> a & 1 == 0 {
            succ[arr.source] |= 1 << arr.target;
        }
    }
    succ
}

fn closed_from_successors(nv: usize, succ: &[u64]) -> Vec<u64> {
    let full = (1u64 << nv) - 1;
    (1..full)
        .filter(|&r| mask_items(r).into_iter().all(|v| succ[v] & !r == 0))
        .collect()
}

/// Proper nonempty vertex sets closed under the support arrows: the supports
/// of proper nonzero submodules.
pub fn closed_supports(q: &Quiver, zero: u64) -> Result<Vec<u64>> {
    if !is_admissible(q, zero) {
        return Err(Error::InadmissiblePattern);
    }
    Ok(closed_from_successors(q.num_vertices, &successors(q, zero)))
}

pub fn is_stable(q: &Quiver, zero: u64, theta: &[i64]) -> Result<bool> {
    Ok(closed_supports(q, zero)?.iter().all(|&r| pairing(theta, r) > 0))
}

pub fn is_semistable(q: &Quiver, zero: u64, theta: &[i64]) -> Result<bool> {
    Ok(closed_supports(q, zero)?.iter().all(|&r| pairing(theta, r) >= 0))
}

/// An admissible pattern with its closed supports and torus-orbit dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternInfo {
    pub zero: u64,
    pub closed: Vec<u64>,
    pub orbit_dim: usize,
}

impl PatternInfo {
    pub fn stable(&self, theta: &[i64]) -> bool {
        self.closed.iter().all(|&r| pairing(theta, r) > 0)
    }
}

/// Every admissible pattern of a quiver. Independent of `θ`.
#[derive(Clone, Debug)]
pub struct PatternTable {
    pub patterns: Vec<PatternInfo>,
}

impl PatternTable {
    pub fn new(q: &Quiver) -> Result<Self> {
        let na = q.num_arrows();
        if na > MAX_PATTERN_ARROWS || q.num_vertices > MAX_VERTICES {
            return Err(Error::TooLarge(format!(
                "{na} arrows and {} vertices exceed the enumeration limits",
                q.num_vertices
            )));
        }
        let orbit = OrbitData::new(q);
        let patterns = (0..1u64 << na)
            .filter(|&z| is_admissible(q, z))
            .map(|zero| PatternInfo {
                zero,
                closed: closed_from_successors(q.num_vertices, &successors(q, zero)),
                orbit_dim: orbit.dimension(!zero & q.all_arrows_mask()),
            })
            .collect();
        Ok(PatternTable { patterns })
    }

    pub fn stable<'a>(&'a self, theta: &'a [i64]) -> impl Iterator<Item = &'a PatternInfo> + 'a {
        self.patterns.iter().filter(move |p| p.stable(theta))
    }

    pub fn get(&self, zero: u64) -> Option<&PatternInfo> {
        self.patterns.iter().find(|p| p.zero == zero)
    }
}

/// The arrow-scaling torus `{λ : λ . rel(a) = 0}` and the gauge coboundaries,
/// both as integer row spaces in `Z^A`.
struct OrbitData {
    torus: Vec<Vec<i64>>,
    gauge: Vec<Vec<i64>>,
}

impl OrbitData {
    fn new(q: &Quiver) -> Self {
        let rel = IntMatrix::from_rows(
            q.rel
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        );
        let k = integer_kernel(&rel);
        let torus = (0..k.cols())
            .map(|j| k.column(j).iter().map(|x| x.to_i64().expect("small kernel")).collect())
            .collect();
        OrbitData {
            torus,
            gauge: q.incidence(),
        }
    }

    /// Dimension of the torus orbit of a representation with the given
    /// support: the torus directions restricted to the support, modulo the
    /// gauge directions restricted to it.
    fn dimension(&self, support: u64) -> usize {
        let restrict = |rows: &Vec<Vec<i64>>| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| mask_items(support).into_iter().map(|a| BigInt::from(r[a])).collect())
                .collect()
        };
        rational_rank(&restrict(&self.torus)) - rational_rank(&restrict(&self.gauge))
    }
}

/// Orbit dimension of a single pattern.
pub fn orbit_dimension(q: &Quiver, zero: u64) -> usize {
    OrbitData::new(q).dimension(!zero & q.all_arrows_mask())
}

/// All `χ_R` (as vertex masks) over closed supports of `θ`-stable patterns.
pub fn support_census(q: &Quiver, table: &PatternTable, theta: &[i64]) -> Result<Vec<u64>> {
    check_generic(q, theta)?;
    let census: BTreeSet<u64> = table.stable(theta).flat_map(|p| p.closed.iter().copied()).collect();
    if let Some(&r) = census.iter().find(|&&r| pairing(theta, r) == 0) {
        return Err(Error::NonGenericParameter(mask_items(r)));
    }
    Ok(census.into_iter().collect())
}

/// Zero sets of the `θ`-stable patterns with zero-dimensional orbit.
pub fn fixed_points(q: &Quiver, table: &PatternTable, theta: &[i64]) -> Result<Vec<u64>> {
    check_generic(q, theta)?;
    Ok(table
        .stable(theta)
        .filter(|p| p.orbit_dim == 0)
        .map(|p| p.zero)
        .collect())
}

/// The character lattice of the three-dimensional torus and the matching
/// valuations on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightLattice {
    pub cycle_rank: usize,
    pub relation_rank: usize,
    pub rank: usize,
    /// Valuation of each matching in the Smith basis.
    pub raw_valuations: Vec<Vec<i64>>,
    /// Unimodular change of basis taking raw valuations to `(h(D), 1)`.
    pub change_of_basis: [[i64; 3]; 3],
    /// `(h(D), 1)` for each matching.
    pub valuations: Vec<[i64; 3]>,
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn small(x: &BigInt, what: &str) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(what.into()))
}

/// `M_T = ker(∂) / span(rel)` modulo torsion, with `ν_D(u) = Σ_a u_a [a ∈ D]`.
pub fn weight_lattice(q: &Quiver, matchings: &MatchingSet) -> Result<WeightLattice> {
    let na = q.num_arrows();
    let boundary = IntMatrix::from_rows(q.incidence().iter().map(|r| big(r)).collect());
    let cycles = integer_kernel(&boundary);
    let k = cycles.cols();
    let cycle_rows: Vec<Vec<BigRational>> = (0..na)
        .map(|a| (0..k).map(|j| rat(cycles.get(a, j))).collect())
        .collect();

    // relations in cycle coordinates
    let mut rel_coords: Vec<Vec<BigInt>> = Vec::new();
    for r in &q.rel {
        let rhs: Vec<BigRational> = r.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let c = solve_rational(&cycle_rows, &rhs)
            .ok_or_else(|| Error::WeightMismatch("a relation is not a cycle".into()))?;
        if c.iter().any(|x| !x.is_integer()) {
            return Err(Error::WeightMismatch("relation not integral on the cycle basis".into()));
        }
        rel_coords.push(c.iter().map(|x| x.to_integer()).collect());
    }
    let relation_rank = rational_rank(&rel_coords);
    let dual = if rel_coords.is_empty() {
        IntMatrix::identity(k)
    } else {
        integer_kernel(&IntMatrix::from_rows(rel_coords.clone()))
    };
    let rank = dual.cols();
    if rank != 3 {
        return Err(Error::RankError(rank));
    }
    let dual_rows: Vec<Vec<BigRational>> = (0..k)
        .map(|i| (0..3).map(|j| rat(dual.get(i, j))).collect())
        .collect();

    let mut raw = Vec::new();
    for m in &matchings.matchings {
        // the functional c -> χ_D . (cycles c)
        let w: Vec<BigInt> = (0..k)
            .map(|j| m.edges.iter().map(|&a| cycles.get(a, j).clone()).sum())
            .collect();
        for c in &rel_coords {
            let s: BigInt = c.iter().zip(&w).map(|(x, y)| x * y).sum();
            if !s.is_zero() {
                return Err(Error::WeightMismatch(format!(
                    "matching {:?} does not vanish on the relations",
                    m.edges
                )));
            }
        }
        let z = solve_rational(&dual_rows, &w.iter().map(rat).collect::<Vec<_>>())
            .filter(|z| z.iter().all(|x| x.is_integer()))
            .ok_or_else(|| Error::WeightMismatch("valuation outside the dual lattice".into()))?;
        raw.push(
            z.iter()
                .map(|x| small(&x.to_integer(), "valuations"))
                .collect::<Result<Vec<i64>>>()?,
        );
    }

    let targets: Vec<[i64; 3]> = matchings.matchings.iter().map(|m| [m.class[0], m.class[1], 1]).collect();
    let g = change_of_basis(&raw, &targets)?;
    for (z, t) in raw.iter().zip(&targets) {
        let image: Vec<i64> = (0..3).map(|i| (0..3).map(|j| g[i][j] * z[j]).sum()).collect();
        if image != t.to_vec() {
            return Err(Error::WeightMismatch(format!("valuation {z:?} maps to {image:?}, expected {t:?}")));
        }
    }
    Ok(WeightLattice {
        cycle_rank: k,
        relation_rank,
        rank,
        raw_valuations: raw,
        change_of_basis: g,
        valuations: targets,
    })
}

/// Solves `G z_D = t_D` from three matchings with independent targets and
/// checks that `G` is integral and unimodular.
fn change_of_basis(raw: &[Vec<i64>], targets: &[[i64; 3]]) -> Result<[[i64; 3]; 3]> {
    let n = raw.len();
    let triple = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
        .find(|idx| {
            let m = IntMatrix::from_rows(idx.iter().map(|&i| big(&targets[i])).collect());
            !m.determinant().is_zero()
        })
        .ok_or_else(|| Error::WeightMismatch("matching classes are collinear".into()))?;
    // rows of G: g_i . z_D = t_D[i] for D in the triple
    let zrows: Vec<Vec<BigRational>> = triple
        .iter()
        .map(|&d| raw[d].iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut g = [[0i64; 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        let rhs: Vec<BigRational> = triple
            .iter()
            .map(|&d| BigRational::from_integer(targets[d][i].into()))
            .collect();
        let sol = solve_rational(&zrows, &rhs).expect("independent triple");
        for (j, x) in sol.iter().enumerate() {
            if !x.is_integer() {
                return Err(Error::WeightMismatch("change of basis is not integral".into()));
            }
            row[j] = small(&x.to_integer(), "change of basis")?;
        }
    }
    let det = IntMatrix::from_rows(g.iter().map(|r| big(r)).collect()).determinant();
    if !det.abs().is_one() {
        return Err(Error::WeightMismatch(format!("change of basis has determinant {det}")));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::dimer::{mask_of, perfect_matchings, validate_and_build};

    fn quiver(name: &str) -> Quiver {
        validate_and_build(&catalog(name).unwrap().to_model().unwrap()).unwrap()
    }

    #[test]
    fn conifold_closed_supports() {
        let q = quiver("conifold");
        assert!(closed_supports(&q, 0).unwrap().is_empty());
        assert_eq!(closed_supports(&q, 0b1111).unwrap(), vec![0b01, 0b10]);
        // arrows 1 and 3 go v1 -> v0
        assert_eq!(closed_supports(&q, mask_of([1, 3])).unwrap(), vec![0b10]);
        // the conifold relations use the same arrows on both sides
        assert!(closed_supports(&q, mask_of([1])).unwrap().is_empty());
        let q = quiver("c3z3");
        assert_eq!(closed_supports(&q, mask_of([0])), Err(Error::InadmissiblePattern));
    }

    #[test]
    fn stability_examples() {
        let q = quiver("conifold");
        assert!(is_stable(&q, 0, &[1, -1]).unwrap());
        assert!(is_stable(&q, 0, &[-1, 1]).unwrap());
        assert!(!is_stable(&q, 0b1111, &[1, -1]).unwrap());
        assert!(!is_stable(&q, mask_of([1, 3]), &[1, -1]).unwrap());
        assert!(is_stable(&q, mask_of([1, 3]), &[-1, 1]).unwrap());
    }

    #[test]
    fn census_examples() {
        let q = quiver("conifold");
        let t = PatternTable::new(&q).unwrap();
        assert_eq!(support_census(&q, &t, &[1, -1]).unwrap(), vec![0b01]);
        assert_eq!(support_census(&q, &t, &[-1, 1]).unwrap(), vec![0b10]);
        assert_eq!(support_census(&q, &t, &[0, 0]), Err(Error::NonGenericParameter(vec![0])));
        let c3 = quiver("c3");
        let t3 = PatternTable::new(&c3).unwrap();
        assert!(support_census(&c3, &t3, &[0]).unwrap().is_empty());
    }

    #[test]
    fn fixed_point_counts() {
        let c3 = quiver("c3");
        let t = PatternTable::new(&c3).unwrap();
        assert_eq!(fixed_points(&c3, &t, &[0]).unwrap(), vec![0b111]);
        let q = quiver("conifold");
        let t = PatternTable::new(&q).unwrap();
        assert_eq!(fixed_points(&q, &t, &[1, -1]).unwrap().len(), 2);
        let q = quiver("c3z3");
        let t = PatternTable::new(&q).unwrap();
        assert_eq!(fixed_points(&q, &t, &[2, -1, -1]).unwrap().len(), 3);
    }

    #[test]
    fn full_support_orbit_is_three_dimensional() {
        for name in crate::catalog::NAMES {
            let q = quiver(name);
            assert_eq!(orbit_dimension(&q, 0), 3);
        }
    }

    #[test]
    fn weight_lattices() {
        for name in crate::catalog::NAMES {
            let q = quiver(name);
            let ms = perfect_matchings(&q.model).unwrap();
            let w = weight_lattice(&q, &ms).unwrap();
            assert_eq!(w.rank, 3);
            assert_eq!(w.cycle_rank, q.num_arrows() - q.num_vertices + 1);
            for (v, m) in w.valuations.iter().zip(&ms.matchings) {
                assert_eq!(v, &[m.class[0], m.class[1], 1]);
            }
        }
        let q = quiver("c3");
        let w = weight_lattice(&q, &perfect_matchings(&q.model).unwrap()).unwrap();
        assert_eq!((w.relation_rank, w.cycle_rank), (0, 3));
    }
}
