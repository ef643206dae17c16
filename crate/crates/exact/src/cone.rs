//! Rational polyhedral cones.
//!
//! Conversion from generators to halfspaces is Fourier–Motzkin elimination of
//! the multipliers in `x = G λ, λ >= 0`, followed by a rank-based facet test
//! that discards redundant inequalities. The opposite conversion is the same
//! routine applied to the halfspace normals, since the generators of
//! `{x : A x >= 0}` are the facet normals of `cone(rows of A)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::matrix::{primitive, primitive_from_rational, rational_nullspace, rational_rank, rref, solve_rational};
use crate::ExactError;

/// A closed convex rational polyhedral cone in `Q^ambient_rank`.
///
/// `generators` and `halfspaces` describe the same set:
/// `cone(generators) == { x : h . x >= 0 for every h in halfspaces }`.
/// Both lists are canonical: sorted, primitive, irredundant, with any lineality
/// space (resp. linear span deficit) recorded as `v, -v` pairs of a reduced
/// echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalCone {
    pub ambient_rank: usize,
    pub generators: Vec<Vec<BigInt>>,
    pub halfspaces: Vec<Vec<BigInt>>,
}

impl RationalCone {
    /// The cone generated by `generators`.
    pub fn from_generators(generators: &[Vec<BigInt>], ambient_rank: usize) -> Self {
        cone_dual(generators, ambient_rank)
    }

    /// The cone `{x : h . x >= 0}` cut out by the given normals.
    pub fn from_halfspaces(halfspaces: &[Vec<BigInt>], ambient_rank: usize) -> Self {
        let generators = facet_normals(halfspaces, ambient_rank);
        let halfspaces = facet_normals(&generators, ambient_rank);
        RationalCone {
            ambient_rank,
            generators,
            halfspaces,
        }
    }

    /// The dual cone `{y : y . x >= 0 for all x in self}`.
    pub fn dual(&self) -> RationalCone {
        RationalCone {
            ambient_rank: self.ambient_rank,
            generators: self.halfspaces.clone(),
            halfspaces: self.generators.clone(),
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.halfspaces.iter().all(|h| !dot(h, x).is_negative())
    }

    pub fn contains_rational(&self, x: &[BigRational]) -> bool {
        self.halfspaces.iter().all(|h| !dot_rat(h, x).is_negative())
    }

    /// Whether `x` satisfies every facet inequality strictly.
    pub fn contains_in_interior(&self, x: &[BigInt]) -> bool {
        self.is_full_dimensional() && self.halfspaces.iter().all(|h| dot(h, x).is_positive())
    }

    /// Dimension of the linear span of the cone.
    pub fn dimension(&self) -> usize {
        rational_rank(&self.generators)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.ambient_rank
    }

    /// Normals of the facets (inequalities that are not one half of an
    /// equality pair).
    pub fn facets(&self) -> Vec<Vec<BigInt>> {
        let set: BTreeSet<&Vec<BigInt>> = self.halfspaces.iter().collect();
        self.halfspaces
            .iter()
            .filter(|h| !set.contains(&neg(h)))
            .cloned()
            .collect()
    }
}

/// Computes both representations of `cone(generators)`.
///
/// The halfspace list is the set of primitive facet normals plus `±e` for a
/// canonical basis `e` of the orthogonal complement of the span. The zero cone
/// yields `±` the standard basis; the whole space yields no halfspaces.
pub fn cone_dual(generators: &[Vec<BigInt>], ambient_rank: usize) -> RationalCone {
    for g in generators {
        assert_eq!(g.len(), ambient_rank, "generator length");
    }
    let halfspaces = facet_normals(generators, ambient_rank);
    let generators = facet_normals(&halfspaces, ambient_rank);
    RationalCone {
        ambient_rank,
        generators,
        halfspaces,
    }
}

/// A point strictly inside `{x : h . x > 0 for h in strict, e . x = 0 for e in
/// equalities}`.
///
/// The point is the sum of the canonical generators of the closed cone, which
/// lies in its relative interior; the open set is nonempty exactly when that
/// sum satisfies every strict inequality. The result is integral and depends
/// only on the input.
pub fn interior_point(
    strict: &[Vec<BigInt>],
    equalities: &[Vec<BigInt>],
    ambient_rank: usize,
) -> Result<Vec<BigInt>, ExactError> {
    for h in strict.iter().chain(equalities) {
        if h.len() != ambient_rank {
            return Err(ExactError::DimensionMismatch {
                expected: ambient_rank,
                got: h.len(),
            });
        }
    }
    let mut closed: Vec<Vec<BigInt>> = strict.to_vec();
    for e in equalities {
        closed.push(e.clone());
        closed.push(neg(e));
    }
    let cone = RationalCone::from_halfspaces(&closed, ambient_rank);
    let mut point = vec![BigInt::zero(); ambient_rank];
    for g in &cone.generators {
        for (p, x) in point.iter_mut().zip(g) {
            *p += x;
        }
    }
    if strict.iter().all(|h| dot(h, &point).is_positive()) {
        Ok(point)
    } else {
        Err(ExactError::EmptyInterior)
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn dot_rat(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| {
        acc + BigRational::from_integer(x.clone()) * y
    })
}

fn neg(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Canonical halfspace description of `cone(gens)`.
fn facet_normals(gens: &[Vec<BigInt>], d: usize) -> Vec<Vec<BigInt>> {
    let gens: Vec<Vec<BigInt>> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .map(|g| primitive(g))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    // orthogonal complement of the span, as a canonical basis
    let complement = rational_nullspace(&gens, d);
    let r = d - complement.len();

    let mut out: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    if r > 0 {
        for a in fm_facets(&gens, d, r) {
            let a = project_onto_span(&a, &complement);
            if a.iter().any(|x| !x.is_zero()) {
                out.insert(a);
            }
        }
    }
    for e in &complement {
        out.insert(e.clone());
        out.insert(neg(e));
    }
    out.into_iter().collect()
}

/// Removes the component of `a` orthogonal to the span (the span is the
/// orthogonal complement of `complement`), then makes it primitive.
fn project_onto_span(a: &[BigInt], complement: &[Vec<BigInt>]) -> Vec<BigInt> {
    if complement.is_empty() {
        return primitive(a);
    }
    let gram: Vec<Vec<BigRational>> = complement
        .iter()
        .map(|e| complement.iter().map(|f| rat(&dot(e, f))).collect())
        .collect();
    let rhs: Vec<BigRational> = complement.iter().map(|e| rat(&dot(e, a))).collect();
    let c = solve_rational(&gram, &rhs).expect("gram matrix of a basis is invertible");
    let mut proj: Vec<BigRational> = a.iter().map(rat).collect();
    for (ci, e) in c.iter().zip(complement) {
        for (p, x) in proj.iter_mut().zip(e) {
            *p -= ci * rat(x);
        }
    }
    primitive_from_rational(&proj)
}

/// One inequality in the elimination: coefficients over `(y, λ_free)` and the
/// set of original multiplier constraints it was combined from.
#[derive(Clone)]
struct Row {
    coef: Vec<BigInt>,
    origin: BTreeSet<usize>,
}

/// Facet normals (in `Q^d`, not yet projected) of a cone whose span has
/// dimension `r > 0`.
fn fm_facets(gens: &[Vec<BigInt>], d: usize, r: usize) -> Vec<Vec<BigInt>> {
    let m = gens.len();
    // choose r coordinates on which the span projects isomorphically
    let coord_rows: Vec<Vec<BigInt>> = (0..d)
        .map(|i| gens.iter().map(|g| g[i].clone()).collect())
        .collect();
    let (_, row_pivots) = rref(
        &transpose_rat(&coord_rows.iter().map(|r| r.iter().map(rat).collect()).collect::<Vec<_>>()),
    );
    debug_assert_eq!(row_pivots.len(), r);
    // reduced generator matrix: r x m
    let gr: Vec<Vec<BigRational>> = row_pivots
        .iter()
        .map(|&i| coord_rows[i].iter().map(rat).collect())
        .collect();
    // pivot multipliers: r independent columns of gr
    let (_, col_pivots) = rref(&gr);
    let free: Vec<usize> = (0..m).filter(|c| !col_pivots.contains(c)).collect();
    // B = gr[:, pivots], invert by solving against unit vectors
    let b: Vec<Vec<BigRational>> = gr
        .iter()
        .map(|row| col_pivots.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let b_inv_cols: Vec<Vec<BigRational>> = (0..r)
        .map(|k| {
            let mut e = vec![BigRational::zero(); r];
            e[k] = BigRational::from_integer(BigInt::from(1));
            solve_rational(&b, &e).expect("pivot block is invertible")
        })
        .collect();
    // b_inv[i][k] = b_inv_cols[k][i]
    let b_inv = |i: usize, k: usize| b_inv_cols[k][i].clone();

    // variables: y_0..y_{r-1}, then λ_f for f in free
    let nv = r + free.len();
    let mut rows: Vec<Row> = Vec::new();
    // λ_P = B^{-1} y - B^{-1} G_F λ_F >= 0
    for (pi, &p) in col_pivots.iter().enumerate() {
        let mut coef = vec![BigRational::zero(); nv];
        for k in 0..r {
            coef[k] = b_inv(pi, k);
        }
        for (fi, &f) in free.iter().enumerate() {
            let mut s = BigRational::zero();
            for k in 0..r {
                s += b_inv(pi, k) * &gr[k][f];
            }
            coef[r + fi] = -s;
        }
        rows.push(Row {
            coef: primitive_from_rational(&coef),
            origin: BTreeSet::from([p]),
        });
    }
    for (fi, &f) in free.iter().enumerate() {
        let mut coef = vec![BigInt::zero(); nv];
        coef[r + fi] = BigInt::from(1);
        rows.push(Row {
            coef,
            origin: BTreeSet::from([f]),
        });
    }

    // eliminate the free multipliers one at a time
    for (step, fi) in (0..free.len()).rev().enumerate() {
        let var = r + fi;
        let (mut pos, mut negs, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows {
            match row.coef[var].sign() {
                num_bigint::Sign::Plus => pos.push(row),
                num_bigint::Sign::Minus => negs.push(row),
                num_bigint::Sign::NoSign => zero.push(row),
            }
        }
        let mut next = zero;
        for p in &pos {
            for n in &negs {
                let origin: BTreeSet<usize> = p.origin.union(&n.origin).copied().collect();
                // Chernikov: a combination of more than step + 2 originals is redundant
                if origin.len() > step + 2 {
                    continue;
                }
                let cp = p.coef[var].clone();
                let cn = -n.coef[var].clone();
                let coef: Vec<BigInt> = p
                    .coef
                    .iter()
                    .zip(&n.coef)
                    .map(|(a, b)| &cn * a + &cp * b)
                    .collect();
                next.push(Row {
                    coef: primitive(&coef),
                    origin,
                });
            }
        }
        // drop duplicates and rows whose origin strictly contains another's
        // with the same coefficients
        next.sort_by(|a, b| a.coef.cmp(&b.coef).then(a.origin.len().cmp(&b.origin.len())));
        next.dedup_by(|a, b| a.coef == b.coef);
        for row in &mut next {
            row.coef.truncate(var);
        }
        rows = next;
    }

    // facet test: generators tight on the inequality span r - 1 dimensions
    let gens_y: Vec<Vec<BigInt>> = (0..m)
        .map(|j| {
            let col: Vec<BigRational> = gr.iter().map(|row| row[j].clone()).collect();
            primitive_from_rational(&col)
        })
        .collect();
    let mut result = Vec::new();
    let mut seen = BTreeSet::new();
    for row in rows {
        let a = &row.coef[..r];
        if a.iter().all(Zero::is_zero) || !seen.insert(a.to_vec()) {
            continue;
        }
        let tight: Vec<Vec<BigInt>> = gens_y
            .iter()
            .filter(|g| dot(a, g).is_zero())
            .cloned()
            .collect();
        debug_assert!(gens_y.iter().all(|g| !dot(a, g).is_negative()));
        if rational_rank(&tight) + 1 != r {
            continue;
        }
        let mut full = vec![BigInt::zero(); d];
        for (k, &i) in row_pivots.iter().enumerate() {
            full[i] = a[k].clone();
        }
        result.push(full);
    }
    result
}

fn transpose_rat(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let c = rows.first().map_or(0, Vec::len);
    (0..c).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ints;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        ints(x)
    }

    #[test]
    fn orthant() {
        let c = cone_dual(&[v(&[1, 0]), v(&[0, 1])], 2);
        assert_eq!(c.halfspaces, vec![v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c.generators, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn skew_cone() {
        // gens (1,0),(1,2): facets y >= 0 and 2x - y >= 0
        let c = cone_dual(&[v(&[1, 0]), v(&[1, 2])], 2);
        assert_eq!(c.halfspaces, vec![v(&[0, 1]), v(&[2, -1])]);
        for g in [v(&[1, 0]), v(&[1, 2])] {
            assert!(c.contains(&g));
        }
        assert!(!c.contains(&v(&[0, 1])));
    }

    #[test]
    fn full_plane_and_zero_cone() {
        let c = cone_dual(&[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])], 2);
        assert!(c.halfspaces.is_empty());
        assert_eq!(c.dimension(), 2);
        let z = cone_dual(&[], 2);
        assert_eq!(z.halfspaces.len(), 4);
        assert!(z.generators.is_empty());
        assert!(z.contains(&v(&[0, 0])));
        assert!(!z.contains(&v(&[1, 0])));
    }

    #[test]
    fn lower_dimensional_cone() {
        // a ray in 3-space
        let c = cone_dual(&[v(&[1, 1, 0])], 3);
        assert_eq!(c.dimension(), 1);
        assert!(c.contains(&v(&[2, 2, 0])));
        assert!(!c.contains(&v(&[-1, -1, 0])));
        assert!(!c.contains(&v(&[1, 0, 0])));
        // half-plane in 3-space with a line
        let c = cone_dual(&[v(&[1, 0, 0]), v(&[-1, 0, 0]), v(&[0, 1, 0])], 3);
        assert_eq!(c.dimension(), 2);
        assert_eq!(c.facets(), vec![v(&[0, 1, 0])]);
    }

    #[test]
    fn redundant_generators_dropped() {
        let c = cone_dual(&[v(&[1, 0]), v(&[1, 1]), v(&[0, 1]), v(&[3, 1])], 2);
        assert_eq!(c.generators, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn three_dimensional_square_cone() {
        let gens = [v(&[0, 0, 1]), v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 1])];
        let c = cone_dual(&gens, 3);
        assert_eq!(c.halfspaces.len(), 4);
        assert_eq!(c.generators.len(), 4);
        assert!(c.contains_in_interior(&v(&[1, 1, 2])));
    }

    #[test]
    fn interior_point_examples() {
        assert_eq!(interior_point(&[v(&[1])], &[], 1).unwrap(), v(&[1]));
        assert_eq!(
            interior_point(&[v(&[1]), v(&[-1])], &[], 1),
            Err(ExactError::EmptyInterior)
        );
        // θ0 > 0 on the line θ0 + θ1 = 0; check by substitution
        let p = interior_point(&[v(&[1, 0])], &[v(&[1, 1])], 2).unwrap();
        assert_eq!(p, v(&[1, -1]));
    }

    #[test]
    fn interior_point_of_zero_dimensional_space() {
        assert_eq!(interior_point(&[], &[], 0).unwrap(), Vec::<BigInt>::new());
    }

    fn mutually_contained(a: &RationalCone, b: &RationalCone) -> bool {
        a.generators.iter().all(|g| b.contains(g)) && b.generators.iter().all(|g| a.contains(g))
    }

    proptest! {
        #[test]
        fn dual_is_involution(
            n in 1usize..6,
            d in 1usize..4,
            raw in proptest::collection::vec(-3i64..4, 18)
        ) {
            let gens: Vec<Vec<BigInt>> = (0..n).map(|i| (0..d).map(|j| BigInt::from(raw[i * 3 + j])).collect()).collect();
            let c = cone_dual(&gens, d);
            for g in &gens {
                prop_assert!(c.contains(g));
            }
            let dd = c.dual().dual();
            prop_assert_eq!(&dd, &c);
            let again = RationalCone::from_halfspaces(&c.halfspaces, d);
            prop_assert!(mutually_contained(&again, &c));
            // halfspaces are primitive
            for h in &c.halfspaces {
                prop_assert_eq!(primitive(h), h.clone());
            }
        }

        #[test]
        fn interior_point_is_strict_and_deterministic(
            n in 1usize..5,
            raw in proptest::collection::vec(-3i64..4, 12)
        ) {
            let hs: Vec<Vec<BigInt>> = (0..n).map(|i| (0..3).map(|j| BigInt::from(raw[i * 3 + j])).collect()).collect();
            match interior_point(&hs, &[], 3) {
                Ok(p) => {
                    for h in &hs {
                        prop_assert!(dot(h, &p).is_positive());
                    }
                    prop_assert_eq!(interior_point(&hs, &[], 3).unwrap(), p);
                }
                Err(e) => {
                    prop_assert_eq!(e, ExactError::EmptyInterior);
                    // closed cone is not full dimensional or a normal vanishes
                    let c = RationalCone::from_halfspaces(&hs, 3);
                    let zero_normal = hs.iter().any(|h| h.iter().all(Zero::is_zero));
                    prop_assert!(zero_normal || !c.is_full_dimensional());
                }
            }
        }
    }
}
