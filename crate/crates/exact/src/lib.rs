//! Exact arithmetic building blocks.
//!
//! Everything here works over arbitrary-precision integers and rationals:
//! integer matrices with Smith normal form, rational polyhedral cones with
//! both generator and halfspace descriptions, and lattice polygons with their
//! regular unimodular triangulations. There are no tolerances anywhere.

mod cone;
mod matrix;
mod polygon;
mod snf;

pub use cone::{cone_dual, interior_point, RationalCone};
pub use matrix::{
    integer_kernel, primitive, primitive_from_rational, rational_nullspace, rational_rank,
    rref, solve_rational, IntMatrix,
};
pub use polygon::{
    convex_hull, cross, enumerate_regular_unimodular_triangulations, regularity_certificate,
    ConvexPolygon, Point, Triangulation,
};
pub use snf::{smith_normal_form, SmithForm};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("the open polyhedron has empty interior")]
    EmptyInterior,
    #[error("all polygon points are collinear")]
    DegeneratePolygon,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Shorthand for building an [`Int`] from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Converts a slice of machine integers into exact integers.
pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}
