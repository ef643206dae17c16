use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;

/// Result of [`smith_normal_form`]: `u * m * v == s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by alternating row and column Euclidean reduction.
///
/// Returns unimodular `u`, `v` and diagonal `s` with `u * m * v == s`, the
/// diagonal entries nonnegative and each dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&s, t) else {
            break;
        };
        move_pivot(&mut s, &mut u, &mut v, t, pi, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = s.get(i, t).div_floor(s.get(t, t));
                s.add_row_multiple(i, t, &-q.clone());
                u.add_row_multiple(i, t, &-q);
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = s.get(t, j).div_floor(s.get(t, t));
                s.add_col_multiple(j, t, &-q.clone());
                v.add_col_multiple(j, t, &-q);
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a smaller remainder exists in row/column t; bring it to the pivot
                let (pi, pj) = min_abs_in_cross(&s, t);
                move_pivot(&mut s, &mut u, &mut v, t, pi, pj);
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let pivot = s.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&pivot))
            });
            match bad {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, s, v }
}

fn min_abs_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = s.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_in_cross(s: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut cands: Vec<(usize, usize)> = (t + 1..s.rows()).map(|i| (i, t)).collect();
    cands.extend((t + 1..s.cols()).map(|j| (t, j)));
    for (i, j) in cands {
        let x = s.get(i, j);
        if !x.is_zero() && x.abs() < s.get(best.0, best.1).abs() {
            best = (i, j);
        }
    }
    best
}

fn move_pivot(
    s: &mut IntMatrix,
    u: &mut IntMatrix,
    v: &mut IntMatrix,
    t: usize,
    pi: usize,
    pj: usize,
) {
    s.swap_rows(t, pi);
    u.swap_rows(t, pi);
    s.swap_cols(t, pj);
    v.swap_cols(t, pj);
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s, "U M V != S for {m:?}");
        assert!(f.u.is_unimodular());
        assert!(f.v.is_unimodular());
        assert!(f.s.is_diagonal());
        let d = f.invariant_factors();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]), "divisibility chain {d:?}");
        }
        for x in &d {
            assert!(!x.is_negative());
        }
        f
    }

    #[test]
    fn identity_and_zero() {
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
        let f = check(&IntMatrix::zeros(2, 2));
        assert!(f.s.is_zero());
    }

    #[test]
    fn two_by_two_example() {
        // Hand reduction: [[2,4],[6,8]] -> row2 -= 3 row1 -> [[2,4],[0,-4]]
        // -> col2 -= 2 col1 -> [[2,0],[0,-4]] -> diag(2,4).
        let f = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(f.s, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn divisibility_repair() {
        // diag(2,3) is not Smith; the form is diag(1,6)
        let f = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(f.s, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn rectangular_rank() {
        let f = check(&IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(f.rank(), 1);
        assert!(f.s.get(0, 0).is_one());
    }

    proptest! {
        #[test]
        fn round_trip_on_random_matrices(
            r in 1usize..5, c in 1usize..5,
            seed in proptest::collection::vec(-9i64..10, 25)
        ) {
            let rows: Vec<Vec<BigInt>> = (0..r)
                .map(|i| (0..c).map(|j| BigInt::from(seed[i * 5 + j])).collect())
                .collect();
            check(&IntMatrix::from_rows(rows));
        }
    }
}
