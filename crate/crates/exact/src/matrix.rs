use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::snf::smith_normal_form;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix with `cols` columns from the given column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant by fraction-free Bareiss elimination. Panics if not square.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    pub fn rank(&self) -> usize {
        rational_rank(&self.to_rows())
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

fn to_rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Reduced row echelon form over the rationals. Returns the nonzero rows and
/// the pivot column of each.
pub fn rref(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..ncols {
                    let delta = &factor * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

fn rational_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(to_rat).collect()).collect()
}

/// Rank of an integer matrix given by rows.
pub fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
    rref(&rational_rows(rows)).1.len()
}

/// A basis of the rational nullspace `{x : A x = 0}`, brought to reduced
/// echelon form and scaled to primitive integer vectors. The result depends
/// only on the subspace, so it is canonical.
pub fn rational_nullspace(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let (r, pivots) = rref(&rational_rows(rows));
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<BigRational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    let (canon, _) = rref(&basis);
    canon.iter().map(|v| primitive_from_rational(v)).collect()
}

/// Solves `A x = b` over the rationals, returning one solution if any exists.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let augmented: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&augmented);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Divides an integer vector by the gcd of its entries. The zero vector is
/// returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators and returns the primitive integer vector on the same
/// ray as `v`.
pub fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    primitive(&scaled)
}

/// A Z-basis of the integer kernel `{x in Z^n : M x = 0}`, as the columns of
/// the returned matrix.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = (0..m.rows().min(m.cols()))
        .take_while(|&i| !snf.s.get(i, i).is_zero())
        .count();
    let cols: Vec<Vec<BigInt>> = (r..m.cols()).map(|j| snf.v.column(j)).collect();
    IntMatrix::from_columns(m.cols(), &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ints;

    #[test]
    fn determinant_small_cases() {
        assert_eq!(IntMatrix::identity(3).determinant(), BigInt::one());
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-8));
        let m = IntMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
        let sing = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(sing.determinant().is_zero());
    }

    #[test]
    fn kernel_of_incidence_matrix() {
        // two vertices, two arrows each way
        let m = IntMatrix::from_i64(&[&[-1, -1, 1, 1], &[1, 1, -1, -1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 3);
        assert!(m.mul(&k).is_zero());
        // saturated: the kernel basis extends to a unimodular matrix, so its
        // maximal minors have gcd 1; check via Smith form of k
        let s = smith_normal_form(&k);
        for i in 0..3 {
            assert_eq!(s.s.get(i, i), &BigInt::one());
        }
    }

    #[test]
    fn nullspace_is_canonical() {
        let a = vec![ints(&[1, 1, 0])];
        let b = vec![ints(&[2, 2, 0])];
        assert_eq!(rational_nullspace(&a, 3), rational_nullspace(&b, 3));
        assert_eq!(rational_nullspace(&a, 3).len(), 2);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let r = |x: i64| BigRational::from_integer(BigInt::from(x));
        let a = vec![vec![r(1), r(1)], vec![r(1), r(-1)]];
        let x = solve_rational(&a, &[r(3), r(1)]).unwrap();
        assert_eq!(x, vec![r(2), r(1)]);
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        assert!(solve_rational(&a, &[r(1), r(3)]).is_none());
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive(&ints(&[4, -6, 0])), ints(&[2, -3, 0]));
        assert_eq!(primitive(&ints(&[0, 0])), ints(&[0, 0]));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let third = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert_eq!(primitive_from_rational(&[half, third]), ints(&[3, -2]));
    }
}
