//! Dense integer matrices and Smith normal form with unimodular transforms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("expected {expected} entries for the given shape, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("cannot multiply a {0}x{1} matrix by a {2}x{3} matrix")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("determinant needs a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),
}

/// Row-major matrix over the integers with exact arithmetic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, MatrixError> {
        let expected = rows * cols;
        if entries.len() != expected {
            return Err(MatrixError::EntryCount { expected, found: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from rows; `cols` is needed for the zero-row case.
    pub fn from_rows<T>(cols: usize, rows: &[Vec<T>]) -> Result<Self, MatrixError>
    where
        T: Clone + Into<BigInt>,
    {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::RaggedRow { row: i, expected: cols, found: row.len() });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(Self { rows: rows.len(), cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Clone + Into<BigInt>>(rows: usize, cols: usize, diag: &[T]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.entries[i * cols + i] = d.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.cols + col]
    }

    fn at(&mut self, row: usize, col: usize) -> &mut BigInt {
        &mut self.entries[row * self.cols + col]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.at(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at(j, i) = self.get(i, j).clone();
            }
        }
        out
    }

    /// Fraction-free Bareiss elimination; exact for every size.
    pub fn determinant(&self) -> Result<BigInt, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    *m.at(i, j) = v;
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += k * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(source, j) * k;
            if !v.is_zero() {
                *self.at(target, j) += v;
            }
        }
    }

    /// col[target] += k * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, source) * k;
            if !v.is_zero() {
                *self.at(i, target) += v;
            }
        }
    }

    fn negate_row(&mut self, row: usize) {
        for j in 0..self.cols {
            let v = self.at(row, j);
            *v = -core::mem::take(v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// `u * a * v = s` with `u`, `v` unimodular and `s` in Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The `min(rows, cols)` diagonal entries of `s`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s.get(i, i).clone()).collect()
    }
}

/// Smith normal form by gcd-driven elimination: the pivot is always an entry
/// of least absolute value, so intermediate entries stay small.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&s, (t..m).flat_map(|i| (t..n).map(move |j| (i, j)))) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -s.get(i, t).div_floor(s.get(t, t));
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -s.get(t, j).div_floor(s.get(t, t));
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                // a nonzero remainder is smaller than the pivot: promote it
                let cross = (t + 1..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                if let Some((pi, pj)) = min_abs_entry(&s, cross) {
                    if s.get(pi, pj).abs() < s.get(t, t).abs() {
                        s.swap_rows(t, pi);
                        u.swap_rows(t, pi);
                        s.swap_cols(t, pj);
                        v.swap_cols(t, pj);
                    }
                }
                continue;
            }
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s.get(i, j).is_multiple_of(s.get(t, t)));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
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
    SnfResult { u, s, v }
}

fn min_abs_entry(s: &IntMatrix, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    cells.filter(|&(i, j)| !s.get(i, j).is_zero()).min_by(|&(a, b), &(c, d)| s.get(a, b).abs().cmp(&s.get(c, d).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows).unwrap()
    }

    fn check(a: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        assert_eq!(r.u.mul(a).unwrap().mul(&r.v).unwrap(), r.s, "u*a*v != s for {a:?}");
        assert!(r.u.is_unimodular() && r.v.is_unimodular());
        let diag = r.diagonal();
        for (k, w) in diag.windows(2).enumerate() {
            assert!(!w[0].is_negative(), "negative diagonal at {k}");
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{} does not divide {}", w[0], w[1]);
            } else {
                assert!(diag[k + 1..].iter().all(Zero::is_zero));
            }
        }
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                if i != j {
                    assert!(r.s.get(i, j).is_zero());
                }
            }
        }
        r
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the form is diag(2, 4)
        let r = check(&mat(2, &[vec![2, 4], vec![6, 8]]));
        assert_eq!(r.s, IntMatrix::diagonal(2, 2, &[2, 4]));
    }

    #[test]
    fn identity_and_zero() {
        let id = IntMatrix::identity(4);
        assert_eq!(check(&id).s, id);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(check(&z).s, z);
        let empty = IntMatrix::zeros(0, 3);
        assert_eq!(check(&empty).s, empty);
    }

    #[test]
    fn needs_divisibility_fix() {
        let r = check(&mat(2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(r.s, IntMatrix::diagonal(2, 2, &[1, 6]));
    }

    #[test]
    fn rectangular_and_negative() {
        check(&mat(3, &[vec![-4, 6, 10], vec![8, -12, 14]]));
        check(&mat(2, &[vec![0, 0], vec![0, -7], vec![3, 5]]));
    }

    #[test]
    fn determinant_values() {
        assert_eq!(mat(2, &[vec![2, 4], vec![6, 8]]).determinant().unwrap(), BigInt::from(-8));
        assert_eq!(mat(3, &[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).determinant().unwrap(), BigInt::from(-2));
        assert!(mat(2, &[vec![1, 2]]).determinant().is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(IntMatrix::new(2, 2, vec![BigInt::one()]).is_err());
        assert!(IntMatrix::from_rows(2, &[vec![1, 2], vec![3]]).is_err());
        let a = IntMatrix::zeros(2, 3);
        assert!(a.mul(&a).is_err());
    }
}
