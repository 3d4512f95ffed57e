use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sparse matrix with exact integer entries.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, dense: Vec<Vec<BigInt>>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in dense.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Nonzero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        IntegerMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (&(k, j), v) in &other.entries {
            by_row[k].push((j, v));
        }
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                let e = out.entries.entry((i, j)).or_default();
                *e += a * b;
            }
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = self.clone();
        out.cols += other.cols;
        for (&(i, j), v) in &other.entries {
            out.entries.insert((i, j + self.cols), v.clone());
        }
        out
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> IntegerMatrix {
        let mut out = IntegerMatrix::zeros(self.rows, range.len());
        for (&(i, j), v) in &self.entries {
            if range.contains(&j) {
                out.entries.insert((i, j - range.start), v.clone());
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            d[i][j] = v.clone();
        }
        d
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_determinants() {
        let a = IntegerMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), IntegerMatrix::from_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.determinant(), BigInt::from(-2));
        assert_eq!(b.determinant(), BigInt::from(-1));
        let c = IntegerMatrix::from_rows(&[vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 4]]);
        // expansion along the second row: -1 * (2*4 - 1*1)
        assert_eq!(c.determinant(), BigInt::from(-7));
        assert_eq!(IntegerMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).determinant(), BigInt::zero());
        assert_eq!(a.transpose().get(0, 1), BigInt::from(3));
        assert_eq!(a.hstack(&b).columns(2..4), b);
    }
}
