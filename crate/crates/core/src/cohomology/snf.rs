use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, its nonzero
/// entries positive and forming a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Nonzero diagonal entries of `d`, in order.
    pub divisors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Elementary divisors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.divisors.iter().filter(|d| !num_traits::One::is_one(*d))
    }

    /// Columns of `v` spanning the kernel of the original matrix.
    pub fn kernel_basis(&self) -> IntegerMatrix {
        self.v.columns(self.rank()..self.v.cols())
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// `row_i -= q * row_j`.
    fn sub_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let (src, dst) = pick(m, j, i);
            for (d, s) in dst.iter_mut().zip(src) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
        }
    }

    /// `col_i -= q * col_j`.
    fn sub_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            if !row[j].is_zero() {
                let t = q * &row[j];
                row[i] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -std::mem::take(x);
        }
    }
}

/// Mutable row `dst` and shared row `src` of the same matrix.
fn pick(m: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn dense_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect()
}

/// Smallest nonzero entry (by absolute value) of the lower-right block at `t`.
fn min_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form over the integers with arbitrary-precision entries.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work { a: m.to_dense(), u: dense_identity(rows), v: dense_identity(cols) };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_entry(&w.a, t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = &w.a[i][t] / &w.a[t][t];
                    w.sub_row(i, t, &q);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = &w.a[t][j] / &w.a[t][t];
                    w.sub_col(j, t, &q);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                // A remainder smaller than the pivot appeared; make it the pivot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&w.a[i][j] % &w.a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into the pivot row.
                    w.sub_row(t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let divisors: Vec<BigInt> = (0..t).map(|i| w.a[i][i].clone()).collect();
    SmithForm {
        u: IntegerMatrix::from_dense(rows, rows, w.u),
        d: IntegerMatrix::from_dense(rows, cols, w.a),
        v: IntegerMatrix::from_dense(cols, cols, w.v),
        divisors,
    }
}

/// Rank over the rationals.
pub fn rank(m: &IntegerMatrix) -> usize {
    if m.is_zero() {
        0
    } else {
        smith_normal_form(m).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.determinant().abs() == BigInt::from(1));
        assert!(s.v.determinant().abs() == BigInt::from(1));
        s
    }

    #[test]
    fn small_examples() {
        let s = check(&IntegerMatrix::identity(3));
        assert_eq!(s.d, IntegerMatrix::identity(3));

        let s = check(&IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.divisors, vec![BigInt::from(2), BigInt::from(4)]);

        let s = check(&IntegerMatrix::zeros(2, 3));
        assert!(s.d.is_zero() && s.rank() == 0);

        let s = check(&IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn kernel() {
        let m = IntegerMatrix::from_rows(&[vec![1, -1, 0], vec![0, 1, -1]]);
        let s = check(&m);
        let k = s.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }
}
