//! Dense exact matrices over the rationals: row reduction, kernels, solving.
//!
//! Everything downstream (kernels, cokernels, cohomology, resolution steps)
//! reduces to these primitives. Pivoting is by column order on the first
//! nonzero entry, so all echelon forms and the bases derived from them are
//! canonical for a given input.

use num_traits::{One, Signed, Zero};

use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = QMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        QMat::from_fn(r, c, |i, j| Scalar::from_integer(rows[i][j].into()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Scalar]) {
        assert_eq!(col.len(), self.rows);
        for (i, v) in col.iter().enumerate() {
            self[(i, j)] = v.clone();
        }
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let add = a * b;
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> QMat {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= c;
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.rows, other.rows);
        QMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Reduced row echelon form; returns the pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = {
                let v = self[(r, c)].clone();
                Scalar::one() / v
            };
            for j in c..self.cols {
                let v = self[(r, j)].clone() * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = self[(i, j)].clone() - &f * &self[(r, j)];
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Canonical kernel basis (columns), via free variables of the RREF.
    pub fn kernel_basis(&self) -> QMat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = QMat::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = Scalar::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = -m[(pr, fc)].clone();
            }
        }
        out
    }

    /// Solve `self * X = rhs` exactly. `None` when inconsistent. When the
    /// solution is not unique, free variables are set to zero (canonical).
    pub fn solve(&self, rhs: &QMat) -> Option<QMat> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = self.hstack(rhs);
        let pivots = aug.rref();
        // any pivot in the rhs block means inconsistency
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = QMat::zeros(self.cols, rhs.cols);
        for (pr, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = aug[(pr, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Echelon basis of the column space together with the pivot row
    /// positions: RREF of the transpose, transposed back. The pivot rows are
    /// the coordinates "led" by the basis; standard basis vectors at the
    /// remaining coordinates form the canonical complement.
    pub fn column_space(&self) -> (QMat, Vec<usize>) {
        let mut t = self.transpose();
        let pivots = t.rref();
        let rank = pivots.len();
        let basis = QMat::from_fn(self.rows, rank, |i, j| t[(j, i)].clone());
        (basis, pivots)
    }

    /// Pretty printer for reports and debugging.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format_scalar(&self[(i, j)]))
                .collect();
            s.push_str(&format!("[{}]\n", row.join(", ")));
        }
        s
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else if x.is_negative() {
        format!("-{}/{}", x.numer().magnitude(), x.denom())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().ok()?;
        let d: num_bigint::BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Scalar::new(n, d))
    } else {
        let n: num_bigint::BigInt = s.parse().ok()?;
        Some(Scalar::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_integer(n.into())
    }

    #[test]
    fn rref_and_rank() {
        let m = QMat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let id = QMat::identity(3);
        assert_eq!(id.rank(), 3);
    }

    #[test]
    fn kernel_is_killed_and_has_right_dim() {
        let m = QMat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // canonical: free column scaled to 1
        assert_eq!(k[(2, 0)], q(1));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMat::from_int_rows(&[&[2, 0], &[0, 3]]);
        let rhs = QMat::from_int_rows(&[&[4], &[9]]);
        let x = m.solve(&rhs).unwrap();
        assert_eq!(x[(0, 0)], q(2));
        assert_eq!(x[(1, 0)], q(3));
        let bad = QMat::from_int_rows(&[&[1, 1], &[1, 1]]);
        let rhs = QMat::from_int_rows(&[&[1], &[2]]);
        assert!(bad.solve(&rhs).is_none());
    }

    #[test]
    fn column_space_complement_coordinates() {
        let m = QMat::from_int_rows(&[&[0, 0], &[1, 2], &[0, 0], &[3, 6]]);
        let (basis, pivot_rows) = m.column_space();
        assert_eq!(basis.cols(), 1);
        assert_eq!(pivot_rows, vec![1]);
        assert!(basis[(1, 0)].is_one());
    }

    #[test]
    fn scalar_formatting() {
        assert_eq!(format_scalar(&q(-3)), "-3");
        assert_eq!(format_scalar(&(q(3) / q(2))), "3/2");
        assert_eq!(format_scalar(&(q(-3) / q(2))), "-3/2");
        assert_eq!(parse_scalar("-3/2"), Some(q(-3) / q(2)));
        assert_eq!(parse_scalar("7"), Some(q(7)));
        assert!(parse_scalar("1/0").is_none());
    }
}
