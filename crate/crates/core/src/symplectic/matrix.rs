//! Small dense matrices over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::scalar::{format_rational, parse_rational, Scalar};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn scalar(n: usize, c: T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diag(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| T::from_i64(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Entrywise comparison up to the scalar tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b))
    }

    /// Whether every entry is within tolerance of zero.
    pub fn approx_zero(&self) -> bool {
        let z = T::zero();
        self.data.iter().all(|x| x.approx_eq(&z))
    }

    /// The `h x w` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let mut b = Self::zeros(h, w);
        for i in 0..h {
            for j in 0..w {
                b[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Assembles a block matrix; every block in a block-row shares a height
    /// and every block in a block-column shares a width.
    pub fn from_blocks(blocks: &[Vec<Self>]) -> Self {
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let mut m = Self::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in brow.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (heights[bi], widths[bj]), "block shape mismatch");
                m.set_block(r0, c0, b);
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        m
    }

    /// Gaussian elimination; returns the row-echelon copy, the pivot
    /// columns and the sign of the row permutation.
    fn eliminate(&self) -> (Self, Vec<usize>, bool) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut flip = false;
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            // Largest magnitude pivot; for exact scalars any nonzero entry would do.
            let best = (row..a.rows)
                .filter(|&i| !a[(i, col)].is_zero())
                .max_by(|&i, &j| a[(i, col)].abs_f64().total_cmp(&a[(j, col)].abs_f64()));
            let Some(p) = best else { continue };
            if p != row {
                for j in 0..a.cols {
                    a.data.swap(p * a.cols + j, row * a.cols + j);
                }
                flip = !flip;
            }
            let inv = T::one() / a[(row, col)].clone();
            for i in row + 1..a.rows {
                let f = a[(i, col)].clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..a.cols {
                    let v = a[(i, j)].clone() - f.clone() * a[(row, j)].clone();
                    a[(i, j)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots, flip)
    }

    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        let (a, pivots, flip) = self.eliminate();
        if pivots.len() < self.rows {
            return T::zero();
        }
        let mut d = (0..self.rows).fold(T::one(), |acc, i| acc * a[(i, i)].clone());
        if flip {
            d = -d;
        }
        d
    }

    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let aug = Self::from_blocks(&[vec![self.clone(), Self::identity(n)]]);
        let (mut a, pivots, _) = aug.eliminate();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        for i in (0..n).rev() {
            let inv = T::one() / a[(i, i)].clone();
            for j in 0..2 * n {
                a[(i, j)] = a[(i, j)].clone() * inv.clone();
            }
            for k in 0..i {
                let f = a[(k, i)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..2 * n {
                    let v = a[(k, j)].clone() - f.clone() * a[(i, j)].clone();
                    a[(k, j)] = v;
                }
            }
        }
        Some(a.block(0, n, n, n))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T: Scalar> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: Scalar> Mul for Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Matrix<T>) -> Matrix<T> {
        &self * &rhs
    }
}

impl<'a, T: Scalar> Add<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<'a, T: Scalar> Sub<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        self + &(-rhs.clone())
    }
}

impl<T: Scalar> Neg for Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.into_iter().map(|x| -x).collect() }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// JSON form of a rational matrix: row-major `"num/den"` strings plus the
/// half-size `n` (for a `2n x 2n` matrix).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

impl From<&Matrix<Rational>> for MatrixJson {
    fn from(m: &Matrix<Rational>) -> Self {
        MatrixJson {
            n: m.rows / 2,
            rows: m.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for Matrix<Rational> {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = j
            .rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let size = 2 * j.n;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Parse(format!("expected a {size}x{size} matrix")));
        }
        Ok(Matrix::from_rows(rows))
    }
}

impl Serialize for Matrix<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        Matrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};

    type Q = Matrix<Rational>;

    #[test]
    fn determinant_and_inverse() {
        let m = Q::from_i64_rows(&[&[0, 2, 1], &[1, 1, 0], &[3, 0, 1]]);
        assert_eq!(m.det(), int(-5));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Q::identity(3));
        let singular = Q::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), int(0));
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn float_instance_agrees() {
        let m = Matrix::<f64>::from_i64_rows(&[&[0, 2, 1], &[1, 1, 0], &[3, 0, 1]]);
        assert!((m.det() + 5.0).abs() < 1e-12);
        let m32 = Matrix::<f32>::from_i64_rows(&[&[4, 1], &[2, 3]]);
        assert!((m32.det() - 10.0).abs() < 1e-5);
    }

    #[test]
    fn json_round_trip() {
        let m = Q::from_rows(vec![vec![rat(1, 2), int(0)], vec![int(3), rat(-7, 3)]]);
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["n"], 1);
        assert_eq!(v["rows"][1][1], "-7/3");
        let back: Q = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn blocks() {
        let a = Q::identity(2);
        let z = Q::zeros(2, 1);
        let b = Q::from_blocks(&[vec![a.clone(), z.clone()], vec![z.transpose(), Q::identity(1)]]);
        assert_eq!(b, Q::identity(3));
        assert_eq!(b.block(0, 0, 2, 2), a);
    }
}
