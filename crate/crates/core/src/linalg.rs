//! Dense matrices over a [`Scalar`] with Gaussian elimination.
//!
//! On the rational backend rank and nullspace are exact. On the float
//! backends a pivot counts as zero when it is below `TAU` times the largest
//! entry of the matrix.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Scalar, TAU};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Row-major data; panics if the length is not `rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        let cols = columns.len();
        Self::from_fn(rows, cols, |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_major(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// Zero up to the backend's test with the given scale.
    pub fn is_negligible(&self, scale: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(scale))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let tol = pivot_tolerance::<S>(self.max_abs());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.choose_pivot(r, c, tol) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = S::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    m.eliminate(i, r, &f, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        if !S::is_exact() {
            for x in &mut m.data {
                if x.magnitude() <= tol {
                    *x = S::zero();
                }
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let tol = pivot_tolerance::<S>(self.max_abs());
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.choose_pivot(r, c, tol) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = S::one() / m[(r, c)].clone();
            for i in r + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone() * inv.clone();
                    m.eliminate(i, r, &f, c);
                }
            }
            r += 1;
        }
        r
    }

    /// A basis of `{x : M x = 0}`, one vector per free column, each with a
    /// unit entry in its free column.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `M x = b` for square invertible `M`.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Self::from_fn(n, n + 1, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some((0..n).map(|i| r[(i, n)].clone()).collect())
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    fn choose_pivot(&self, start: usize, c: usize, tol: f64) -> Option<usize> {
        if S::is_exact() {
            (start..self.rows).find(|&i| !self[(i, c)].is_zero())
        } else {
            let (best, mag) = (start..self.rows)
                .map(|i| (i, self[(i, c)].magnitude()))
                .fold((start, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            (mag > tol).then_some(best)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row_i -= f * row_r`, starting at column `from`.
    fn eliminate(&mut self, i: usize, r: usize, f: &S, from: usize) {
        for j in from..self.cols {
            let rj = &self.data[r * self.cols + j];
            if rj.is_zero() {
                continue;
            }
            let v = self.data[i * self.cols + j].clone() - f.clone() * rj.clone();
            self.data[i * self.cols + j] = v;
        }
    }
}

fn pivot_tolerance<S: Scalar>(scale: f64) -> f64 {
    if S::is_exact() {
        0.0
    } else {
        TAU * scale.max(1.0)
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Matrix::<S>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x.clone()).collect(),
        }
    }
}

/// Row space built one row at a time, kept in echelon form so that each new
/// row is reduced against the pivots seen so far.
#[derive(Debug, Clone)]
pub struct Echelon<S> {
    cols: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Reduces `row` and keeps it when independent; returns whether the
    /// rank grew.
    pub fn insert(&mut self, mut row: Vec<S>) -> bool {
        assert_eq!(row.len(), self.cols);
        let scale = row.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
        for (p, r) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let f = row[*p].clone();
            for j in 0..self.cols {
                if !r[j].is_zero() {
                    row[j] = row[j].clone() - f.clone() * r[j].clone();
                }
            }
        }
        let tol = pivot_tolerance::<S>(scale);
        let pivot = if S::is_exact() {
            row.iter().position(|x| !x.is_zero())
        } else {
            row.iter()
                .enumerate()
                .filter(|(_, x)| x.magnitude() > tol)
                .max_by(|a, b| a.1.magnitude().total_cmp(&b.1.magnitude()))
                .map(|(i, _)| i)
        };
        let Some(p) = pivot else {
            return false;
        };
        let inv = S::one() / row[p].clone();
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        // keep earlier rows reduced in the new pivot column
        for (_, r) in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for j in 0..self.cols {
                if !row[j].is_zero() {
                    r[j] = r[j].clone() - f.clone() * row[j].clone();
                }
            }
        }
        self.rows.push((p, row));
        true
    }
}
