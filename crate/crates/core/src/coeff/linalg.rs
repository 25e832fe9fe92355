//! Dense linear algebra over the coefficient field.

use super::{Coeff, CoeffError};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Coeff::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coeff::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coeff>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let data: Vec<Coeff> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), n * cols, "ragged matrix rows");
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Coeff {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Coeff] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form, scanning pivot columns in the
    /// given order. Returns the pivot column of each nonzero row.
    pub fn rref_with_order(&mut self, column_order: &[usize]) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for &col in column_order {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            for c in 0..self.cols {
                let v = self.get(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let pc = self.get(row, c);
                    if pc.is_zero() {
                        continue;
                    }
                    let v = self.get(r, c).sub(&f.mul(pc));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_with_order(&order)
    }

    pub fn inverse(&self) -> Result<Matrix, CoeffError> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Coeff::one());
        }
        let order: Vec<usize> = (0..n).collect();
        let pivots = aug.rref_with_order(&order);
        if pivots.len() < n {
            return Err(CoeffError::DivisionByZero);
        }
        let mut out = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Coeff::zero();
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        out
    }
}

/// Solves `a * x = b`. Returns one solution (free variables set to zero),
/// or `None` when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &[Coeff]) -> Option<Vec<Coeff>> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut aug = Matrix::zeros(a.rows(), n + 1);
    for (r, rhs) in b.iter().enumerate() {
        for c in 0..n {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, n, rhs.clone());
    }
    let order: Vec<usize> = (0..n).collect();
    let pivots = aug.rref_with_order(&order);
    for r in pivots.len()..aug.rows() {
        if !aug.get(r, n).is_zero() {
            return None;
        }
    }
    let mut x = vec![Coeff::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, n).clone();
    }
    Some(x)
}
