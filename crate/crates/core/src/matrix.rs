//! Dense row-major matrices over a [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use thiserror::Error;

use crate::scalar::{ExactComplex, Field, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("ragged rows: row {row} has {actual} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from dynamically tagged scalars; every entry must
    /// belong to the backend of `F`.
    pub fn from_scalars(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinalgError> {
        let data = data
            .into_iter()
            .map(F::from_scalar)
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::new(rows, cols, data)
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(height * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: width,
                    actual: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: height,
            cols: width,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Row vector with a single 1 at `index`.
    pub fn basis_row(n: usize, index: usize) -> Self {
        let mut m = Matrix::zeros(1, n);
        m[(0, index)] = F::one();
        m
    }

    /// Column vector with a single 1 at `index`.
    pub fn basis_column(n: usize, index: usize) -> Self {
        let mut m = Matrix::zeros(n, 1);
        m[(index, 0)] = F::one();
        m
    }

    pub fn diagonal(entries: Vec<F>) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
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

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(F::conj)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn checked_mul(&self, rhs: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
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
                    let idx = i * rhs.cols + j;
                    let prod = a.clone() * b;
                    out.data[idx] = std::mem::replace(&mut out.data[idx], F::zero()) + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        self.same_shape(rhs)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, rhs: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        self.same_shape(rhs)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        })
    }

    fn same_shape(&self, rhs: &Matrix<F>) -> Result<(), LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.clone() * c)
    }

    /// Block-diagonal `[[A, 0], [0, B]]`.
    pub fn direct_sum(&self, other: &Matrix<F>) -> Self {
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Kronecker product; entry `((i·k + p), (j·l + q))` is `A[i][j]·B[p][q]`.
    pub fn kron(&self, other: &Matrix<F>) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(i * other.rows + p, j * other.cols + q)] = a.clone() * &other[(p, q)];
                    }
                }
            }
        }
        out
    }

    /// Row-major flattening into a `1 x (rows·cols)` row vector.
    pub fn vectorize(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Dimension(format!(
                "vectorize expects a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(Matrix {
            rows: 1,
            cols: self.data.len(),
            data: self.data.clone(),
        })
    }

    /// Squared Euclidean norm of all entries.
    pub fn norm_sq(&self) -> F::Real {
        self.data
            .iter()
            .fold(<F::Real as crate::scalar::RealScalar>::zero(), |acc, x| {
                acc + x.norm_sq()
            })
    }

    pub fn approx_eq(&self, other: &Matrix<F>, eps: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.approx_eq(b, eps))
    }

    pub fn is_identity(&self, eps: f64) -> bool {
        self.is_square() && self.approx_eq(&Matrix::identity(self.rows), eps)
    }

    /// `A·A† = I`.
    pub fn is_unitary(&self, eps: f64) -> bool {
        self.is_square() && (self * &self.adjoint()).is_identity(eps)
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), eps)
    }

    pub fn to_float(&self) -> Matrix<Complex64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(F::to_complex64).collect(),
        }
    }

    pub fn to_scalars(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().cloned().map(F::into_scalar).collect())
            .collect()
    }
}

/// A real entry `p/q + (r/s)√2` written as `((p, q), (r, s))`.
pub type RealRatios = ((i64, i64), (i64, i64));

impl Matrix<ExactComplex> {
    /// Shorthand for tests and built-in machines.
    pub fn exact_real(rows: Vec<Vec<RealRatios>>) -> Self {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|(a, b)| ExactComplex::from_ratios(a, b))
                        .collect()
                })
                .collect(),
        )
        .expect("rectangular literal")
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on non-conformable operands; use [`Matrix::checked_mul`] otherwise.
impl<'b, F: Field> Mul<&'b Matrix<F>> for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &'b Matrix<F>) -> Matrix<F> {
        match self.checked_mul(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
