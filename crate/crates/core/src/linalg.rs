//! Dense complex matrices.
//!
//! Every matrix-valued object in the crate (defining generators, adjoint
//! `F`/`D` matrices, identities) lives in a [`CMatrix`]. Storage is
//! row-major; the sizes involved are small (at most a few hundred rows), so
//! there is no blocking or sparsity here.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Default relative tolerance for [`CMatrix::approx_eq`].
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: expected a square matrix, got {shape:?}")]
    NotSquare {
        op: &'static str,
        shape: (usize, usize),
    },
    #[error("matrix must have positive dimensions, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("entry count {len} does not match shape {rows}x{cols}")]
    LengthMismatch { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

/// A dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::LengthMismatch {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::LengthMismatch {
                    rows: r,
                    cols: c,
                    len: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_vec(r, c, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// The matrix unit with a single 1 at `(row, col)`.
    pub fn unit(n: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(row, col)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    /// Product without the shape check; callers guarantee compatibility.
    pub(crate) fn mul_unchecked(&self, rhs: &CMatrix) -> CMatrix {
        debug_assert_eq!(self.cols, rhs.rows);
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    fn check_same_square(&self, rhs: &CMatrix, op: &'static str) -> Result<(), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                op,
                shape: self.shape(),
            });
        }
        if self.shape() != rhs.shape() {
            return Err(LinalgError::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(())
    }

    /// `ab - ba`.
    pub fn commutator(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        self.check_same_square(rhs, "commutator")?;
        Ok(&self.mul_unchecked(rhs) - &rhs.mul_unchecked(self))
    }

    /// `ab + ba`.
    pub fn anticommutator(&self, rhs: &CMatrix) -> Result<CMatrix, LinalgError> {
        self.check_same_square(rhs, "anticommutator")?;
        Ok(&self.mul_unchecked(rhs) + &rhs.mul_unchecked(self))
    }

    pub fn trace(&self) -> Result<Complex64, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                op: "trace",
                shape: self.shape(),
            });
        }
        Ok((0..self.rows).map(|i| self.data[i * self.cols + i]).sum())
    }

    /// `Tr(self · rhs)` without forming the product.
    pub fn trace_of_product(&self, rhs: &CMatrix) -> Result<Complex64, LinalgError> {
        if self.cols != rhs.rows || self.rows != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "trace_of_product",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * rhs.data[k * rhs.cols + i];
            }
        }
        Ok(acc)
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: Complex64, other: &CMatrix) {
        assert_eq!(self.shape(), other.shape(), "axpy: shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry difference; shapes must agree.
    pub fn max_abs_diff(&self, other: &CMatrix) -> Result<f64, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::DimensionMismatch {
                op: "max_abs_diff",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Tolerance-based equality: `max|a-b| <= tol * (1 + max(max|a|, max|b|))`.
    /// Differently shaped matrices are never equal.
    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        match self.max_abs_diff(other) {
            Ok(diff) => diff <= tol * (1.0 + self.max_abs().max(other.max_abs())),
            Err(_) => false,
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.dagger(), tol)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

// Elementwise operators panic on shape mismatch; the fallible entry points
// are `matmul`, `commutator`, `anticommutator` and `trace`.
impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add: shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub: shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "add_assign: shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Row-compressed complex matrix for products with very sparse factors
/// such as the adjoint `F^a` and `D^a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMatrix {
    pub fn from_dense(m: &CMatrix) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let rows = (0..m.rows())
            .map(|i| (0..m.cols()).filter(|&j| m[(i, j)] != zero).map(|j| (j, m[(i, j)])).collect())
            .collect();
        SparseMatrix { cols: m.cols(), rows }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `self * rhs`; panics on a shape mismatch.
    pub fn mul_dense(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows(), "sparse-dense shape mismatch");
        let mut out = CMatrix::zeros(self.rows.len(), rhs.cols());
        for (p, row) in self.rows.iter().enumerate() {
            for &(k, v) in row {
                for q in 0..rhs.cols() {
                    out[(p, q)] += v * rhs[(k, q)];
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows.len(), self.cols);
        for (p, row) in self.rows.iter().enumerate() {
            for &(q, v) in row {
                out[(p, q)] = v;
            }
        }
        out
    }

    /// `lhs * self`, skipping zero entries of `lhs`; panics on a shape mismatch.
    pub fn left_mul(&self, lhs: &CMatrix) -> CMatrix {
        assert_eq!(lhs.cols(), self.rows.len(), "dense-sparse shape mismatch");
        let zero = Complex64::new(0.0, 0.0);
        let mut out = CMatrix::zeros(lhs.rows(), self.cols);
        for p in 0..lhs.rows() {
            for (k, row) in self.rows.iter().enumerate() {
                let x = lhs[(p, k)];
                if x != zero {
                    for &(q, v) in row {
                        out[(p, q)] += x * v;
                    }
                }
            }
        }
        out
    }

    /// `self * rhs` written into a row-major `rows x rhs.cols()` buffer.
    pub fn mul_sparse_into(&self, rhs: &SparseMatrix, out: &mut [Complex64]) {
        let width = rhs.cols;
        out.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for (p, row) in self.rows.iter().enumerate() {
            for &(k, v) in row {
                for &(q, w) in &rhs.rows[k] {
                    out[p * width + q] += v * w;
                }
            }
        }
    }

    /// `Tr(self * m)` for a dense `m` of the transposed shape.
    pub fn trace_with(&self, m: &CMatrix) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, row) in self.rows.iter().enumerate() {
            for &(q, v) in row {
                acc += v * m[(q, p)];
            }
        }
        acc
    }
}
