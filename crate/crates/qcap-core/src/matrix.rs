//! Dense complex matrices, the numerical carrier for states, Kraus operators
//! and Choi matrices. Dimensions in this crate stay at or below 256, so
//! everything is a plain row-major `Vec<Complex64>` with no sparsity.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// Tolerance below which an entry counts as a structural zero when pattern
/// matching (products of exact constructors accumulate noise of this order).
pub const STRUCTURAL_ZERO: f64 = 1e-14;

/// Dense complex matrix with row-major storage.
///
/// Square matrices carry states and Choi blocks; rectangular shapes appear as
/// Kraus operators of channels whose input and output dimensions differ
/// (notably complementary channels, whose output dimension is the Kraus count
/// of the original channel).
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// |i⟩⟨j| in the computational basis of the given dimension.
    pub fn basis_outer(dim: usize, i: usize, j: usize) -> Self {
        assert!(i < dim && j < dim, "basis index out of range");
        let mut m = Self::zeros(dim, dim);
        m.data[i * dim + j] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_diagonal(entries: &[Complex64]) -> Self {
        let dim = entries.len();
        let mut m = Self::zeros(dim, dim);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * dim + i] = e;
        }
        m
    }

    pub fn from_real_diagonal(entries: &[f64]) -> Self {
        let entries: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&entries)
    }

    /// Builds a matrix from a row-major list of entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must match the shape");
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        ComplexMatrix { rows, cols, data }
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

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square(), "dim() on a non-square matrix");
        self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude (max norm).
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance to another matrix of the same shape.
    pub fn max_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_diff requires equal shapes"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// ‖M − M†‖_max, the hermiticity defect of a square matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in 0..=r {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol
    }

    /// Kronecker (tensor) product, `self` as the left factor.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = ComplexMatrix::zeros(rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.norm() == 0.0 {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out.data[(r1 * other.rows + r2) * cols + (c1 * other.cols + c2)] =
                            a * other.get(r2, c2);
                    }
                }
            }
        }
        out
    }

    /// Partial trace over the second tensor factor of a square matrix on
    /// `C^left ⊗ C^right`.
    pub fn partial_trace_right(&self, left: usize, right: usize) -> Result<ComplexMatrix> {
        if !self.is_square() || self.rows != left * right {
            return Err(Error::Shape(format!(
                "partial trace expects a {n}x{n} matrix with n = {left}*{right}",
                n = left * right
            )));
        }
        let mut out = ComplexMatrix::zeros(left, left);
        for i in 0..left {
            for j in 0..left {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..right {
                    s += self.get(i * right + k, j * right + k);
                }
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    /// Checked matrix product that surfaces dimension mismatches as errors
    /// instead of panics.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.norm() == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    /// A ρ A† for a Kraus operator A and a square ρ.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.matmul(rho)?.matmul(&self.dagger())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let v = self.get(r, c);
                write!(f, "{:+.4}{:+.4}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_dagger() {
        let a = ComplexMatrix::from_rows(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(2.0, 0.0)],
        );
        let b = a.dagger();
        assert_eq!(b.get(1, 0), c(0.0, -1.0));
        let p = (&a * &b).trace();
        // tr(A A†) = ‖A‖_F² = 1 + 1 + 4
        assert!((p - c(6.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = i2.kron(&i2);
        assert_eq!(i4.max_diff(&ComplexMatrix::identity(4)), 0.0);
    }

    #[test]
    fn partial_trace_of_kron_factorizes() {
        let a = ComplexMatrix::from_rows(
            2,
            2,
            vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        );
        let b = ComplexMatrix::from_rows(
            2,
            2,
            vec![c(0.4, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.6, 0.0)],
        );
        let ab = a.kron(&b);
        let red = ab.partial_trace_right(2, 2).unwrap();
        // tr(B) = 1, so the reduction recovers A
        assert!(red.max_diff(&a) < 1e-15);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&b).is_err());
    }

    #[test]
    fn hermiticity_defect_detects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        assert!(m.is_hermitian(1e-12));
        m.set(0, 1, c(0.0, 1.0));
        assert!(!m.is_hermitian(1e-12));
    }
}
