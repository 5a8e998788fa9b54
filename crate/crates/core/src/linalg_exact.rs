//! Dense matrices over the Gaussian integers.
//!
//! Every weight matrix produced by this crate has entries in `{0, ±1, ±i}`,
//! so all algebraic identities (unitarity, anticommutation, commutation) are
//! checked by exact equality rather than with a floating tolerance.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// Squared modulus `re² + im²`.
    pub fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.re * rhs.re - self.im * rhs.im, self.re * rhs.im + self.im * rhs.re)
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        Self::new(re, 0)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}{im}i"),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

/// Row-major dense matrix of Gaussian integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianInt>,
}

impl GaussianMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![GaussianInt::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar_identity(n, GaussianInt::ONE)
    }

    /// `value · I_n`.
    pub fn scalar_identity(n: usize, value: GaussianInt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = value;
        }
        m
    }

    pub fn diagonal(diag: &[GaussianInt]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<GaussianInt>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from rows of `(re, im)` pairs.
    pub fn from_pairs(rows: &[Vec<(i64, i64)>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::RaggedRows);
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&(re, im)| GaussianInt::new(re, im))
            .collect();
        Self::from_entries(r, c, entries)
    }

    /// Builds a real integer matrix; handy in tests and fixtures.
    pub fn from_real(rows: &[&[i64]]) -> Result<Self> {
        let pairs: Vec<Vec<(i64, i64)>> = rows.iter().map(|row| row.iter().map(|&v| (v, 0)).collect()).collect();
        Self::from_pairs(&pairs)
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

    pub fn get(&self, row: usize, col: usize) -> GaussianInt {
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: GaussianInt) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[GaussianInt] {
        &self.entries
    }

    pub fn row_pairs(&self) -> Vec<Vec<(i64, i64)>> {
        self.entries
            .chunks(self.cols)
            .map(|row| row.iter().map(|z| (z.re, z.im)).collect())
            .collect()
    }

    /// Exact product `self · rhs`.
    pub fn mat_mul(&self, rhs: &GaussianMatrix) -> Result<GaussianMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.entries[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                // weight matrices are generalized permutations, so most terms vanish
                if a.is_zero() {
                    continue;
                }
                let rhs_row = &rhs.entries[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product of two matrices already known to be compatible.
    ///
    /// Panics on a dimension mismatch; internal callers only use it for
    /// square matrices of one common size.
    pub(crate) fn mul_square(&self, rhs: &GaussianMatrix) -> GaussianMatrix {
        self.mat_mul(rhs).expect("square matrices of equal size")
    }

    pub fn conj_transpose(&self) -> GaussianMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j].conj();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &GaussianMatrix) -> GaussianMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.entries[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &GaussianMatrix) -> Result<GaussianMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| a + b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: GaussianInt) -> GaussianMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn neg(&self) -> GaussianMatrix {
        self.scale(GaussianInt::new(-1, 0))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar_identity(GaussianInt::ONE)
    }

    /// True when `self == value · I`.
    pub fn is_scalar_identity(&self, value: GaussianInt) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let expected = if i == j { value } else { GaussianInt::ZERO };
                    self.get(i, j) == expected
                })
            })
    }

    /// `A·Aᴴ = I`, checked exactly.
    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.mul_square(&self.conj_transpose()).is_identity()
    }

    /// True when every entry lies in `{0, ±1, ±i}`.
    pub fn has_unit_entries(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.norm_sqr() <= 1 && (z.re == 0 || z.im == 0))
    }
}

impl fmt::Display for GaussianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.cols) {
            let cells: Vec<String> = row.iter().map(|z| format!("{z:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
