//! Dense matrices over the algebras used by the matrix algorithms.

mod partition;
mod text;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use partition::{crop, partition, BlockPartition};
pub use text::{parse_matrix, write_matrix, TextEntry};

use crate::engine::Words;
use crate::error::{MrcError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algebra {
    Ring,
    Tropical,
    BigRing,
    Complex,
}

impl Algebra {
    pub fn name(self) -> &'static str {
        match self {
            Algebra::Ring => "ring",
            Algebra::Tropical => "tropical",
            Algebra::BigRing => "bigring",
            Algebra::Complex => "complex",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "ring" => Some(Algebra::Ring),
            "tropical" => Some(Algebra::Tropical),
            "bigring" => Some(Algebra::BigRing),
            "complex" => Some(Algebra::Complex),
            _ => None,
        }
    }
}

/// Entry type of a [`Matrix`]: `add` is the semiring sum, `mul` the product.
pub trait Semiring: Clone + PartialEq + Debug + Send + Sync + Words {
    const ALGEBRA: Algebra;
    /// Additive identity, also the padding value.
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

/// Semirings with additive inverses and integer scaling (for bilinear schemes).
pub trait Ring: Semiring {
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, c: i64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Semiring for i64 {
    const ALGEBRA: Algebra = Algebra::Ring;
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Ring for i64 {
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, c: i64) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Semiring for BigInt {
    const ALGEBRA: Algebra = Algebra::BigRing;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Ring for BigInt {
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, c: i64) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Semiring for Complex64 {
    const ALGEBRA: Algebra = Algebra::Complex;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Element of the (min,+) semiring. `Inf` sorts after every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tropical {
    Finite(i64),
    Inf,
}

impl Tropical {
    pub fn finite(self) -> Option<i64> {
        match self {
            Tropical::Finite(v) => Some(v),
            Tropical::Inf => None,
        }
    }

    pub fn is_inf(self) -> bool {
        self == Tropical::Inf
    }
}

impl From<i64> for Tropical {
    fn from(v: i64) -> Self {
        Tropical::Finite(v)
    }
}

impl Words for Tropical {
    fn words(&self) -> u64 {
        1
    }
}

impl Semiring for Tropical {
    const ALGEBRA: Algebra = Algebra::Tropical;
    fn zero() -> Self {
        Tropical::Inf
    }
    fn one() -> Self {
        Tropical::Finite(0)
    }
    fn add(&self, other: &Self) -> Self {
        (*self).min(*other)
    }
    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Tropical::Finite(a), Tropical::Finite(b)) => Tropical::Finite(a + b),
            _ => Tropical::Inf,
        }
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Name used by the file format and reports.
pub type SemiringMatrix<T> = Matrix<T>;

impl<T: Words> Words for Matrix<T> {
    fn words(&self) -> u64 {
        self.data.iter().map(Words::words).sum()
    }
}

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(MrcError::DimensionError(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MrcError::DimensionError("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Submatrix of the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// `h x w` window starting at `(r0, c0)`; cells outside are `pad`.
    pub fn window(&self, r0: usize, c0: usize, h: usize, w: usize, pad: &T) -> Self {
        Matrix::from_fn(h, w, |i, j| {
            let (r, c) = (r0 + i, c0 + j);
            if r < self.rows && c < self.cols {
                self.get(r, c).clone()
            } else {
                pad.clone()
            }
        })
    }
}

impl<T: Semiring> Matrix<T> {
    pub fn algebra(&self) -> Algebra {
        T::ALGEBRA
    }

    /// Matrix of additive identities.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, T::zero())
    }

    /// Multiplicative identity of the algebra (0 diagonal, ∞ elsewhere for Tropical).
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Entrywise semiring sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MrcError::DimensionError("shape mismatch in add".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }
}
