//! Dense complex square matrices in the truncated Fock basis.

mod eigen;
mod svd;

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use svd::Svd;

/// Row-major `dim × dim` complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct OperatorMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![T::one(); dim])
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = Complex::new(*d, T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, data }
    }

    pub fn from_rows(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(Self { dim, data })
    }

    /// `|u⟩⟨v|` scaled by `weight`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>], weight: T) -> Self {
        let dim = u.len();
        Self::from_fn(dim, |i, j| u[i] * v[j].conj() * weight)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, a: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| *z * a).collect() }
    }

    pub fn scale_real(&self, a: T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| *z * a).collect() }
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: Complex<T>, other: &Self) {
        assert_eq!(self.dim, other.dim);
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x = *x + a * *y;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for (o, b) in orow.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o = *o + a * *b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + *a * *b))
            .collect()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for k in 0..n {
                acc = acc + self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Largest entry difference on the leading `m × m` block.
    pub fn block_diff(&self, other: &Self, m: usize) -> T {
        let mut worst = T::zero();
        for i in 0..m {
            for j in 0..m {
                worst = worst.max((self[(i, j)] - other[(i, j)]).norm());
            }
        }
        worst
    }

    /// Share of the squared Frobenius norm carried by rows or columns with
    /// index `≥ dim − k`.
    pub fn top_weight(&self, k: usize) -> T {
        let cut = self.dim.saturating_sub(k);
        let (mut top, mut total) = (T::zero(), T::zero());
        for i in 0..self.dim {
            for j in 0..self.dim {
                let w = self[(i, j)].norm_sqr();
                total = total + w;
                if i >= cut || j >= cut {
                    top = top + w;
                }
            }
        }
        if total == T::zero() {
            T::zero()
        } else {
            top / total
        }
    }

    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn svd(&self) -> Svd<T> {
        svd::jacobi_svd(self)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        eigen::hermitian_eigenvalues(self)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.hermitian_eigenvalues().first().copied().unwrap_or_else(T::zero)
    }
}

impl<T> Index<(usize, usize)> for OperatorMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for OperatorMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn add(self, rhs: Self) -> OperatorMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        OperatorMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect() }
    }
}

impl<T: Real> Sub for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn sub(self, rhs: Self) -> OperatorMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        OperatorMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect() }
    }
}

impl<T: Real> Mul for &OperatorMatrix<T> {
    type Output = OperatorMatrix<T>;
    fn mul(self, rhs: Self) -> OperatorMatrix<T> {
        self.matmul(rhs)
    }
}
