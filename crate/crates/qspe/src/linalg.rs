//! Small dense and tridiagonal solvers. Matrices here are at most a few
//! hundred rows, so Gaussian elimination is all that is needed.

use crate::error::{QspeError, Result};
use crate::scalar::Real;

/// Solves a tridiagonal system by the Thomas algorithm.
/// `lower[i]` multiplies `x[i]` in row `i+1`, `upper[i]` multiplies `x[i+1]` in row `i`.
pub fn thomas_solve<T: Real>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Vec<T> {
    let n = diag.len();
    assert!(rhs.len() == n && lower.len() + 1 == n.max(1) && upper.len() + 1 == n.max(1));
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    for i in 0..n {
        let a = if i > 0 { lower[i - 1] } else { T::zero() };
        let prev_c = if i > 0 { c[i - 1] } else { T::zero() };
        let prev_d = if i > 0 { d[i - 1] } else { T::zero() };
        let m = diag[i] - a * prev_c;
        if i + 1 < n {
            c[i] = upper[i] / m;
        }
        d[i] = (rhs[i] - a * prev_d) / m;
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        let next = x[i + 1];
        x[i] = x[i] - c[i] * next;
    }
    x
}

/// `𝔇⁻¹ 𝟙` for the n×n discrete Laplacian `tridiag(−1, 2, −1)`.
pub fn laplacian_solve<T: Real>(rhs: &[T]) -> Vec<T> {
    let n = rhs.len();
    let off = vec![-T::one(); n.saturating_sub(1)];
    let diag = vec![T::lit(2.0); n];
    thomas_solve(&off, &diag, &off, rhs)
}

/// Convex weights `μ = 𝔇⁻¹𝟙 / (𝟙ᵀ𝔇⁻¹𝟙)` of the Laplacian-weighted average.
pub fn laplacian_weights<T: Real>(n: usize) -> Vec<T> {
    let w = laplacian_solve(&vec![T::one(); n]);
    let total = w.iter().fold(T::zero(), |a, &b| a + b);
    w.into_iter().map(|v| v / total).collect()
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, data: rows.iter().flatten().copied().collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.n).map(|i| (0..self.n).fold(T::zero(), |a, j| a + self.get(i, j) * v[j])).collect()
    }

    pub fn norm1(&self) -> T {
        (0..self.n).map(|j| (0..self.n).fold(T::zero(), |a, i| a + self.get(i, j).abs())).fold(T::zero(), T::max)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu<T>> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, max) = (k..n).map(|i| (i, a[i * n + k].abs())).fold((k, T::zero()), |b, c| if c.1 > b.1 { c } else { b });
            if max == T::zero() {
                return Err(QspeError::IllConditioned { condition: f64::INFINITY });
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            for i in k + 1..n {
                let f = a[i * n + k] / a[k * n + k];
                a[i * n + k] = f;
                for j in k + 1..n {
                    a[i * n + j] = a[i * n + j] - f * a[k * n + j];
                }
            }
        }
        Ok(Lu { n, a, perm })
    }
}

/// Packed LU factors.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    n: usize,
    a: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] = x[i] - self.a[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] = x[i] - self.a[i * n + j] * x[j];
            }
            x[i] = x[i] / self.a[i * n + i];
        }
        x
    }

    /// Columns of the inverse; only used for small matrices.
    pub fn inverse(&self) -> Matrix<T> {
        let n = self.n;
        let mut inv = Matrix::zeros(n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            for (i, v) in self.solve(&e).into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        inv
    }
}

/// One-norm condition number, computed from the explicit inverse.
pub fn condition_number<T: Real>(m: &Matrix<T>) -> Result<(Lu<T>, T)> {
    let lu = m.lu()?;
    let inv = lu.inverse();
    let k = m.norm1() * inv.norm1();
    if !k.is_finite() {
        return Err(QspeError::IllConditioned { condition: f64::INFINITY });
    }
    Ok((lu, k))
}
