//! Brute-force reference implementations.
//!
//! Nothing in the library calls into this module; it exists so that unit,
//! integration and acceptance tests across the workspace share one set of
//! independent checks (full dense matrices, Gaussian elimination,
//! compensated summation).

use crate::{BandLayout, BandedMatrix, Real, Result};

/// Full row-major `n x n` matrix in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n);
        for i in 0..n {
            a[(i, i)] = 1.0;
        }
        a
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn from_banded<T: Real>(a: &BandedMatrix<T>) -> Self {
        let n = a.order();
        let mut d = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                d[(i, j)] = a.get(i, j).as_f64();
            }
        }
        d
    }

    /// Collects every nonzero diagonal into an `Arbitrary` banded matrix.
    pub fn to_banded<T: Real>(&self) -> Result<BandedMatrix<T>> {
        let n = self.n;
        let mut a = BandedMatrix::new(n, BandLayout::Arbitrary)?;
        for k in -(n as isize - 1)..=(n as isize - 1) {
            let mut band = vec![T::zero(); n];
            let mut any = false;
            for (i, slot) in band.iter_mut().enumerate() {
                let j = i as isize + k;
                if j >= 0 && (j as usize) < n {
                    let v = self[(i, j as usize)];
                    if v != 0.0 {
                        any = true;
                        *slot = T::from_f64(v);
                    }
                }
            }
            if any {
                a.insert_band(k, band)?;
            }
        }
        Ok(a)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let row = &self.entries[i * self.n..(i + 1) * self.n];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Gaussian elimination with partial pivoting. `None` if singular.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut a = self.entries.clone();
        let mut x = b.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[p * n + col].abs().total_cmp(&a[q * n + col].abs()))?;
            if a[pivot * n + col] == 0.0 {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                x.swap(col, pivot);
            }
            for row in col + 1..n {
                let f = a[row * n + col] / a[col * n + col];
                if f != 0.0 {
                    for j in col..n {
                        a[row * n + j] -= f * a[col * n + j];
                    }
                    x[row] -= f * x[col];
                }
            }
        }
        for row in (0..n).rev() {
            let mut s = x[row];
            for j in row + 1..n {
                s -= a[row * n + j] * x[j];
            }
            x[row] = s / a[row * n + row];
        }
        Some(x)
    }

    /// Whether a symmetric matrix admits a Cholesky factorisation.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }

    /// Submatrix on the given rows and columns.
    pub fn select(&self, idx: &[usize]) -> Self {
        let mut s = Self::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                s[(a, b)] = self[(i, j)];
            }
        }
        s
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.n + j]
    }
}

/// Kahan–Babuška (Neumaier) summation in double precision.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Compensated dot product. Products are formed exactly with an FMA split.
pub fn compensated_dot<T: Real>(x: &[T], y: &[T]) -> f64 {
    assert_eq!(x.len(), y.len());
    compensated_sum(x.iter().zip(y).flat_map(|(a, b)| {
        let (a, b) = (a.as_f64(), b.as_f64());
        let p = a * b;
        let e = a.mul_add(b, -p);
        [p, e]
    }))
}
