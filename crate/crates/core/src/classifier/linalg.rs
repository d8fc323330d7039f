//! Dense symmetric positive definite solves for the small D×D systems of training.

use crate::scalar::Scalar;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] += v;
    }

    pub fn add_diagonal(&mut self, v: T) {
        for i in 0..self.n {
            self.add_to(i, i, v);
        }
    }

    /// `self += scale * x xᵀ`, upper triangle only; call [`Self::symmetrize`] after.
    pub fn rank_one_upper(&mut self, x: &[T], scale: T) {
        let n = self.n;
        for i in 0..n {
            let xi = x[i] * scale;
            if xi == T::zero() {
                continue;
            }
            let row = &mut self.data[i * n..(i + 1) * n];
            for j in i..n {
                row[j] += xi * x[j];
            }
        }
    }

    /// Mirror the upper triangle into the lower one.
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in 0..i {
                self.data[i * self.n + j] = self.data[j * self.n + i];
            }
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        self.data
            .chunks_exact(self.n)
            .map(|row| crate::scalar::dot(row, x))
            .collect()
    }

    /// Solve `self · x = b` by Cholesky factorization. Returns `None` when the
    /// matrix is not (numerically) positive definite.
    pub fn cholesky_solve(&self, b: &[T]) -> Option<Vec<T>> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut l = vec![T::zero(); n * n];
        for j in 0..n {
            let mut diag = self.get(j, j);
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            if !(diag > T::zero()) || !diag.is_finite() {
                return None;
            }
            let ljj = diag.sqrt();
            l[j * n + j] = ljj;
            for i in j + 1..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        // L y = b
        let mut y = vec![T::zero(); n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        // Lᵀ x = y
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        Some(x)
    }
}
