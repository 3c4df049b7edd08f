//! Dense complex matrices backing the expectation-level linear algebra:
//! Gauss-Jordan inversion and one-sided Jacobi singular values. Sized for the
//! small expectation and observability matrices that arise here.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "complex matrix construction",
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: alloc::vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "complex matrix product",
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn conj_transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Stacks `self` above `other` (column counts must agree).
    pub fn vstack(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "complex matrix vertical stack",
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        ComplexMatrix::new(self.rows + other.rows, self.cols, data)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<ComplexMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                context: "inverse of a non-square matrix",
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = a.get(col, col).norm();
            for r in col + 1..n {
                let mag = a.get(r, col).norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag < 1e-300 {
                return Err(Error::SingularMatrix);
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = a.get(col, j);
                    a.set(col, j, a.get(pivot_row, j));
                    a.set(pivot_row, j, tmp);
                    let tmp = inv.get(col, j);
                    inv.set(col, j, inv.get(pivot_row, j));
                    inv.set(pivot_row, j, tmp);
                }
            }
            let pivot = a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) / pivot);
                inv.set(col, j, inv.get(col, j) / pivot);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - factor * a.get(col, j);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - factor * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Singular values in descending order, by one-sided Jacobi
    /// orthogonalization of the columns (Hestenes). The complex cross terms
    /// are phase-folded into one column before each real rotation.
    pub fn singular_values(&self) -> Vec<f64> {
        let work = if self.cols > self.rows {
            self.conj_transpose()
        } else {
            self.clone()
        };
        let m = work.rows;
        let n = work.cols;
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| (0..m).map(|i| work.get(i, j)).collect())
            .collect();
        for _sweep in 0..128 {
            let mut rotated = false;
            for j in 0..n.saturating_sub(1) {
                for k in j + 1..n {
                    let mut a = 0.0f64;
                    let mut b = 0.0f64;
                    let mut g = Complex64::ZERO;
                    for i in 0..m {
                        let x = cols[j][i];
                        let y = cols[k][i];
                        a += x.norm_sqr();
                        b += y.norm_sqr();
                        g += x.conj() * y;
                    }
                    let scale = libm::sqrt(a * b);
                    if scale <= 0.0 || g.norm() <= 1e-15 * scale {
                        continue;
                    }
                    rotated = true;
                    let g_mag = g.norm();
                    let phase = g / g_mag;
                    let tau = (b - a) / (2.0 * g_mag);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                    } else {
                        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                    };
                    let c = 1.0 / libm::sqrt(1.0 + t * t);
                    let s = c * t;
                    for i in 0..m {
                        let u = cols[j][i];
                        let v = cols[k][i] * phase.conj();
                        cols[j][i] = c * u - s * v;
                        cols[k][i] = s * u + c * v;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sigma: Vec<f64> = cols
            .iter()
            .map(|col| libm::sqrt(col.iter().map(|v| v.norm_sqr()).sum()))
            .collect();
        sigma.sort_unstable_by(|x, y| y.partial_cmp(x).expect("no NaN singular values"));
        sigma
    }

    /// Number of singular values at least `rel_threshold` times the largest.
    pub fn rank(&self, rel_threshold: f64) -> usize {
        let sigma = self.singular_values();
        let largest = sigma.first().copied().unwrap_or(0.0);
        if largest == 0.0 {
            return 0;
        }
        sigma
            .iter()
            .filter(|&&s| s >= rel_threshold * largest)
            .count()
    }

    /// Ratio of largest to smallest singular value (infinite when singular).
    pub fn condition(&self) -> f64 {
        let sigma = self.singular_values();
        match (sigma.first(), sigma.last()) {
            (Some(&max), Some(&min)) if min > 0.0 => max / min,
            (Some(&max), _) if max > 0.0 => f64::INFINITY,
            _ => f64::INFINITY,
        }
    }
}
