//! Dense symmetric matrices sized for belief precision matrices: a handful
//! of arms in the paperlike setups, a few hundred at most.

// Triangular solves and symmetry checks read better with explicit indices.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// Symmetric matrix stored as a full row-major square.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = SymMatrix::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = v;
        }
        m
    }

    /// Builds from rows, requiring symmetry to 1e-12.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::invalid("matrix rows must form a square"));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (rows[i][j] - rows[j][i]).abs() > 1e-12 {
                    return Err(Error::invalid(format!(
                        "matrix not symmetric at ({i},{j}): {} vs {}",
                        rows[i][j], rows[j][i]
                    )));
                }
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            data.extend_from_slice(row);
        }
        Ok(SymMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn add_to_diag(&mut self, i: usize, v: f64) {
        self.data[i * self.n + i] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.data[i * self.n + j] != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Scales row i and column j entries: `out[i][j] = self[i][j] * s[i] * s[j]`.
    pub fn congruence_diag(&self, s: &[f64]) -> Self {
        assert_eq!(s.len(), self.n);
        let mut out = SymMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.data[i * self.n + j] = self.get(i, j) * s[i] * s[j];
            }
        }
        out
    }

    fn cholesky_raw(&self) -> Option<Vec<f64>> {
        let n = self.n;
        let mut l = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= 0.0 {
                        return None;
                    }
                    l[i * n + i] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Some(l)
    }

    /// Cholesky factor, retrying once with 1e-12-scaled diagonal jitter when
    /// the matrix is numerically on the PSD boundary.
    pub fn cholesky(&self) -> Result<Cholesky> {
        if let Some(l) = self.cholesky_raw() {
            return Ok(Cholesky { n: self.n, l });
        }
        let scale = (0..self.n)
            .map(|i| self.get(i, i).abs())
            .fold(1.0_f64, f64::max);
        let mut jittered = self.clone();
        for i in 0..self.n {
            jittered.add_to_diag(i, 1e-12 * scale);
        }
        jittered
            .cholesky_raw()
            .map(|l| Cholesky { n: self.n, l })
            .ok_or_else(|| Error::Internal("matrix is not positive definite".into()))
    }
}

/// Lower-triangular Cholesky factor.
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum -= self.l[i * n + k] * y[k];
            }
            y[i] = sum / self.l[i * n + i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in (i + 1)..n {
                sum -= self.l[k * n + i] * x[k];
            }
            x[i] = sum / self.l[i * n + i];
        }
        x
    }

    /// Diagonal of the inverse of the factored matrix.
    pub fn inverse_diag(&self) -> Vec<f64> {
        let n = self.n;
        let mut diag = vec![0.0; n];
        let mut e = vec![0.0; n];
        for i in 0..n {
            e[i] = 1.0;
            diag[i] = self.solve(&e)[i];
            e[i] = 0.0;
        }
        diag
    }
}
