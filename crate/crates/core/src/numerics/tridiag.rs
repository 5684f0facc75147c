//! Thomas algorithm for tridiagonal systems.

use crate::error::{Error, Result};

/// `lower[i]` couples row `i + 1` to column `i`; `upper[i]` couples row `i` to
/// column `i + 1`.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(n: usize) -> Self {
        Self {
            lower: vec![0.0; n.saturating_sub(1)],
            diag: vec![0.0; n],
            upper: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0];
        if denom == 0.0 {
            return Err(Error::Convergence("singular tridiagonal system".into()));
        }
        if n > 1 {
            c[0] = self.upper[0] / denom;
        }
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.lower[i - 1] * c[i - 1];
            if denom == 0.0 {
                return Err(Error::Convergence("singular tridiagonal system".into()));
            }
            if i + 1 < n {
                c[i] = self.upper[i] / denom;
            }
            d[i] = (rhs[i] - self.lower[i - 1] * d[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}
