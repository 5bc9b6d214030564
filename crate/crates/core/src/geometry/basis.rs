//! Orthonormal basis of the simplex tangent space `{v : <e, v> = 0}`.
//!
//! Column `i` (1-based) is `sqrt(i/(i+1)) * (1/i, ..., 1/i, -1, 0, ..., 0)` with
//! the entry `1/i` repeated `i` times. The columns are orthonormal and each sums
//! to zero, so `V` maps the unit ball of `R^(n-1)` isometrically onto the
//! zero-sum ball inside `R^n`.

use crate::error::{CoreError, Result};
use crate::linalg;

/// The `n x (n-1)` matrix of tangent-space basis vectors, stored by column.
#[derive(Clone, Debug)]
pub struct TangentBasis {
    n: usize,
    cols: Vec<Vec<f64>>,
}

/// Builds the tangent basis for the simplex in `R^n`; requires `n >= 2`.
pub fn simplex_tangent_basis(n: usize) -> Result<TangentBasis> {
    if n < 2 {
        return Err(CoreError::domain(format!(
            "tangent basis needs n >= 2, got {n}"
        )));
    }
    let mut cols = Vec::with_capacity(n - 1);
    for i in 1..n {
        let scale = (i as f64 / (i as f64 + 1.0)).sqrt();
        let mut v = vec![0.0; n];
        for entry in v.iter_mut().take(i) {
            *entry = scale / i as f64;
        }
        v[i] = -scale;
        cols.push(v);
    }
    Ok(TangentBasis { n, cols })
}

impl TangentBasis {
    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Reduced dimension `n - 1`.
    pub fn reduced_dim(&self) -> usize {
        self.n - 1
    }

    /// `V^T f`: maps an ambient loss into the reduced space.
    pub fn transpose_mul(&self, f: &[f64]) -> Vec<f64> {
        debug_assert_eq!(f.len(), self.n);
        self.cols.iter().map(|c| linalg::dot(c, f)).collect()
    }

    /// `V s`: maps a reduced decision back into the ambient tangent space.
    pub fn mul(&self, s: &[f64]) -> Vec<f64> {
        debug_assert_eq!(s.len(), self.n - 1);
        let mut out = vec![0.0; self.n];
        for (c, &w) in self.cols.iter().zip(s) {
            linalg::axpy(&mut out, w, c);
        }
        out
    }
}
