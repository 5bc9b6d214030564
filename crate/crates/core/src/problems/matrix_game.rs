//! Two-player zero-sum matrix games `min_{x in Delta(n)} max_{y in Delta(m)} <x, A y>`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::baselines::ProxDomain;
use crate::domain::ConicDomain;
use crate::error::{CoreError, Result};
use crate::framework::{MetricKind, SaddleObjective};
use crate::linalg;

/// Entry distribution for random game generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryDist {
    /// Uniform on `[0, 1]`.
    Uniform01,
    /// Standard normal.
    Normal01,
}

/// A payoff matrix with simplex strategy sets for both players.
pub struct MatrixGame {
    rows: usize,
    cols: usize,
    /// Row-major `rows x cols` payoff matrix.
    a: Vec<f64>,
    domain_x: ConicDomain,
    domain_y: ConicDomain,
}

impl MatrixGame {
    pub fn new(rows: usize, cols: usize, a: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(CoreError::domain("matrix game needs positive dimensions"));
        }
        if a.len() != rows * cols {
            return Err(CoreError::LengthMismatch {
                expected: rows * cols,
                got: a.len(),
            });
        }
        if !linalg::all_finite(&a) {
            return Err(CoreError::NonFinite("payoff matrix"));
        }
        Ok(MatrixGame {
            rows,
            cols,
            a,
            domain_x: ConicDomain::simplex(rows)?,
            domain_y: ConicDomain::simplex(cols)?,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    /// `A y` (the x-player's loss vector).
    pub fn mul_y(&self, y: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| linalg::dot(&self.a[i * self.cols..(i + 1) * self.cols], y))
            .collect()
    }

    /// `A^T x` (the y-player's payoff vector).
    pub fn mul_tx(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let row = &self.a[i * self.cols..(i + 1) * self.cols];
            linalg::axpy(&mut out, x[i], row);
        }
        out
    }

    /// Exact duality gap `max_j (A^T x)_j - min_i (A y)_i`: best responses over
    /// simplexes sit at vertices, so the gap is a max/min over pure strategies.
    pub fn gap(&self, x: &[f64], y: &[f64]) -> f64 {
        let best_col = self
            .mul_tx(x)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let best_row = self.mul_y(y).into_iter().fold(f64::INFINITY, f64::min);
        best_col - best_row
    }
}

/// Seeded random game with entries from the named distribution.
pub fn matrix_game_random(rows: usize, cols: usize, dist: EntryDist, seed: u64) -> MatrixGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..rows * cols)
        .map(|_| match dist {
            EntryDist::Uniform01 => rng.gen::<f64>(),
            EntryDist::Normal01 => StandardNormal.sample(&mut rng),
        })
        .collect();
    MatrixGame::new(rows, cols, a).expect("generated matrix is well-formed")
}

impl SaddleObjective for MatrixGame {
    fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::dot(x, &self.mul_y(y))
    }

    fn subgrad_x(&self, _x: &[f64], y: &[f64]) -> Vec<f64> {
        self.mul_y(y)
    }

    fn subgrad_y(&self, x: &[f64], _y: &[f64]) -> Vec<f64> {
        self.mul_tx(x)
    }

    fn metric(&self, x_avg: &[f64], y_avg: &[f64]) -> Result<f64> {
        Ok(self.gap(x_avg, y_avg))
    }

    fn metric_kind(&self) -> MetricKind {
        MetricKind::DualityGap
    }

    fn domain_x(&self) -> &ConicDomain {
        &self.domain_x
    }

    fn domain_y(&self) -> &ConicDomain {
        &self.domain_y
    }

    fn prox_domain_x(&self) -> ProxDomain {
        ProxDomain::Simplex { n: self.rows }
    }

    fn prox_domain_y(&self) -> ProxDomain {
        ProxDomain::Simplex { n: self.cols }
    }

    fn lipschitz_bounds(&self) -> (f64, f64) {
        // ||A y|| over the simplex is at most the largest column norm, and
        // ||A^T x|| at most the largest row norm.
        let mut col_max = 0.0f64;
        for j in 0..self.cols {
            let mut s = 0.0;
            for i in 0..self.rows {
                let v = self.entry(i, j);
                s += v * v;
            }
            col_max = col_max.max(s.sqrt());
        }
        let mut row_max = 0.0f64;
        for i in 0..self.rows {
            let row = &self.a[i * self.cols..(i + 1) * self.cols];
            row_max = row_max.max(linalg::norm2(row));
        }
        (col_max, row_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = matrix_game_random(7, 5, EntryDist::Uniform01, 123);
        let b = matrix_game_random(7, 5, EntryDist::Uniform01, 123);
        assert_eq!(a.a, b.a);
        let c = matrix_game_random(7, 5, EntryDist::Uniform01, 124);
        assert_ne!(a.a, c.a);
    }

    #[test]
    fn uniform_entries_are_in_range_with_plausible_mean() {
        let g = matrix_game_random(100, 50, EntryDist::Uniform01, 0);
        assert!(g.a.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let mean = g.a.iter().sum::<f64>() / g.a.len() as f64;
        assert!((mean - 0.5).abs() < 0.05, "sample mean {mean}");
    }

    #[test]
    fn matching_pennies_gap_vanishes_at_uniform() {
        let g = MatrixGame::new(2, 2, vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        assert!(g.gap(&[0.5, 0.5], &[0.5, 0.5]).abs() < 1e-15);
    }

    #[test]
    fn dominant_pure_game_gap_is_payoff_spread() {
        // Constant columns: A = [[1, 0], [1, 0]]; at uniform strategies the gap
        // is max_j (A^T x)_j - min_i (A y)_i = 1 - 0.5.
        let g = MatrixGame::new(2, 2, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        let gap = g.gap(&[0.5, 0.5], &[0.5, 0.5]);
        assert!((gap - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gap_matches_vertex_enumeration_on_small_games() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for seed in 0..20 {
            let g = matrix_game_random(5, 5, EntryDist::Normal01, seed);
            // Random mixed strategies.
            let mut x: Vec<f64> = (0..5).map(|_| rng.gen::<f64>()).collect();
            let sx: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= sx);
            let mut y: Vec<f64> = (0..5).map(|_| rng.gen::<f64>()).collect();
            let sy: f64 = y.iter().sum();
            y.iter_mut().for_each(|v| *v /= sy);

            // Enumerate all pure best responses directly from the bilinear form.
            let best_y = (0..5)
                .map(|j| {
                    let e: Vec<f64> = (0..5).map(|k| if k == j { 1.0 } else { 0.0 }).collect();
                    g.value(&x, &e)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            let best_x = (0..5)
                .map(|i| {
                    let e: Vec<f64> = (0..5).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
                    g.value(&e, &y)
                })
                .fold(f64::INFINITY, f64::min);
            let brute = best_y - best_x;
            assert!((g.gap(&x, &y) - brute).abs() <= 1e-10);
            assert!(g.gap(&x, &y) >= -1e-10);
        }
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert!(MatrixGame::new(0, 2, vec![]).is_err());
        assert!(MatrixGame::new(2, 2, vec![1.0; 3]).is_err());
        assert!(MatrixGame::new(1, 1, vec![f64::NAN]).is_err());
    }
}
