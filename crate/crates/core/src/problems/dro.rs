//! Distributionally robust logistic regression:
//!
//! ```text
//! min_{||x - x0|| <= eps_x}  max_{y in Delta(m), ||y - y0|| <= eps_y}
//!     sum_i y_i * log(1 + exp(-b_i <a_i, x>)) + (mu/2) ||x||^2
//! ```
//!
//! The adversary reweights observations inside a small ball around the uniform
//! distribution, which pushes weight onto misclassified points. The reported
//! metric is the worst-case loss of the averaged model (an exact best response
//! in `x` would require solving a regularized logistic regression per
//! evaluation).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::baselines::{dro_lipschitz_bounds, linear_max_simplex_ball, ProxDomain, PROX_DUAL_TOL};
use crate::domain::ConicDomain;
use crate::error::{CoreError, Result};
use crate::framework::{MetricKind, SaddleObjective};
use crate::linalg;
use crate::problems::matrix_game::EntryDist;

/// Numerically stable `log(1 + exp(w))`.
fn log1p_exp(w: f64) -> f64 {
    w.max(0.0) + (-w.abs()).exp().ln_1p()
}

/// Numerically stable logistic function `1 / (1 + exp(-w))`.
fn sigmoid(w: f64) -> f64 {
    if w >= 0.0 {
        1.0 / (1.0 + (-w).exp())
    } else {
        let e = w.exp();
        e / (1.0 + e)
    }
}

/// A robust logistic regression instance.
pub struct DroLogistic {
    /// `m x n` feature rows.
    features: Vec<Vec<f64>>,
    /// Labels in `{-1, 1}`.
    labels: Vec<f64>,
    x0: Vec<f64>,
    eps_x: f64,
    y0: Vec<f64>,
    eps_y: f64,
    mu: f64,
    domain_x: ConicDomain,
    domain_y: ConicDomain,
}

impl DroLogistic {
    /// Builds an instance with explicit uncertainty-set parameters.
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<f64>,
        x0: Vec<f64>,
        eps_x: f64,
        y0: Vec<f64>,
        eps_y: f64,
        mu: f64,
    ) -> Result<Self> {
        let m = features.len();
        if m == 0 {
            return Err(CoreError::domain("dataset must be nonempty"));
        }
        let n = x0.len();
        if features.iter().any(|a| a.len() != n) {
            return Err(CoreError::domain("feature rows must match x0 dimension"));
        }
        if labels.len() != m {
            return Err(CoreError::LengthMismatch {
                expected: m,
                got: labels.len(),
            });
        }
        if labels.iter().any(|&b| b != 1.0 && b != -1.0) {
            return Err(CoreError::domain("labels must be -1 or 1"));
        }
        if eps_x <= 0.0 || eps_y <= 0.0 || mu < 0.0 {
            return Err(CoreError::domain(
                "need eps_x > 0, eps_y > 0 and mu >= 0",
            ));
        }
        let domain_x = ConicDomain::shifted_ball(x0.clone(), eps_x)?;
        let domain_y = ConicDomain::ellipsoid_simplex(y0.clone(), eps_y)?;
        Ok(DroLogistic {
            features,
            labels,
            x0,
            eps_x,
            y0,
            eps_y,
            mu,
            domain_x,
            domain_y,
        })
    }

    /// Standard parameters: `x0 = e/n`, `eps_x = 10`, `y0 = e/m`, `eps_y = 1/(2m)`,
    /// `mu = 0.1`.
    pub fn with_default_params(features: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        let m = features.len();
        if m == 0 {
            return Err(CoreError::domain("dataset must be nonempty"));
        }
        let n = features[0].len();
        DroLogistic::new(
            features,
            labels,
            vec![1.0 / n as f64; n],
            10.0,
            vec![1.0 / m as f64; m],
            1.0 / (2.0 * m as f64),
            0.1,
        )
    }

    pub fn num_samples(&self) -> usize {
        self.features.len()
    }

    pub fn num_features(&self) -> usize {
        self.x0.len()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    /// Per-observation logistic losses `log(1 + exp(-b_i <a_i, x>))`.
    pub fn losses(&self, x: &[f64]) -> Vec<f64> {
        self.features
            .iter()
            .zip(&self.labels)
            .map(|(a, &b)| log1p_exp(-b * linalg::dot(a, x)))
            .collect()
    }

    /// Worst-case loss of a model over the distribution uncertainty set.
    pub fn worst_case_loss(&self, x: &[f64]) -> Result<f64> {
        let ell = self.losses(x);
        let max_term = linear_max_simplex_ball(&ell, &self.y0, self.eps_y, PROX_DUAL_TOL)?;
        Ok(max_term + 0.5 * self.mu * linalg::dot(x, x))
    }

    /// Loss-norm bounds `(L_x, L_y)` for theoretical step sizes.
    pub fn lipschitz(&self) -> (f64, f64) {
        dro_lipschitz_bounds(&self.features, &self.labels, self.mu, self.eps_x, &self.x0)
    }
}

/// Synthetic instance: plant a normal weight vector, sample features from the
/// named distribution, label by the planted sign, then flip a fraction of the
/// labels (`floor(flip_fraction * m)` of them, chosen by the seed).
pub fn dro_synthetic(
    n: usize,
    m: usize,
    dist: EntryDist,
    flip_fraction: f64,
    seed: u64,
) -> Result<DroLogistic> {
    if n == 0 || m == 0 {
        return Err(CoreError::domain("need n >= 1 and m >= 1"));
    }
    if !(0.0..=1.0).contains(&flip_fraction) {
        return Err(CoreError::domain("flip fraction must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planted: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let features: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| match dist {
                    EntryDist::Uniform01 => rng.gen::<f64>(),
                    EntryDist::Normal01 => StandardNormal.sample(&mut rng),
                })
                .collect()
        })
        .collect();
    let mut labels: Vec<f64> = features
        .iter()
        .map(|a| {
            if linalg::dot(a, &planted) >= 0.0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let flips = (flip_fraction * m as f64).floor() as usize;
    let mut idx: Vec<usize> = (0..m).collect();
    idx.shuffle(&mut rng);
    for &i in idx.iter().take(flips) {
        labels[i] = -labels[i];
    }
    DroLogistic::with_default_params(features, labels)
}

impl SaddleObjective for DroLogistic {
    fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        linalg::dot(y, &self.losses(x)) + 0.5 * self.mu * linalg::dot(x, x)
    }

    fn subgrad_x(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        // Row i of the subgradient matrix is -b_i * a_i * sigma(-b_i <a_i, x>) + mu * x;
        // the player's loss is its transpose applied to y.
        let n = self.num_features();
        let mut out = vec![0.0; n];
        let mut y_total = 0.0;
        for ((a, &b), &yi) in self.features.iter().zip(&self.labels).zip(y) {
            let s = sigmoid(-b * linalg::dot(a, x));
            linalg::axpy(&mut out, -b * s * yi, a);
            y_total += yi;
        }
        linalg::axpy(&mut out, self.mu * y_total, x);
        out
    }

    fn subgrad_y(&self, x: &[f64], _y: &[f64]) -> Vec<f64> {
        self.losses(x)
    }

    fn metric(&self, x_avg: &[f64], _y_avg: &[f64]) -> Result<f64> {
        self.worst_case_loss(x_avg)
    }

    fn metric_kind(&self) -> MetricKind {
        MetricKind::WorstCaseLoss
    }

    fn domain_x(&self) -> &ConicDomain {
        &self.domain_x
    }

    fn domain_y(&self) -> &ConicDomain {
        &self.domain_y
    }

    fn prox_domain_x(&self) -> ProxDomain {
        ProxDomain::Ball {
            center: self.x0.clone(),
            radius: self.eps_x,
        }
    }

    fn prox_domain_y(&self) -> ProxDomain {
        ProxDomain::SimplexBall {
            center: self.y0.clone(),
            radius: self.eps_y,
            tol: PROX_DUAL_TOL,
        }
    }

    fn lipschitz_bounds(&self) -> (f64, f64) {
        self.lipschitz()
    }
}
