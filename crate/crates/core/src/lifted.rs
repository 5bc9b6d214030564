//! Vectors in the lifted space R x R^n used by the conic learners.
//!
//! A lifted payoff splits as a cone-axis scalar and a decision-space part.
//! Elements of the cone `C = cone({kappa} x X)` decompose as `alpha * (kappa, x)`
//! with `alpha >= 0` and `x` in `X`.

use crate::error::{CoreError, Result};
use crate::linalg;

/// A vector `(tilde, hat)` in the lifted space `R x R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedPayoff {
    /// Cone-axis coordinate.
    pub tilde: f64,
    /// Decision-space coordinate, length `n`.
    pub hat: Vec<f64>,
}

impl LiftedPayoff {
    /// Builds a lifted vector, rejecting NaN or infinite entries.
    pub fn new(tilde: f64, hat: Vec<f64>) -> Result<Self> {
        if !tilde.is_finite() || !linalg::all_finite(&hat) {
            return Err(CoreError::NonFinite("lifted payoff"));
        }
        Ok(LiftedPayoff { tilde, hat })
    }

    pub fn zeros(n: usize) -> Self {
        LiftedPayoff {
            tilde: 0.0,
            hat: vec![0.0; n],
        }
    }

    /// Dimension of the decision-space part.
    pub fn dim(&self) -> usize {
        self.hat.len()
    }

    pub fn is_finite(&self) -> bool {
        self.tilde.is_finite() && linalg::all_finite(&self.hat)
    }

    pub fn dot(&self, other: &LiftedPayoff) -> f64 {
        self.tilde * other.tilde + linalg::dot(&self.hat, &other.hat)
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.tilde.abs().max(linalg::norm_inf(&self.hat))
    }

    pub fn add(&self, other: &LiftedPayoff) -> LiftedPayoff {
        LiftedPayoff {
            tilde: self.tilde + other.tilde,
            hat: linalg::add(&self.hat, &other.hat),
        }
    }

    pub fn sub(&self, other: &LiftedPayoff) -> LiftedPayoff {
        LiftedPayoff {
            tilde: self.tilde - other.tilde,
            hat: linalg::sub(&self.hat, &other.hat),
        }
    }

    pub fn scale(&self, s: f64) -> LiftedPayoff {
        LiftedPayoff {
            tilde: s * self.tilde,
            hat: linalg::scale(&self.hat, s),
        }
    }

    /// `self + w * other`, the payoff-aggregation step.
    pub fn add_scaled(&self, w: f64, other: &LiftedPayoff) -> LiftedPayoff {
        LiftedPayoff {
            tilde: self.tilde + w * other.tilde,
            hat: {
                let mut h = self.hat.clone();
                linalg::axpy(&mut h, w, &other.hat);
                h
            },
        }
    }
}
