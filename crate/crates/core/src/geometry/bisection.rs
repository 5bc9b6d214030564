//! Approximate cone projection for decision sets that only expose a Euclidean
//! projector.
//!
//! `pi_C(u)` solves `min {(alpha*kappa - tu)^2 + ||alpha*x - hu||^2 : alpha >= 0, x in X}`.
//! For fixed `alpha > 0` the optimal `x(alpha)` is the projection of `hu / alpha`
//! onto `X`. Substituting `y = alpha * x` shows the fixed-`alpha` value function
//! `g(alpha)` is the partial minimization of a jointly convex program over a
//! convex cone, hence convex in `alpha`, so a scalar golden-section search on
//! `[0, alpha_max]` suffices. The bracket `alpha_max = max{0, tu/kappa} + ||hu||_2/kappa`
//! is valid because `alpha* * kappa^2 <= kappa*tu + <x*, hu> <= kappa*tu + kappa*||hu||_2`.

use crate::error::{CoreError, Result};
use crate::lifted::LiftedPayoff;
use crate::linalg;
use crate::scalar::golden_section_min;

/// Projects `u` onto `cone({kappa} x X)` using only a projector onto `X`.
///
/// `proj_x` must be an exact Euclidean projector onto the compact convex set `X`.
/// The search stops once the `alpha` bracket is narrower than `tol`.
pub fn project_cone_bisection(
    u: &LiftedPayoff,
    proj_x: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
    kappa: f64,
    tol: f64,
) -> Result<LiftedPayoff> {
    if !u.is_finite() {
        return Err(CoreError::NonFinite("project_cone_bisection input"));
    }
    if kappa <= 0.0 {
        return Err(CoreError::domain(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    if tol <= 0.0 {
        return Err(CoreError::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let hat_norm = linalg::norm2(&u.hat);
    let alpha_max = (u.tilde / kappa).max(0.0) + hat_norm / kappa;
    if alpha_max <= tol {
        return Ok(LiftedPayoff::zeros(u.dim()));
    }

    let objective = |alpha: f64| -> f64 {
        if alpha <= f64::MIN_POSITIVE {
            // y = 0: the apex of the cone.
            return u.tilde * u.tilde + hat_norm * hat_norm;
        }
        let x = proj_x(&linalg::scale(&u.hat, 1.0 / alpha));
        let d_tilde = alpha * kappa - u.tilde;
        let d_hat: f64 = u
            .hat
            .iter()
            .zip(&x)
            .map(|(h, xi)| {
                let d = alpha * xi - h;
                d * d
            })
            .sum();
        d_tilde * d_tilde + d_hat
    };

    let (alpha_star, _) = golden_section_min(objective, 0.0, alpha_max, tol);
    if alpha_star <= tol {
        return Ok(LiftedPayoff::zeros(u.dim()));
    }
    let x = proj_x(&linalg::scale(&u.hat, 1.0 / alpha_star));
    LiftedPayoff::new(alpha_star * kappa, linalg::scale(&x, alpha_star))
}
