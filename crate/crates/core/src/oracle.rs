//! Brute-force reference solvers used to validate the closed-form projections.
//!
//! The cone projection `min {(a*kappa - tu)^2 + ||a*x - hu||^2 : a >= 0, x in X}`
//! is attacked directly in the `(a, x)` parametrization: projected gradient
//! descent with backtracking from several starting points, followed by rounds of
//! exact alternating minimization (the `a`-step is a scalar quadratic, the
//! `x`-step a Euclidean projection onto `X`). Nothing here shares code with the
//! exact projectors; agreement between the two is the correctness evidence.

use crate::lifted::LiftedPayoff;
use crate::linalg;

/// Euclidean projectors onto the base sets, written independently of the
/// `ConicDomain` plumbing.
pub mod base_proj {
    use crate::geometry::project_simplex_euclidean;
    use crate::linalg;

    pub fn simplex(z: &[f64]) -> Vec<f64> {
        project_simplex_euclidean(z)
    }

    /// Unit l1 ball: identity inside, otherwise soft-threshold the magnitudes.
    pub fn l1_ball(z: &[f64]) -> Vec<f64> {
        if linalg::norm1(z) <= 1.0 {
            return z.to_vec();
        }
        let mags: Vec<f64> = z.iter().map(|v| v.abs()).collect();
        let w = project_simplex_euclidean(&mags);
        z.iter()
            .zip(&w)
            .map(|(&zi, &wi)| wi * zi.signum())
            .collect()
    }

    pub fn l2_ball(z: &[f64], radius: f64) -> Vec<f64> {
        let nrm = linalg::norm2(z);
        if nrm <= radius {
            z.to_vec()
        } else {
            linalg::scale(z, radius / nrm)
        }
    }

    pub fn linf_ball(z: &[f64]) -> Vec<f64> {
        z.iter().map(|v| v.clamp(-1.0, 1.0)).collect()
    }
}

/// Result of a brute-force cone projection.
#[derive(Clone, Debug)]
pub struct OracleProjection {
    pub point: LiftedPayoff,
    pub objective: f64,
}

/// Brute-force `pi_C(u)` for `C = cone({kappa} x X)`, given a projector onto `X`.
///
/// `max_iters` caps the projected-gradient budget per start. The descent is
/// followed by a high-precision scalar search on `alpha` (the fixed-`alpha`
/// value function is convex), so the oracle converges even where plain
/// projected gradient crawls.
pub fn project_cone_oracle(
    u: &LiftedPayoff,
    proj_x: &dyn Fn(&[f64]) -> Vec<f64>,
    kappa: f64,
    max_iters: usize,
) -> OracleProjection {
    let hat_norm = linalg::norm2(&u.hat);
    let alpha_cap = (u.tilde / kappa).max(0.0) + hat_norm / kappa;

    // The apex is always a candidate.
    let mut best = OracleProjection {
        point: LiftedPayoff::zeros(u.dim()),
        objective: u.tilde * u.tilde + hat_norm * hat_norm,
    };
    if alpha_cap <= 0.0 {
        return best;
    }

    for frac in [1.0, 0.5, 0.1] {
        let alpha0 = (alpha_cap * frac).max(1e-8);
        let x0 = proj_x(&linalg::scale(&u.hat, 1.0 / alpha0));
        let cand = descend(u, proj_x, kappa, alpha0, x0, alpha_cap, max_iters);
        if cand.objective < best.objective {
            best = cand;
        }
    }

    // Convex scalar route: minimize g(alpha) = min_x objective over the bracket.
    let g = |alpha: f64| -> (f64, Vec<f64>) {
        if alpha <= f64::MIN_POSITIVE {
            return (u.tilde * u.tilde + hat_norm * hat_norm, vec![0.0; u.dim()]);
        }
        let x = proj_x(&linalg::scale(&u.hat, 1.0 / alpha));
        (objective(u, kappa, alpha, &x), x)
    };
    let (alpha_star, val) =
        crate::scalar::golden_section_min(|a| g(a).0, 0.0, alpha_cap, 1e-12 * (1.0 + alpha_cap));
    if val < best.objective {
        let (_, x) = g(alpha_star);
        best = OracleProjection {
            point: LiftedPayoff {
                tilde: alpha_star * kappa,
                hat: linalg::scale(&x, alpha_star),
            },
            objective: val,
        };
    }
    best
}

fn objective(u: &LiftedPayoff, kappa: f64, alpha: f64, x: &[f64]) -> f64 {
    let dt = alpha * kappa - u.tilde;
    let dh: f64 = u
        .hat
        .iter()
        .zip(x)
        .map(|(h, xi)| {
            let d = alpha * xi - h;
            d * d
        })
        .sum();
    dt * dt + dh
}

fn descend(
    u: &LiftedPayoff,
    proj_x: &dyn Fn(&[f64]) -> Vec<f64>,
    kappa: f64,
    mut alpha: f64,
    mut x: Vec<f64>,
    alpha_cap: f64,
    max_iters: usize,
) -> OracleProjection {
    let mut val = objective(u, kappa, alpha, &x);
    let mut step = 1.0 / (1.0 + kappa * kappa);

    for _ in 0..max_iters {
        // Gradients of the joint objective.
        let resid: Vec<f64> = u
            .hat
            .iter()
            .zip(&x)
            .map(|(h, xi)| alpha * xi - h)
            .collect();
        let g_alpha = 2.0 * kappa * (alpha * kappa - u.tilde) + 2.0 * linalg::dot(&x, &resid);
        let g_x = linalg::scale(&resid, 2.0 * alpha);

        // Backtracking projected step.
        let mut improved = false;
        for _ in 0..40 {
            let a_try = (alpha - step * g_alpha).clamp(0.0, 2.0 * alpha_cap);
            let mut x_try = x.clone();
            linalg::axpy(&mut x_try, -step, &g_x);
            let x_try = proj_x(&x_try);
            let v_try = objective(u, kappa, a_try, &x_try);
            if v_try < val - 1e-18 {
                alpha = a_try;
                x = x_try;
                val = v_try;
                improved = true;
                step *= 1.3;
                break;
            }
            step *= 0.5;
            if step < 1e-16 {
                break;
            }
        }
        if !improved {
            break;
        }

        // Exact alternating polish: scalar alpha-step, projection x-step.
        let denom = kappa * kappa + linalg::dot(&x, &x);
        let a_exact = ((kappa * u.tilde + linalg::dot(&x, &u.hat)) / denom).max(0.0);
        if a_exact > 0.0 {
            let x_exact = proj_x(&linalg::scale(&u.hat, 1.0 / a_exact));
            let v_exact = objective(u, kappa, a_exact, &x_exact);
            if v_exact < val {
                alpha = a_exact;
                x = x_exact;
                val = v_exact;
            }
        }
    }

    // Final rounds of alternating minimization to polish the argument.
    for _ in 0..200 {
        let denom = kappa * kappa + linalg::dot(&x, &x);
        let a_next = ((kappa * u.tilde + linalg::dot(&x, &u.hat)) / denom).max(0.0);
        if a_next <= f64::MIN_POSITIVE {
            break;
        }
        let x_next = proj_x(&linalg::scale(&u.hat, 1.0 / a_next));
        let v_next = objective(u, kappa, a_next, &x_next);
        if v_next >= val - 1e-18 {
            break;
        }
        alpha = a_next;
        x = x_next;
        val = v_next;
    }

    OracleProjection {
        point: LiftedPayoff {
            tilde: alpha * kappa,
            hat: linalg::scale(&x, alpha),
        },
        objective: val,
    }
}

/// Brute-force minimization of `<c, y> + (1/(2 eta)) ||y - y_prev||^2` over
/// `Delta(3)` intersected with `||y - y0|| <= eps`, by two-stage grid refinement.
///
/// Only meaningful for `m = 3`; used to validate the dual-search proximal oracle.
pub fn prox_simplex_ball_grid_oracle(
    y_prev: &[f64],
    c: &[f64],
    eta: f64,
    y0: &[f64],
    eps: f64,
) -> Vec<f64> {
    assert_eq!(y_prev.len(), 3);
    let value = |y: &[f64]| -> f64 {
        linalg::dot(c, y) + linalg::dist2(y, y_prev).powi(2) / (2.0 * eta)
    };
    let feasible = |y: &[f64]| -> bool { linalg::dist2(y, y0) <= eps + 1e-12 };

    let mut best = y0.to_vec();
    let mut best_val = value(&best);
    // Coarse pass over the whole simplex, fine pass around the winner.
    let mut center = best.clone();
    for (h, span) in [(1e-2, 1.0), (1e-4, 2.5e-2)] {
        let lo0 = (center[0] - span).max(0.0);
        let hi0 = (center[0] + span).min(1.0);
        let lo1 = (center[1] - span).max(0.0);
        let hi1 = (center[1] + span).min(1.0);
        let steps0 = ((hi0 - lo0) / h).ceil() as usize;
        let steps1 = ((hi1 - lo1) / h).ceil() as usize;
        for i in 0..=steps0 {
            let y1 = lo0 + i as f64 * h;
            for j in 0..=steps1 {
                let y2 = lo1 + j as f64 * h;
                let y3 = 1.0 - y1 - y2;
                if y3 < 0.0 {
                    continue;
                }
                let y = vec![y1, y2, y3];
                if !feasible(&y) {
                    continue;
                }
                let v = value(&y);
                if v < best_val {
                    best_val = v;
                    best = y;
                }
            }
        }
        center = best.clone();
    }
    best
}

/// Brute-force maximization of `<c, y>` over `Delta(3)` intersected with
/// `||y - y0|| <= eps`, by the same two-stage grid refinement.
pub fn linear_max_simplex_ball_grid_oracle(c: &[f64], y0: &[f64], eps: f64) -> f64 {
    assert_eq!(c.len(), 3);
    let feasible = |y: &[f64]| -> bool { linalg::dist2(y, y0) <= eps + 1e-12 };
    let mut best = y0.to_vec();
    let mut best_val = linalg::dot(c, &best);
    let mut center = best.clone();
    for (h, span) in [(1e-2, 1.0), (1e-4, 2.5e-2)] {
        let lo0 = (center[0] - span).max(0.0);
        let hi0 = (center[0] + span).min(1.0);
        let lo1 = (center[1] - span).max(0.0);
        let hi1 = (center[1] + span).min(1.0);
        let steps0 = ((hi0 - lo0) / h).ceil() as usize;
        let steps1 = ((hi1 - lo1) / h).ceil() as usize;
        for i in 0..=steps0 {
            let y1 = lo0 + i as f64 * h;
            for j in 0..=steps1 {
                let y2 = lo1 + j as f64 * h;
                let y3 = 1.0 - y1 - y2;
                if y3 < 0.0 {
                    continue;
                }
                let y = vec![y1, y2, y3];
                if !feasible(&y) {
                    continue;
                }
                let v = linalg::dot(c, &y);
                if v > best_val {
                    best_val = v;
                    best = y;
                }
            }
        }
        center = best;
        best = center.clone();
    }
    best_val
}
