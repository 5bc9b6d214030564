//! Projections for l1 and l-infinity ball decision sets.
//!
//! Both reduce to one primitive: projecting onto the scaled box cone
//! `K(a) = {(ty, hy) : ||hy||_inf <= a * ty, ty >= 0}`. For a fixed `ty`, the
//! optimal hat part clips `hu` into the box `[-a*ty, a*ty]`, leaving the
//! one-dimensional piecewise quadratic
//!
//! ```text
//! phi(ty) = (ty - tu)^2 + sum_i max{|hu_i| - a*ty, 0}^2
//! ```
//!
//! The residual is the two-sided box distance: coordinates below the lower face
//! contribute exactly like coordinates above the upper face, via `|hu_i|`.
//! Sorting `|hu|` gives the breakpoints; on each interval `phi` is a convex
//! parabola minimized in closed form, so the whole projection is `O(n log n)`.
//!
//! - `X` the unit l-infinity ball (`kappa = sqrt(n)`): the lifted cone itself is
//!   `C = K(1/kappa)`, so the primitive computes `pi_C` directly.
//! - `X` the unit l1 ball (`kappa = 1`): the polar is `Cpolar = {||hy||_inf <= -ty}`,
//!   the mirror image of `K(1)` under `ty -> -ty`; the primitive computes
//!   `pi_Cpolar` and Moreau's decomposition recovers `pi_C`.

use crate::error::{CoreError, Result};
use crate::lifted::LiftedPayoff;

/// Which unit ball the decision set is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxNorm {
    /// `X = {x : ||x||_1 <= 1}`, `kappa = 1`.
    L1,
    /// `X = {x : ||x||_inf <= 1}`, `kappa = sqrt(n)`.
    LInf,
}

/// Projects `u` onto `C = cone({kappa} x X)` for the l1 or l-infinity unit ball.
pub fn project_cone_l1_linf(u: &LiftedPayoff, p: BoxNorm) -> Result<LiftedPayoff> {
    if !u.is_finite() {
        return Err(CoreError::NonFinite("project_cone_l1_linf input"));
    }
    let n = u.dim();
    if n == 0 {
        return Err(CoreError::domain("empty decision space"));
    }
    match p {
        BoxNorm::LInf => {
            let kappa = (n as f64).sqrt();
            project_scaled_box_cone(u, 1.0 / kappa)
        }
        BoxNorm::L1 => {
            // pi_Cpolar(u) through the mirrored primitive, then u - pi_Cpolar(u).
            let flipped = LiftedPayoff {
                tilde: -u.tilde,
                hat: u.hat.clone(),
            };
            let proj = project_scaled_box_cone(&flipped, 1.0)?;
            let polar = LiftedPayoff {
                tilde: -proj.tilde,
                hat: proj.hat,
            };
            Ok(u.sub(&polar))
        }
    }
}

/// Projection onto `K(a) = {(ty, hy) : ||hy||_inf <= a*ty, ty >= 0}`.
fn project_scaled_box_cone(u: &LiftedPayoff, a: f64) -> Result<LiftedPayoff> {
    let n = u.dim();
    let mut mags: Vec<f64> = u.hat.iter().map(|h| h.abs()).collect();
    mags.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // Suffix sums of the sorted magnitudes: suffix[j] = sum of mags[j..].
    let mut suffix = vec![0.0; n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1] + mags[j];
    }

    // On [b_j, b_{j+1}] with b_j = mags[j-1]/a the active set is {j..n}, and
    // phi'(ty) = 0 at ty = (tu + a * suffix[j]) / (1 + a^2 * (n - j)).
    let mut best_ty = 0.0;
    let mut best_val = f64::INFINITY;
    for j in 0..=n {
        let lo = if j == 0 { 0.0 } else { (mags[j - 1] / a).max(0.0) };
        let hi = if j == n { f64::INFINITY } else { mags[j] / a };
        if lo > hi {
            continue;
        }
        let active = (n - j) as f64;
        let cand = (u.tilde + a * suffix[j]) / (1.0 + a * a * active);
        let ty = cand.clamp(lo, hi.min(f64::MAX));
        let val = phi(u, a, ty, &mags);
        if val < best_val {
            best_val = val;
            best_ty = ty;
        }
    }

    let radius = a * best_ty;
    let hat: Vec<f64> = u.hat.iter().map(|&h| h.clamp(-radius, radius)).collect();
    LiftedPayoff::new(best_ty, hat)
}

fn phi(u: &LiftedPayoff, a: f64, ty: f64, mags: &[f64]) -> f64 {
    let d = ty - u.tilde;
    let resid: f64 = mags
        .iter()
        .map(|&m| {
            let r = (m - a * ty).max(0.0);
            r * r
        })
        .sum();
    d * d + resid
}
