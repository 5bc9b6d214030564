//! Projections tied to the probability simplex.
//!
//! For `X = Delta(n)` the lifted cone is `C = cone({1} x Delta(n))` and its polar
//! has the closed form `Cpolar = {(ty, hy) : max_i hy_i <= -ty}`. Projecting onto
//! `Cpolar` clips the hat part at `-ty` coordinate-wise, which reduces the whole
//! problem to the scalar root equation
//!
//! ```text
//! ty* + sum_i max{hu_i + ty*, 0} = tu
//! ```
//!
//! whose left side is continuous, piecewise linear and strictly increasing. Sorting
//! the coordinates locates the linear piece containing the root, so no binary
//! search is needed and the projection costs `O(n log n)`.

use crate::error::{CoreError, Result};
use crate::lifted::LiftedPayoff;

/// Projects `u` onto `C = cone({1} x Delta(n))`.
pub fn project_cone_simplex(u: &LiftedPayoff) -> Result<LiftedPayoff> {
    if !u.is_finite() {
        return Err(CoreError::NonFinite("project_cone_simplex input"));
    }
    let n = u.dim();
    if n == 0 {
        return Err(CoreError::domain("empty decision space"));
    }
    // Polar membership (max_i hu_i <= -tu) means the projection is the apex.
    let max_hat = u.hat.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max_hat <= -u.tilde {
        return Ok(LiftedPayoff::zeros(n));
    }

    // Locate the linear piece of ty -> ty + sum_i max{hu_i + ty, 0} that crosses tu.
    // With hu sorted descending, on [ -hu_(k), -hu_(k+1) ) exactly the k largest
    // coordinates are active.
    let mut sorted = u.hat.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut prefix = 0.0;
    let mut ty_star = None;
    for k in 1..=n {
        prefix += sorted[k - 1];
        let candidate = (u.tilde - prefix) / (k as f64 + 1.0);
        let lo = -sorted[k - 1];
        let hi = if k < n { -sorted[k] } else { f64::INFINITY };
        if candidate >= lo && candidate <= hi {
            ty_star = Some(candidate);
            break;
        }
    }
    // The root always exists because the polar case was handled above; fall back
    // to the all-active piece if rounding pushed every candidate off its interval.
    let ty = ty_star.unwrap_or((u.tilde - prefix) / (n as f64 + 1.0));

    let hat: Vec<f64> = u.hat.iter().map(|&h| (h + ty).max(0.0)).collect();
    LiftedPayoff::new(u.tilde - ty, hat)
}

/// Euclidean projection of `z` onto the probability simplex, by sort and threshold.
pub fn project_simplex_euclidean(z: &[f64]) -> Vec<f64> {
    let m = z.len();
    debug_assert!(m > 0);
    let mut sorted = z.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for k in 1..=m {
        cumsum += sorted[k - 1];
        let t = (cumsum - 1.0) / k as f64;
        if sorted[k - 1] > t {
            tau = t;
        } else {
            break;
        }
    }
    z.iter().map(|&v| (v - tau).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn member_of_cone_is_fixed() {
        let u = LiftedPayoff::new(1.0, vec![1.0, 0.0, 0.0]).unwrap();
        let pi = project_cone_simplex(&u).unwrap();
        assert_eq!(pi.tilde, 1.0);
        assert_eq!(pi.hat, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn member_of_polar_maps_to_zero() {
        // max hu_i = -2 <= 1 = -tu
        let u = LiftedPayoff::new(-1.0, vec![-2.0, -2.0, -2.0]).unwrap();
        let pi = project_cone_simplex(&u).unwrap();
        assert_eq!(pi.tilde, 0.0);
        assert_eq!(pi.hat, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn general_point_matches_root_equation_solution() {
        // ty* = -0.1 solves ty + sum max{hu_i + ty, 0} = 0.5 for hu = (0.7, -0.2, 0.1),
        // giving pi_C(u) = (0.6, (0.6, 0, 0)); cross-checked against the brute-force
        // oracle in tests/oracle_agreement.rs.
        let u = LiftedPayoff::new(0.5, vec![0.7, -0.2, 0.1]).unwrap();
        let pi = project_cone_simplex(&u).unwrap();
        assert!((pi.tilde - 0.6).abs() < 1e-12);
        assert!(linalg::dist2(&pi.hat, &[0.6, 0.0, 0.0]) < 1e-12);
        // Moreau orthogonality.
        let q = u.sub(&pi);
        assert!(pi.dot(&q).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite_input() {
        let u = LiftedPayoff {
            tilde: f64::NAN,
            hat: vec![0.0],
        };
        assert!(project_cone_simplex(&u).is_err());
    }

    #[test]
    fn euclidean_projection_keeps_simplex_points() {
        let z = vec![0.2, 0.5, 0.3];
        let p = project_simplex_euclidean(&z);
        assert!(linalg::dist2(&p, &z) < 1e-12);
    }

    #[test]
    fn euclidean_projection_saturates_dominant_coordinate() {
        let p = project_simplex_euclidean(&[10.0, 0.0, 0.0]);
        assert!(linalg::dist2(&p, &[1.0, 0.0, 0.0]) < 1e-12);
    }

    #[test]
    fn euclidean_projection_matches_known_threshold() {
        // tau = -2/15 for z = (0.5, 0.2, -0.1).
        let p = project_simplex_euclidean(&[0.5, 0.2, -0.1]);
        let expected = [0.5 + 2.0 / 15.0, 0.2 + 2.0 / 15.0, -0.1 + 2.0 / 15.0];
        assert!(linalg::dist2(&p, &expected) < 1e-12);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
