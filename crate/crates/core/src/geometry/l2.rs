//! Projection onto the second-order cone generated by an l2-ball decision set.
//!
//! For `X = r * B2(1)` the lifted cone `cone({r} x X)` is the ice-cream cone
//! `{(ty, hy) : ||hy||_2 <= ty}` for every radius `r > 0`, because the radius
//! scales both the axis and the ball. Its polar is the reflected cone
//! `{(ty, hy) : ||hy||_2 <= -ty}`, and the projection has the closed-form apex
//! value `(tu + ||hu||_2) / 2`.

use crate::error::{CoreError, Result};
use crate::lifted::LiftedPayoff;
use crate::linalg;

/// Projects `u` onto `{(ty, hy) : ||hy||_2 <= ty}` in `O(n)`.
///
/// `kappa` is the lift scale of the underlying ball; it must be positive but does
/// not enter the formulas since the cone is radius-invariant.
pub fn project_cone_l2(u: &LiftedPayoff, kappa: f64) -> Result<LiftedPayoff> {
    if !u.is_finite() {
        return Err(CoreError::NonFinite("project_cone_l2 input"));
    }
    if kappa <= 0.0 {
        return Err(CoreError::domain(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    let hat_norm = linalg::norm2(&u.hat);
    if hat_norm <= u.tilde {
        return Ok(u.clone());
    }
    if hat_norm <= -u.tilde {
        return Ok(LiftedPayoff::zeros(u.dim()));
    }
    let apex = 0.5 * (u.tilde + hat_norm);
    let hat = linalg::scale(&u.hat, apex / hat_norm);
    LiftedPayoff::new(apex, hat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_case_halves_the_norm() {
        // (0, hu) with ||hu|| = 2 projects to (1, hu / 2).
        let u = LiftedPayoff::new(0.0, vec![2.0, 0.0]).unwrap();
        let pi = project_cone_l2(&u, 1.0).unwrap();
        assert!((pi.tilde - 1.0).abs() < 1e-15);
        assert!(linalg::dist2(&pi.hat, &[1.0, 0.0]) < 1e-15);
    }

    #[test]
    fn interior_point_is_fixed() {
        let u = LiftedPayoff::new(3.0, vec![0.6, 0.8]).unwrap();
        let pi = project_cone_l2(&u, 1.0).unwrap();
        assert_eq!(pi, u);
    }

    #[test]
    fn polar_point_maps_to_zero() {
        let u = LiftedPayoff::new(-3.0, vec![0.6, 0.8]).unwrap();
        let pi = project_cone_l2(&u, 1.0).unwrap();
        assert_eq!(pi.norm2(), 0.0);
    }

    #[test]
    fn rejects_bad_kappa() {
        let u = LiftedPayoff::zeros(2);
        assert!(project_cone_l2(&u, 0.0).is_err());
        assert!(project_cone_l2(&u, -1.0).is_err());
    }

    #[test]
    fn moreau_orthogonality_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..9);
            let hat: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let u = LiftedPayoff::new(rng.gen_range(-2.0..2.0), hat).unwrap();
            let pi = project_cone_l2(&u, 1.0).unwrap();
            let q = u.sub(&pi);
            assert!(pi.dot(&q).abs() <= 1e-10 * (1.0 + u.norm2() * u.norm2()));
            // q must lie in the polar cone.
            assert!(linalg::norm2(&q.hat) <= -q.tilde + 1e-10);
        }
    }
}
