//! Orthogonal projections onto lifted cones `C = cone({kappa} x X)` and their polars.
//!
//! Every projector here returns `pi_C(u)` exactly (up to floating point) for its
//! decision set, in `O(n)` or `O(n log n)` time. Moreau's decomposition
//! `u = pi_C(u) + pi_Cpolar(u)` with `<pi_C(u), pi_Cpolar(u)> = 0` ties the cone
//! and polar-cone projections together, so each projector only has to solve the
//! cheaper of the two problems.

mod basis;
mod bisection;
mod boxcone;
mod l2;
mod simplex;

pub use basis::{simplex_tangent_basis, TangentBasis};
pub use bisection::project_cone_bisection;
pub use boxcone::{project_cone_l1_linf, BoxNorm};
pub use l2::project_cone_l2;
pub use simplex::{project_cone_simplex, project_simplex_euclidean};

use crate::lifted::LiftedPayoff;

/// Moreau complement: given `u` and `pi_c = pi_C(u)`, returns `pi_Cpolar(u) = u - pi_C(u)`.
///
/// The two parts are orthogonal: `<pi_c, result> = 0` up to rounding.
pub fn moreau_complement(u: &LiftedPayoff, pi_c: &LiftedPayoff) -> LiftedPayoff {
    u.sub(pi_c)
}
