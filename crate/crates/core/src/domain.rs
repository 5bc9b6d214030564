//! Decision-set descriptions for the conic learners.
//!
//! A [`ConicDomain`] bundles a decision set `X` with everything the learners
//! need: the lift scale `kappa = max_{x in X} ||x||_2`, the projection onto
//! `C = cone({kappa} x X)`, a linear-minimization oracle, and a default decision
//! for degenerate aggregates.
//!
//! Two kinds reduce to an internal unit l2 ball before the cone machinery runs:
//! the ellipsoidal confidence region in the simplex (through the tangent-space
//! basis `V`) and the off-center l2 ball (through plain recentering, the identity-
//! basis special case of the same reduction). For those, the learner operates in
//! "internal" coordinates; losses are pulled back by `V^T` (resp. unchanged) and
//! decisions are pushed forward affinely. For every other kind the internal and
//! external coordinates coincide.

use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::geometry::{
    project_cone_bisection, project_cone_l1_linf, project_cone_l2, project_cone_simplex,
    simplex_tangent_basis, BoxNorm, TangentBasis,
};
use crate::lifted::LiftedPayoff;
use crate::linalg;

/// Euclidean projector used by the generic bisection kind.
pub type ProjectorFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
/// Linear-minimization oracle `c -> argmin_{x in X} <c, x>`.
pub type LinMinFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Aggregates with cone-axis part at or below this are treated as the zero
/// element of the cone and fall back to the domain default decision.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// The supported decision sets.
#[derive(Clone)]
pub enum ConeKind {
    /// Probability simplex `Delta(n)`, `kappa = 1`.
    Simplex { n: usize },
    /// Unit l1 ball, `kappa = 1`.
    L1Ball { n: usize },
    /// l2 ball of the given radius centered at the origin, `kappa = radius`.
    L2Ball { n: usize, radius: f64 },
    /// Unit l-infinity ball, `kappa = sqrt(n)`.
    LInfBall { n: usize },
    /// `{x in Delta(n) : ||x - center|| <= radius}` with the affine slice fully
    /// inside the simplex; handled on the unit ball of `R^(n-1)`.
    EllipsoidSimplex {
        center: Vec<f64>,
        radius: f64,
        basis: TangentBasis,
    },
    /// l2 ball centered away from the origin; handled on the unit ball of `R^n`.
    ShiftedBall { center: Vec<f64>, radius: f64 },
    /// Any compact convex set reachable through a Euclidean projector; the cone
    /// projection falls back to scalar search.
    GenericBisection {
        n: usize,
        kappa: f64,
        tol: f64,
        proj: Arc<ProjectorFn>,
        lin_min: Arc<LinMinFn>,
        default: Vec<f64>,
    },
}

/// A decision set together with its conic-learner plumbing.
#[derive(Clone)]
pub struct ConicDomain {
    kind: ConeKind,
}

impl ConicDomain {
    pub fn simplex(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::domain("simplex dimension must be positive"));
        }
        Ok(ConicDomain {
            kind: ConeKind::Simplex { n },
        })
    }

    pub fn l1_ball(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::domain("l1 ball dimension must be positive"));
        }
        Ok(ConicDomain {
            kind: ConeKind::L1Ball { n },
        })
    }

    pub fn l2_ball(n: usize, radius: f64) -> Result<Self> {
        if n == 0 || radius <= 0.0 {
            return Err(CoreError::domain(
                "l2 ball needs positive dimension and radius",
            ));
        }
        Ok(ConicDomain {
            kind: ConeKind::L2Ball { n, radius },
        })
    }

    pub fn linf_ball(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::domain("linf ball dimension must be positive"));
        }
        Ok(ConicDomain {
            kind: ConeKind::LInfBall { n },
        })
    }

    /// Ellipsoidal confidence region `{x in Delta(n) : ||x - center|| <= radius}`.
    ///
    /// Requires `min_i center_i >= radius`, a sufficient condition for the affine
    /// slice `{e^T x = 1, ||x - center|| <= radius}` to sit inside the simplex.
    pub fn ellipsoid_simplex(center: Vec<f64>, radius: f64) -> Result<Self> {
        let n = center.len();
        if n < 2 {
            return Err(CoreError::domain("ellipsoid region needs n >= 2"));
        }
        if radius <= 0.0 {
            return Err(CoreError::domain("ellipsoid radius must be positive"));
        }
        if !linalg::all_finite(&center) {
            return Err(CoreError::NonFinite("ellipsoid center"));
        }
        if (center.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(CoreError::domain("ellipsoid center must lie on the simplex"));
        }
        let min_coord = center.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_coord < radius {
            return Err(CoreError::domain(format!(
                "containment violated: min center coordinate {min_coord} < radius {radius}"
            )));
        }
        let basis = simplex_tangent_basis(n)?;
        Ok(ConicDomain {
            kind: ConeKind::EllipsoidSimplex {
                center,
                radius,
                basis,
            },
        })
    }

    /// l2 ball `{x : ||x - center|| <= radius}` with arbitrary center.
    pub fn shifted_ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || radius <= 0.0 {
            return Err(CoreError::domain(
                "shifted ball needs positive dimension and radius",
            ));
        }
        if !linalg::all_finite(&center) {
            return Err(CoreError::NonFinite("ball center"));
        }
        Ok(ConicDomain {
            kind: ConeKind::ShiftedBall { center, radius },
        })
    }

    /// Generic set through a projector; cone projections use scalar search.
    pub fn generic_bisection(
        n: usize,
        kappa: f64,
        tol: f64,
        proj: Arc<ProjectorFn>,
        lin_min: Arc<LinMinFn>,
        default: Vec<f64>,
    ) -> Result<Self> {
        if kappa <= 0.0 || tol <= 0.0 {
            return Err(CoreError::domain("generic domain needs kappa > 0, tol > 0"));
        }
        if default.len() != n {
            return Err(CoreError::LengthMismatch {
                expected: n,
                got: default.len(),
            });
        }
        Ok(ConicDomain {
            kind: ConeKind::GenericBisection {
                n,
                kappa,
                tol,
                proj,
                lin_min,
                default,
            },
        })
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    /// Dimension of the ambient decision space.
    pub fn external_dim(&self) -> usize {
        match &self.kind {
            ConeKind::Simplex { n }
            | ConeKind::L1Ball { n }
            | ConeKind::L2Ball { n, .. }
            | ConeKind::LInfBall { n }
            | ConeKind::GenericBisection { n, .. } => *n,
            ConeKind::EllipsoidSimplex { center, .. } | ConeKind::ShiftedBall { center, .. } => {
                center.len()
            }
        }
    }

    /// Dimension the cone learner operates in.
    pub fn internal_dim(&self) -> usize {
        match &self.kind {
            ConeKind::EllipsoidSimplex { basis, .. } => basis.reduced_dim(),
            _ => self.external_dim(),
        }
    }

    /// Lift scale `kappa` of the internal decision set.
    pub fn kappa(&self) -> f64 {
        match &self.kind {
            ConeKind::Simplex { .. } | ConeKind::L1Ball { .. } => 1.0,
            ConeKind::L2Ball { radius, .. } => *radius,
            ConeKind::LInfBall { n } => (*n as f64).sqrt(),
            // Internal unit balls.
            ConeKind::EllipsoidSimplex { .. } | ConeKind::ShiftedBall { .. } => 1.0,
            ConeKind::GenericBisection { kappa, .. } => *kappa,
        }
    }

    /// Scale factor mapping internal loss geometry to external objective changes
    /// (the affine-reduction radius, or 1 when no reduction happens).
    pub fn decision_scale(&self) -> f64 {
        match &self.kind {
            ConeKind::EllipsoidSimplex { radius, .. } | ConeKind::ShiftedBall { radius, .. } => {
                *radius
            }
            _ => 1.0,
        }
    }

    /// Default internal decision used for degenerate aggregates.
    pub fn default_internal(&self) -> Vec<f64> {
        match &self.kind {
            ConeKind::Simplex { n } => vec![1.0 / *n as f64; *n],
            ConeKind::L1Ball { n } | ConeKind::L2Ball { n, .. } | ConeKind::LInfBall { n } => {
                vec![0.0; *n]
            }
            ConeKind::EllipsoidSimplex { basis, .. } => vec![0.0; basis.reduced_dim()],
            ConeKind::ShiftedBall { center, .. } => vec![0.0; center.len()],
            ConeKind::GenericBisection { default, .. } => default.clone(),
        }
    }

    /// Default decision in ambient coordinates.
    pub fn default_decision(&self) -> Vec<f64> {
        self.to_external_decision(&self.default_internal())
    }

    /// Pulls an ambient loss back into internal coordinates.
    pub fn to_internal_loss(&self, f: &[f64]) -> Vec<f64> {
        match &self.kind {
            ConeKind::EllipsoidSimplex { basis, .. } => basis.transpose_mul(f),
            _ => f.to_vec(),
        }
    }

    /// Pushes an internal decision forward into ambient coordinates.
    pub fn to_external_decision(&self, s: &[f64]) -> Vec<f64> {
        match &self.kind {
            ConeKind::EllipsoidSimplex {
                center,
                radius,
                basis,
            } => {
                let mut x = center.clone();
                linalg::axpy(&mut x, *radius, &basis.mul(s));
                x
            }
            ConeKind::ShiftedBall { center, radius } => {
                let mut x = center.clone();
                linalg::axpy(&mut x, *radius, s);
                x
            }
            _ => s.to_vec(),
        }
    }

    /// Projects a lifted vector onto the internal cone `C = cone({kappa} x X_int)`.
    pub fn project_cone(&self, u: &LiftedPayoff) -> Result<LiftedPayoff> {
        match &self.kind {
            ConeKind::Simplex { .. } => project_cone_simplex(u),
            ConeKind::L1Ball { .. } => project_cone_l1_linf(u, BoxNorm::L1),
            ConeKind::LInfBall { .. } => project_cone_l1_linf(u, BoxNorm::LInf),
            ConeKind::L2Ball { .. }
            | ConeKind::EllipsoidSimplex { .. }
            | ConeKind::ShiftedBall { .. } => project_cone_l2(u, 1.0),
            ConeKind::GenericBisection {
                kappa, tol, proj, ..
            } => project_cone_bisection(u, &**proj, *kappa, *tol),
        }
    }

    /// Distance from `u` to the polar cone: `||pi_C(u)||_2`.
    pub fn distance_to_polar(&self, u: &LiftedPayoff) -> Result<f64> {
        Ok(self.project_cone(u)?.norm2())
    }

    /// Extracts the internal decision `(kappa / tu) * hu` from a cone member,
    /// falling back to the default decision when the aggregate is degenerate.
    pub fn extract_decision(&self, u: &LiftedPayoff) -> Vec<f64> {
        if u.tilde <= DEGENERACY_EPS {
            return self.default_internal();
        }
        linalg::scale(&u.hat, self.kappa() / u.tilde)
    }

    /// `argmin_{x in X} <c, x>` in ambient coordinates.
    pub fn linear_min(&self, c: &[f64]) -> Vec<f64> {
        match &self.kind {
            ConeKind::Simplex { n } => {
                let mut best = 0;
                for i in 1..*n {
                    if c[i] < c[best] {
                        best = i;
                    }
                }
                let mut x = vec![0.0; *n];
                x[best] = 1.0;
                x
            }
            ConeKind::L1Ball { n } => {
                let mut best = 0;
                for i in 1..*n {
                    if c[i].abs() > c[best].abs() {
                        best = i;
                    }
                }
                let mut x = vec![0.0; *n];
                if c[best] != 0.0 {
                    x[best] = -c[best].signum();
                }
                x
            }
            ConeKind::L2Ball { n, radius } => {
                let nrm = linalg::norm2(c);
                if nrm == 0.0 {
                    vec![0.0; *n]
                } else {
                    linalg::scale(c, -radius / nrm)
                }
            }
            ConeKind::LInfBall { n } => {
                let mut x = vec![0.0; *n];
                for (xi, &ci) in x.iter_mut().zip(c) {
                    if ci != 0.0 {
                        *xi = -ci.signum();
                    }
                }
                x
            }
            ConeKind::EllipsoidSimplex {
                center,
                radius,
                basis,
            } => {
                let ct = basis.transpose_mul(c);
                let nrm = linalg::norm2(&ct);
                let mut x = center.clone();
                if nrm > 0.0 {
                    linalg::axpy(&mut x, -radius / nrm, &basis.mul(&ct));
                }
                x
            }
            ConeKind::ShiftedBall { center, radius } => {
                let nrm = linalg::norm2(c);
                let mut x = center.clone();
                if nrm > 0.0 {
                    linalg::axpy(&mut x, -radius / nrm, c);
                }
                x
            }
            ConeKind::GenericBisection { lin_min, .. } => lin_min(c),
        }
    }

    /// Constraint violation of an ambient point, zero when feasible.
    pub fn feasibility_slack(&self, x: &[f64]) -> f64 {
        match &self.kind {
            ConeKind::Simplex { .. } => {
                let neg: f64 = x.iter().map(|v| (-v).max(0.0)).sum();
                (x.iter().sum::<f64>() - 1.0).abs().max(neg)
            }
            ConeKind::L1Ball { .. } => (linalg::norm1(x) - 1.0).max(0.0),
            ConeKind::L2Ball { radius, .. } => (linalg::norm2(x) - radius).max(0.0),
            ConeKind::LInfBall { .. } => (linalg::norm_inf(x) - 1.0).max(0.0),
            ConeKind::EllipsoidSimplex { center, radius, .. } => {
                let neg: f64 = x.iter().map(|v| (-v).max(0.0)).sum();
                let sum_dev = (x.iter().sum::<f64>() - 1.0).abs();
                let ball = (linalg::dist2(x, center) - radius).max(0.0);
                neg.max(sum_dev).max(ball)
            }
            ConeKind::ShiftedBall { center, radius } => {
                (linalg::dist2(x, center) - radius).max(0.0)
            }
            ConeKind::GenericBisection { proj, .. } => linalg::dist2(x, &proj(x)),
        }
    }

    /// Largest violation when interpreting `u` as `alpha * (kappa, x)` with
    /// `alpha >= 0` and `x in X_int`; diagnostic for membership tests.
    pub fn cone_membership_slack(&self, u: &LiftedPayoff) -> f64 {
        if u.tilde < -DEGENERACY_EPS {
            return -u.tilde;
        }
        if u.tilde <= DEGENERACY_EPS {
            return linalg::norm2(&u.hat);
        }
        let x = linalg::scale(&u.hat, self.kappa() / u.tilde);
        self.internal_feasibility_slack(&x)
    }

    fn internal_feasibility_slack(&self, x: &[f64]) -> f64 {
        match &self.kind {
            // Internal sets of the reduced kinds are unit balls.
            ConeKind::EllipsoidSimplex { .. } | ConeKind::ShiftedBall { .. } => {
                (linalg::norm2(x) - 1.0).max(0.0)
            }
            _ => self.feasibility_slack(x),
        }
    }
}
