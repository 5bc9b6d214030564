//! Parameter-free convex-concave saddle-point solving built on Blackwell
//! approachability.
//!
//! The crate provides:
//!
//! - exact orthogonal projections onto lifted cones `cone({kappa} x X)` for the
//!   simplex, lp balls, ellipsoidal confidence regions in the simplex, and a
//!   bisection fallback for generic sets ([`geometry`], [`domain`]);
//! - the conic regret minimizers (plain and thresholded) with polynomial weight
//!   schedules, plus regret matching on the simplex ([`regret`]);
//! - first-order baselines (mirror descent, follow-the-regularized-leader and
//!   their optimistic variants) with exact proximal oracles, theoretical step
//!   sizes, and grid tuning ([`baselines`]);
//! - the repeated-game engine with simultaneous and alternating protocols,
//!   weighted averaging, and duality-gap evaluation ([`framework`]);
//! - benchmark problem families: random matrix games, distributionally robust
//!   logistic regression, and the saddle-point form of discounted MDPs
//!   ([`problems`]);
//! - brute-force reference oracles used to validate the exact projections
//!   ([`oracle`]).

pub mod baselines;
pub mod domain;
pub mod error;
pub mod framework;
pub mod geometry;
pub mod lifted;
pub mod linalg;
pub mod oracle;
pub mod problems;
pub mod regret;
pub mod scalar;

pub use domain::{ConeKind, ConicDomain};
pub use error::{CoreError, Result};
pub use framework::{
    duality_gap, run_alternating, run_simultaneous, sp_cba_plus, weighted_average, CbaLearner,
    Learner, MetricKind, RmLearner, RunConfig, RunTrace, SaddleObjective,
};
pub use lifted::LiftedPayoff;
pub use regret::{CbaState, CbaVariant, RegretLedger, WeightSchedule};
