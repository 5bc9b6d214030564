//! Classical first-order comparison methods: online mirror descent,
//! follow-the-regularized-leader, and their optimistic variants, all in the
//! squared-Euclidean proximal setup.
//!
//! Updates are driven by exact proximal oracles
//! `prox(x', c, eta) = argmin_{x in X} <c, x> + (1/(2 eta)) ||x - x'||^2`:
//!
//! - l2 balls: closed form, a radial clip of `x' - eta*c`;
//! - the simplex: a Euclidean simplex projection of `x' - eta*c`;
//! - simplex-intersect-ball: the ball constraint is dualized with a multiplier
//!   `mu >= 0`; the inner problem is a simplex projection of the blended point
//!   `(eta/(eta*mu + 1)) * (x'/eta + mu*x0 - c)` and the concave dual is
//!   maximized by scalar search on `[0, mu_bar]`.
//!
//! Step sizes are either the theoretical constants (`sqrt(2)*Omega/(L*sqrt(T))`
//! for the plain methods, `1/(sqrt(8)*L)` and `1/(2L)` for the optimistic ones)
//! or a grid-tuned multiplier `alpha` with schedule `eta_t = alpha/sqrt(t+1)`
//! (plain) or `eta_t = alpha` (optimistic). Probe cost for tuning is charged to
//! the tuned method.

use std::time::Instant;

use crate::error::{CoreError, Result};
use crate::framework::{run_simultaneous, Learner, RunConfig, SaddleObjective};
use crate::geometry::project_simplex_euclidean;
use crate::linalg;
use crate::regret::WeightSchedule;
use crate::scalar::golden_section_max;

/// Default dual-search tolerance for the simplex-ball proximal oracle.
pub const PROX_DUAL_TOL: f64 = 1e-6;

/// Decision sets exposed through proximal oracles.
#[derive(Clone)]
pub enum ProxDomain {
    /// Probability simplex.
    Simplex { n: usize },
    /// `{x : ||x - center|| <= radius}`.
    Ball { center: Vec<f64>, radius: f64 },
    /// `{x in Delta(n) : ||x - center|| <= radius}`.
    SimplexBall {
        center: Vec<f64>,
        radius: f64,
        tol: f64,
    },
}

impl ProxDomain {
    pub fn dim(&self) -> usize {
        match self {
            ProxDomain::Simplex { n } => *n,
            ProxDomain::Ball { center, .. } | ProxDomain::SimplexBall { center, .. } => {
                center.len()
            }
        }
    }

    /// Maximum pairwise l2 distance over the set.
    pub fn diameter(&self) -> f64 {
        match self {
            ProxDomain::Simplex { .. } => std::f64::consts::SQRT_2,
            ProxDomain::Ball { radius, .. } => 2.0 * radius,
            // With the confidence region inside the simplex the slice is a full
            // ball of the given radius; cap at the simplex diameter regardless.
            ProxDomain::SimplexBall { radius, .. } => {
                (2.0 * radius).min(std::f64::consts::SQRT_2)
            }
        }
    }

    /// Starting point used by every method.
    pub fn initial(&self) -> Vec<f64> {
        match self {
            ProxDomain::Simplex { n } => vec![1.0 / *n as f64; *n],
            ProxDomain::Ball { center, .. } | ProxDomain::SimplexBall { center, .. } => {
                center.clone()
            }
        }
    }

    /// Constraint violation of a point, zero when feasible.
    pub fn feasibility_slack(&self, x: &[f64]) -> f64 {
        match self {
            ProxDomain::Simplex { .. } => {
                let neg: f64 = x.iter().map(|v| (-v).max(0.0)).sum();
                (x.iter().sum::<f64>() - 1.0).abs().max(neg)
            }
            ProxDomain::Ball { center, radius } => (linalg::dist2(x, center) - radius).max(0.0),
            ProxDomain::SimplexBall { center, radius, .. } => {
                let neg: f64 = x.iter().map(|v| (-v).max(0.0)).sum();
                let sum_dev = (x.iter().sum::<f64>() - 1.0).abs();
                neg.max(sum_dev)
                    .max((linalg::dist2(x, center) - radius).max(0.0))
            }
        }
    }

    /// `argmin_{x in X} <c, x> + (1/(2 eta)) ||x - x_prev||^2`.
    pub fn prox(&self, x_prev: &[f64], c: &[f64], eta: f64) -> Result<Vec<f64>> {
        if eta <= 0.0 {
            return Err(CoreError::domain(format!(
                "step size must be positive, got {eta}"
            )));
        }
        match self {
            ProxDomain::Simplex { .. } => {
                let mut z = x_prev.to_vec();
                linalg::axpy(&mut z, -eta, c);
                Ok(project_simplex_euclidean(&z))
            }
            ProxDomain::Ball { center, radius } => Ok(prox_ball(x_prev, c, eta, center, *radius)),
            ProxDomain::SimplexBall {
                center,
                radius,
                tol,
            } => prox_simplex_ball(x_prev, c, eta, center, *radius, *tol),
        }
    }
}

/// Closed-form proximal step on `{x : ||x - x0|| <= eps}`:
/// `x0 + eps * (x' - eta*c - x0) / max{eps, ||x' - eta*c - x0||}`.
pub fn prox_ball(x_prev: &[f64], c: &[f64], eta: f64, x0: &[f64], eps: f64) -> Vec<f64> {
    let mut shifted = x_prev.to_vec();
    linalg::axpy(&mut shifted, -eta, c);
    let diff = linalg::sub(&shifted, x0);
    let scale = eps / eps.max(linalg::norm2(&diff));
    let mut out = x0.to_vec();
    linalg::axpy(&mut out, scale, &diff);
    out
}

/// Proximal step on `Delta(m)` intersected with `||y - y0|| <= eps`, by
/// maximizing the concave dual of the ball constraint.
pub fn prox_simplex_ball(
    y_prev: &[f64],
    c: &[f64],
    eta: f64,
    y0: &[f64],
    eps: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    if eta <= 0.0 || eps <= 0.0 {
        return Err(CoreError::domain(
            "prox_simplex_ball needs eta > 0 and eps > 0",
        ));
    }
    if tol <= 0.0 {
        return Err(CoreError::domain("prox_simplex_ball needs tol > 0"));
    }
    let m = y0.len();
    if y_prev.len() != m || c.len() != m {
        return Err(CoreError::LengthMismatch {
            expected: m,
            got: y_prev.len().min(c.len()),
        });
    }

    // Inner solve for a fixed multiplier: a simplex projection of the blended
    // point (eta/(eta*mu + 1)) * (y'/eta + mu*y0 - c).
    let primal = |mu: f64| -> Vec<f64> {
        let blend = eta / (eta * mu + 1.0);
        let z: Vec<f64> = (0..m)
            .map(|i| blend * (y_prev[i] / eta + mu * y0[i] - c[i]))
            .collect();
        project_simplex_euclidean(&z)
    };
    let dual = |mu: f64| -> f64 {
        let y = primal(mu);
        -0.5 * eps * eps * mu
            + linalg::dot(c, &y)
            + linalg::dist2(&y, y_prev).powi(2) / (2.0 * eta)
            + 0.5 * mu * linalg::dist2(&y, y0).powi(2)
    };

    let y_at_zero = primal(0.0);
    if linalg::dist2(&y_at_zero, y0) <= eps {
        // Ball constraint slack at mu = 0.
        return Ok(y_at_zero);
    }
    let q0 = dual(0.0);
    let mu_bar = (2.0 / (eps * eps))
        * (linalg::dot(c, y0) + linalg::dist2(y0, y_prev).powi(2) / (2.0 * eta) - q0);
    if mu_bar <= 0.0 {
        return Ok(y_at_zero);
    }
    let (mu_star, _) = golden_section_max(dual, 0.0, mu_bar, tol);
    Ok(primal(mu_star))
}

/// Linear minimization `min_{y in Delta(m), ||y - y0|| <= eps} <c, y>` by the
/// same ball-multiplier dualization; returns the optimal value.
pub fn linear_min_simplex_ball(c: &[f64], y0: &[f64], eps: f64, tol: f64) -> Result<f64> {
    if eps <= 0.0 || tol <= 0.0 {
        return Err(CoreError::domain(
            "linear_min_simplex_ball needs eps > 0 and tol > 0",
        ));
    }
    let m = y0.len();
    if c.len() != m {
        return Err(CoreError::LengthMismatch {
            expected: m,
            got: c.len(),
        });
    }
    let primal = |mu: f64| -> Vec<f64> {
        if mu <= 0.0 {
            // Vertex minimizer of the bare linear program over the simplex.
            let mut best = 0;
            for i in 1..m {
                if c[i] < c[best] {
                    best = i;
                }
            }
            let mut y = vec![0.0; m];
            y[best] = 1.0;
            y
        } else {
            let z: Vec<f64> = (0..m).map(|i| y0[i] - c[i] / mu).collect();
            project_simplex_euclidean(&z)
        }
    };
    let dual = |mu: f64| -> f64 {
        let y = primal(mu);
        -0.5 * eps * eps * mu + linalg::dot(c, &y) + 0.5 * mu * linalg::dist2(&y, y0).powi(2)
    };
    let y_at_zero = primal(0.0);
    if linalg::dist2(&y_at_zero, y0) <= eps {
        return Ok(linalg::dot(c, &y_at_zero));
    }
    let q0 = dual(0.0);
    let mu_bar = (2.0 / (eps * eps)) * (linalg::dot(c, y0) - q0);
    if mu_bar <= 0.0 {
        return Ok(linalg::dot(c, &y_at_zero));
    }
    let (mu_star, q_star) = golden_section_max(dual, 0.0, mu_bar, tol);
    let _ = mu_star;
    Ok(q_star)
}

/// `max_{y in Delta(m), ||y - y0|| <= eps} <c, y>`.
pub fn linear_max_simplex_ball(c: &[f64], y0: &[f64], eps: f64, tol: f64) -> Result<f64> {
    let neg: Vec<f64> = c.iter().map(|v| -v).collect();
    Ok(-linear_min_simplex_ball(&neg, y0, eps, tol)?)
}

/// The four comparison methods.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineMethod {
    Omd,
    Ftrl,
    Oomd,
    Oftrl,
}

impl BaselineMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BaselineMethod::Omd => "omd",
            BaselineMethod::Ftrl => "ftrl",
            BaselineMethod::Oomd => "oomd",
            BaselineMethod::Oftrl => "oftrl",
        }
    }

    pub fn is_optimistic(&self) -> bool {
        matches!(self, BaselineMethod::Oomd | BaselineMethod::Oftrl)
    }
}

/// Step-size schedule: a fixed constant or `alpha / sqrt(t + 1)`.
#[derive(Clone, Copy, Debug)]
pub enum StepRule {
    Fixed(f64),
    InvSqrt(f64),
}

impl StepRule {
    pub fn eta(&self, t: usize) -> f64 {
        match self {
            StepRule::Fixed(a) => *a,
            StepRule::InvSqrt(a) => a / ((t as f64) + 1.0).sqrt(),
        }
    }
}

/// Theoretical fixed step size for a method.
///
/// Plain methods use `sqrt(2) * Omega / (L * sqrt(T))`; the optimistic variants
/// use `1/(sqrt(8) * L)` and `1/(2 * L)` and do not depend on `Omega` or `T`.
pub fn theoretical_step_size(
    method: BaselineMethod,
    omega: f64,
    l: f64,
    t_horizon: usize,
) -> Result<f64> {
    if l <= 0.0 {
        return Err(CoreError::domain(format!(
            "loss bound L must be positive, got {l}"
        )));
    }
    if t_horizon == 0 {
        return Err(CoreError::domain("horizon must be at least 1"));
    }
    Ok(match method {
        BaselineMethod::Omd | BaselineMethod::Ftrl => {
            std::f64::consts::SQRT_2 * omega / (l * (t_horizon as f64).sqrt())
        }
        BaselineMethod::Oomd => 1.0 / (8.0f64.sqrt() * l),
        BaselineMethod::Oftrl => 1.0 / (2.0 * l),
    })
}

/// One mirror-descent step: `prox(x_prev, f, eta)`.
pub fn omd_step(domain: &ProxDomain, x_prev: &[f64], f: &[f64], eta: f64) -> Result<Vec<f64>> {
    domain.prox(x_prev, f, eta)
}

/// One follow-the-regularized-leader step on the accumulated losses:
/// `argmin <loss_sum, x> + (1/eta) ||x||^2`, evaluated as a prox from the
/// origin with effective step `eta / 2`.
pub fn ftrl_step(domain: &ProxDomain, loss_sum: &[f64], eta: f64) -> Result<Vec<f64>> {
    if eta <= 0.0 {
        return Err(CoreError::domain(format!(
            "step size must be positive, got {eta}"
        )));
    }
    let origin = vec![0.0; domain.dim()];
    domain.prox(&origin, loss_sum, eta / 2.0)
}

/// The optimistic mirror-descent half step that produces the played decision
/// `z = prox(x_prev, predictor, eta)`; the second half step is [`omd_step`] on
/// the observed loss.
pub fn oomd_halfstep(
    domain: &ProxDomain,
    x_prev: &[f64],
    predictor: &[f64],
    eta: f64,
) -> Result<Vec<f64>> {
    domain.prox(x_prev, predictor, eta)
}

/// One optimistic FTRL step: `argmin <loss_sum + predictor, x> + (1/eta) ||x||^2`.
pub fn oftrl_step(
    domain: &ProxDomain,
    loss_sum: &[f64],
    predictor: &[f64],
    eta: f64,
) -> Result<Vec<f64>> {
    let shifted = linalg::add(loss_sum, predictor);
    ftrl_step(domain, &shifted, eta)
}

/// A first-order learner usable in the repeated-game framework.
///
/// The predictor for the optimistic variants is the last observed loss.
pub struct BaselineLearner {
    method: BaselineMethod,
    rule: StepRule,
    domain: ProxDomain,
    x: Vec<f64>,
    loss_sum: Vec<f64>,
    predictor: Vec<f64>,
    updates: usize,
}

impl BaselineLearner {
    pub fn new(method: BaselineMethod, rule: StepRule, domain: ProxDomain) -> Self {
        let x = domain.initial();
        let n = domain.dim();
        BaselineLearner {
            method,
            rule,
            domain,
            x,
            loss_sum: vec![0.0; n],
            predictor: vec![0.0; n],
            updates: 0,
        }
    }

    pub fn method(&self) -> BaselineMethod {
        self.method
    }

    fn eta_now(&self) -> f64 {
        self.rule.eta(self.updates + 1)
    }
}

impl Learner for BaselineLearner {
    fn choose(&mut self) -> Result<Vec<f64>> {
        match self.method {
            BaselineMethod::Omd | BaselineMethod::Ftrl | BaselineMethod::Oftrl => {
                Ok(self.x.clone())
            }
            BaselineMethod::Oomd => {
                oomd_halfstep(&self.domain, &self.x, &self.predictor, self.eta_now())
            }
        }
    }

    fn update(&mut self, loss: &[f64], _weight: f64) -> Result<()> {
        if !linalg::all_finite(loss) {
            return Err(CoreError::NonFinite("baseline loss"));
        }
        let eta = self.eta_now();
        match self.method {
            BaselineMethod::Omd => {
                self.x = omd_step(&self.domain, &self.x, loss, eta)?;
            }
            BaselineMethod::Ftrl => {
                linalg::axpy(&mut self.loss_sum, 1.0, loss);
                self.x = ftrl_step(&self.domain, &self.loss_sum, eta)?;
            }
            BaselineMethod::Oomd => {
                self.x = omd_step(&self.domain, &self.x, loss, eta)?;
                self.predictor = loss.to_vec();
            }
            BaselineMethod::Oftrl => {
                linalg::axpy(&mut self.loss_sum, 1.0, loss);
                self.predictor = loss.to_vec();
                self.x = oftrl_step(&self.domain, &self.loss_sum, &self.predictor, eta)?;
            }
        }
        self.updates += 1;
        Ok(())
    }
}

/// Builds the two players' learners for a method with explicit step rules.
pub fn baseline_pair(
    problem: &dyn SaddleObjective,
    method: BaselineMethod,
    rule_x: StepRule,
    rule_y: StepRule,
) -> (BaselineLearner, BaselineLearner) {
    (
        BaselineLearner::new(method, rule_x, problem.prox_domain_x()),
        BaselineLearner::new(method, rule_y, problem.prox_domain_y()),
    )
}

/// Learner pair with the theoretical fixed step sizes for horizon `t_horizon`.
pub fn theoretical_pair(
    problem: &dyn SaddleObjective,
    method: BaselineMethod,
    t_horizon: usize,
) -> Result<(BaselineLearner, BaselineLearner)> {
    let (lx, ly) = problem.lipschitz_bounds();
    let eta_x = theoretical_step_size(method, problem.prox_domain_x().diameter(), lx, t_horizon)?;
    let eta_y = theoretical_step_size(method, problem.prox_domain_y().diameter(), ly, t_horizon)?;
    Ok(baseline_pair(
        problem,
        method,
        StepRule::Fixed(eta_x),
        StepRule::Fixed(eta_y),
    ))
}

/// Outcome of step-size tuning; the probe cost is charged to the tuned method.
#[derive(Clone, Copy, Debug)]
pub struct TuneOutcome {
    pub alpha: f64,
    pub probe_iterations: usize,
    pub probe_seconds: f64,
}

/// The multiplier grid from the tuning protocol.
pub const TUNE_GRID: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

fn rule_for(method: BaselineMethod, alpha: f64) -> StepRule {
    if method.is_optimistic() {
        StepRule::Fixed(alpha)
    } else {
        StepRule::InvSqrt(alpha)
    }
}

/// Grid-tunes the step-size multiplier on short probe runs.
///
/// Each candidate `alpha` drives both players for `t_probe` iterations; the
/// multiplier with the smallest metric after the probe wins, first on ties.
pub fn tune_step_size(
    problem: &dyn SaddleObjective,
    method: BaselineMethod,
    t_probe: usize,
    grid: &[f64],
) -> Result<TuneOutcome> {
    if t_probe == 0 || grid.is_empty() {
        return Err(CoreError::domain("tuning needs t_probe >= 1 and a grid"));
    }
    let started = Instant::now();
    let cfg = RunConfig {
        iterations: t_probe,
        schedule: WeightSchedule::uniform(),
        metric_cadence: t_probe,
        timing: false,
        time_budget: None,
    };
    let mut best_alpha = grid[0];
    let mut best_metric = f64::INFINITY;
    for &alpha in grid {
        let (mut lx, mut ly) = baseline_pair(
            problem,
            method,
            rule_for(method, alpha),
            rule_for(method, alpha),
        );
        let trace = run_simultaneous(problem, &mut lx, &mut ly, &cfg)?;
        let metric = trace
            .metrics
            .last()
            .map(|m| m.value)
            .unwrap_or(f64::INFINITY);
        if metric.is_finite() && metric < best_metric {
            best_metric = metric;
            best_alpha = alpha;
        }
    }
    Ok(TuneOutcome {
        alpha: best_alpha,
        probe_iterations: grid.len() * t_probe,
        probe_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Learner pair with grid-tuned step sizes; returns the tuning outcome so the
/// caller can charge the probe cost.
pub fn tuned_pair(
    problem: &dyn SaddleObjective,
    method: BaselineMethod,
    t_probe: usize,
    grid: &[f64],
) -> Result<(TuneOutcome, (BaselineLearner, BaselineLearner))> {
    let outcome = tune_step_size(problem, method, t_probe, grid)?;
    let pair = baseline_pair(
        problem,
        method,
        rule_for(method, outcome.alpha),
        rule_for(method, outcome.alpha),
    );
    Ok((outcome, pair))
}

/// Loss-norm bounds for the distributionally robust logistic regression game:
///
/// `L_x = sum_{i,j} |b_i a_{ij}| + mu * m * (||x0||_1 + sqrt(n) * eps_x)` and
/// `L_y = sqrt(sum_i log(1 + exp(|b_i| * eps_x * ||a_i||_2))^2)`.
pub fn dro_lipschitz_bounds(
    features: &[Vec<f64>],
    labels: &[f64],
    mu: f64,
    eps_x: f64,
    x0: &[f64],
) -> (f64, f64) {
    let m = features.len();
    let n = x0.len();
    let mut abs_sum = 0.0;
    for (a, &b) in features.iter().zip(labels) {
        for &aij in a {
            abs_sum += (b * aij).abs();
        }
    }
    let l_x = abs_sum + mu * m as f64 * (linalg::norm1(x0) + (n as f64).sqrt() * eps_x);

    let mut sq = 0.0;
    for (a, &b) in features.iter().zip(labels) {
        let bound = (1.0 + (b.abs() * eps_x * linalg::norm2(a)).exp()).ln();
        sq += bound * bound;
    }
    (l_x, sq.sqrt())
}

/// Gradient-norm bounds for the discounted-MDP saddle point:
/// `L_v = 2` and `L_mu = ||r||_2 + (sqrt(n) * r_inf / (1 - lambda)) * A * (lambda * n + 1)`.
pub fn mdp_lipschitz_bounds(
    rewards: &[f64],
    lambda: f64,
    n: usize,
    actions: usize,
) -> Result<(f64, f64)> {
    if !(0.0 < lambda && lambda < 1.0) {
        return Err(CoreError::domain(format!(
            "discount must lie in (0, 1), got {lambda}"
        )));
    }
    let r_inf = rewards.iter().cloned().fold(0.0, f64::max);
    let l_mu = linalg::norm2(rewards)
        + ((n as f64).sqrt() * r_inf / (1.0 - lambda))
            * (actions as f64)
            * (lambda * n as f64 + 1.0);
    Ok((2.0, l_mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(center: Vec<f64>, radius: f64) -> ProxDomain {
        ProxDomain::Ball { center, radius }
    }

    #[test]
    fn omd_zero_loss_is_identity() {
        let dom = ball(vec![0.0, 0.0], 1.0);
        let x = vec![0.3, -0.2];
        let next = omd_step(&dom, &x, &[0.0, 0.0], 0.5).unwrap();
        assert!(linalg::dist2(&next, &x) < 1e-14);
    }

    #[test]
    fn omd_interior_step_is_plain_gradient() {
        let dom = ball(vec![0.0, 0.0], 10.0);
        let x = vec![0.3, -0.2];
        let f = vec![1.0, 2.0];
        let next = omd_step(&dom, &x, &f, 0.1).unwrap();
        assert!(linalg::dist2(&next, &[0.2, -0.4]) < 1e-14);
    }

    #[test]
    fn omd_boundary_step_clips_radially() {
        let x0 = vec![1.0, 1.0];
        let dom = ball(x0.clone(), 0.5);
        let x = vec![1.5, 1.0];
        let f = vec![-10.0, 0.0];
        let next = omd_step(&dom, &x, &f, 1.0).unwrap();
        let direct = prox_ball(&x, &f, 1.0, &x0, 0.5);
        assert!(linalg::dist2(&next, &direct) < 1e-14);
        assert!((linalg::dist2(&next, &x0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn prox_ball_matches_projected_gradient_qp() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let n = 4;
            let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let eps = rng.gen_range(0.1..2.0);
            let x_prev: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let eta = rng.gen_range(0.05..2.0);
            let got = prox_ball(&x_prev, &c, eta, &x0, eps);

            // Independent projected-gradient solve of the same QP.
            let mut z = x0.clone();
            let step = eta / (1.0 + eta);
            for _ in 0..20_000 {
                let grad: Vec<f64> = (0..n).map(|i| c[i] + (z[i] - x_prev[i]) / eta).collect();
                linalg::axpy(&mut z, -step, &grad);
                let d = linalg::sub(&z, &x0);
                let nrm = linalg::norm2(&d);
                if nrm > eps {
                    z = x0.clone();
                    linalg::axpy(&mut z, eps / nrm, &d);
                }
            }
            assert!(linalg::dist2(&got, &z) < 1e-8, "QP oracle disagreement");
        }
    }

    #[test]
    fn ftrl_zero_losses_gives_regularizer_minimizer() {
        let dom = ball(vec![2.0, 0.0], 1.0);
        let x = ftrl_step(&dom, &[0.0, 0.0], 1.0).unwrap();
        // argmin ||x||^2 over the ball is the point closest to the origin.
        assert!(linalg::dist2(&x, &[1.0, 0.0]) < 1e-12);
    }

    #[test]
    fn ftrl_single_loss_equals_omd_from_origin_with_halved_step() {
        let dom = ball(vec![0.5, 0.5], 1.0);
        let f = vec![0.7, -0.3];
        let eta = 0.8;
        let ftrl = ftrl_step(&dom, &f, eta).unwrap();
        let origin = vec![0.0, 0.0];
        let omd = omd_step(&dom, &origin, &f, eta / 2.0).unwrap();
        assert!(linalg::dist2(&ftrl, &omd) < 1e-14);
    }

    #[test]
    fn oomd_predictor_identities() {
        let dom = ball(vec![0.1, 0.1], 1.0);
        // Predictor zero: the played point is the current iterate.
        let mut learner =
            BaselineLearner::new(BaselineMethod::Oomd, StepRule::Fixed(0.3), dom.clone());
        let z0 = learner.choose().unwrap();
        assert!(linalg::dist2(&z0, &[0.1, 0.1]) < 1e-14);

        // Predictor equal to the incoming loss: the half step lands exactly on
        // the post-update iterate (both prox from the same base point).
        let x = vec![0.2, -0.3];
        let f = vec![0.5, -0.25];
        let z = oomd_halfstep(&dom, &x, &f, 0.3).unwrap();
        let x_next = omd_step(&dom, &x, &f, 0.3).unwrap();
        assert!(linalg::dist2(&z, &x_next) < 1e-14);
    }

    #[test]
    fn oftrl_with_zero_predictor_reduces_to_ftrl() {
        let dom = ball(vec![0.0, 0.0], 2.0);
        let sum = vec![0.4, 0.4];
        let eta = 0.5;
        let a = oftrl_step(&dom, &sum, &[0.0, 0.0], eta).unwrap();
        let b = ftrl_step(&dom, &sum, eta).unwrap();
        assert!(linalg::dist2(&a, &b) < 1e-14);
    }

    #[test]
    fn prox_simplex_ball_with_slack_ball_is_plain_simplex_prox() {
        let y0 = vec![1.0 / 3.0; 3];
        // Radius beyond the simplex diameter: constraint never binds.
        let res = prox_simplex_ball(&[0.5, 0.3, 0.2], &[1.0, -1.0, 0.0], 0.2, &y0, 5.0, 1e-8)
            .unwrap();
        let dom = ProxDomain::Simplex { n: 3 };
        let plain = dom.prox(&[0.5, 0.3, 0.2], &[1.0, -1.0, 0.0], 0.2).unwrap();
        assert!(linalg::dist2(&res, &plain) < 1e-10);
    }

    #[test]
    fn prox_simplex_ball_fixed_point_at_center() {
        let y0 = vec![0.25, 0.25, 0.5];
        let res = prox_simplex_ball(&y0, &[0.0, 0.0, 0.0], 1.0, &y0, 0.1, 1e-8).unwrap();
        assert!(linalg::dist2(&res, &y0) < 1e-10);
    }

    #[test]
    fn prox_simplex_ball_matches_grid_oracle() {
        use crate::oracle::prox_simplex_ball_grid_oracle;
        let y0 = vec![1.0 / 3.0; 3];
        let eps = 0.15;
        let y_prev = vec![0.5, 0.25, 0.25];
        let c = vec![0.8, -0.3, 0.1];
        let eta = 0.7;
        let got = prox_simplex_ball(&y_prev, &c, eta, &y0, eps, 1e-8).unwrap();
        let grid = prox_simplex_ball_grid_oracle(&y_prev, &c, eta, &y0, eps);
        // Point agreement at the grid resolution scale, and the dual solution
        // must be at least as good as the best grid point.
        assert!(linalg::dist2(&got, &grid) < 5e-4, "grid oracle disagreement");
        let value = |y: &[f64]| -> f64 {
            linalg::dot(&c, y) + linalg::dist2(y, &y_prev).powi(2) / (2.0 * eta)
        };
        assert!(value(&got) <= value(&grid) + 1e-9);
    }

    #[test]
    fn prox_simplex_ball_dual_is_concave_along_interval() {
        let y0 = vec![1.0 / 3.0; 3];
        let eps = 0.1;
        let y_prev = vec![0.6, 0.2, 0.2];
        let c = vec![1.0, 0.0, -1.0];
        let eta = 0.5;
        let dual = |mu: f64| -> f64 {
            let blend = eta / (eta * mu + 1.0);
            let z: Vec<f64> = (0..3)
                .map(|i| blend * (y_prev[i] / eta + mu * y0[i] - c[i]))
                .collect();
            let y = project_simplex_euclidean(&z);
            -0.5 * eps * eps * mu
                + linalg::dot(&c, &y)
                + linalg::dist2(&y, &y_prev).powi(2) / (2.0 * eta)
                + 0.5 * mu * linalg::dist2(&y, &y0).powi(2)
        };
        // Three-point concavity checks along the search interval.
        for (a, b) in [(0.0, 2.0), (1.0, 5.0), (0.5, 9.0)] {
            let mid = 0.5 * (a + b);
            assert!(dual(mid) >= 0.5 * (dual(a) + dual(b)) - 1e-9);
        }
    }

    #[test]
    fn linear_max_simplex_ball_matches_grid_oracle() {
        use crate::oracle::linear_max_simplex_ball_grid_oracle;
        let y0 = vec![1.0 / 3.0; 3];
        let eps = 0.2;
        let c = vec![0.9, -0.4, 0.2];
        let got = linear_max_simplex_ball(&c, &y0, eps, 1e-9).unwrap();
        let grid = linear_max_simplex_ball_grid_oracle(&c, &y0, eps);
        assert!((got - grid).abs() < 2e-4);
    }

    #[test]
    fn theoretical_step_sizes_match_formulas() {
        let eta = theoretical_step_size(BaselineMethod::Omd, 2.0, 1.0, 100).unwrap();
        assert!((eta - 2.0 * std::f64::consts::SQRT_2 / 10.0).abs() < 1e-15);
        let eta = theoretical_step_size(BaselineMethod::Oomd, 0.0, 2.0, 1).unwrap();
        assert!((eta - 1.0 / (2.0 * 8.0f64.sqrt())).abs() < 1e-15);
        let eta = theoretical_step_size(BaselineMethod::Oftrl, 0.0, 4.0, 1).unwrap();
        assert!((eta - 0.125).abs() < 1e-15);
        assert!(theoretical_step_size(BaselineMethod::Omd, 1.0, 0.0, 10).is_err());
    }

    #[test]
    fn dro_bounds_match_hand_cases() {
        // Single datapoint a = (1, 0), b = 1, mu = 0.
        let (lx, _) = dro_lipschitz_bounds(&[vec![1.0, 0.0]], &[1.0], 0.0, 1.0, &[0.0, 0.0]);
        assert!((lx - 1.0).abs() < 1e-15);

        // Zero features leave only the regularizer term.
        let x0 = vec![0.5, 0.5];
        let (lx, ly) = dro_lipschitz_bounds(&[vec![0.0, 0.0]], &[1.0], 0.1, 2.0, &x0);
        let expect = 0.1 * 1.0 * (1.0 + 2.0f64.sqrt() * 2.0);
        assert!((lx - expect).abs() < 1e-15);
        // log(1 + exp(0)) = ln 2 for the zero row.
        assert!((ly - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn mdp_bounds_match_hand_cases() {
        let (lv, lmu) = mdp_lipschitz_bounds(&[0.0, 0.0], 0.5, 2, 1).unwrap();
        assert_eq!(lv, 2.0);
        assert_eq!(lmu, 0.0);

        // n = 2, A = 1, lambda = 0.5, r = (1, 1): 5 * sqrt(2).
        let (lv, lmu) = mdp_lipschitz_bounds(&[1.0, 1.0], 0.5, 2, 1).unwrap();
        assert_eq!(lv, 2.0);
        assert!((lmu - 5.0 * std::f64::consts::SQRT_2).abs() < 1e-12);

        assert!(mdp_lipschitz_bounds(&[1.0], 1.0, 1, 1).is_err());
    }

    #[test]
    fn feasibility_holds_across_methods_and_domains() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let domains = vec![
            ProxDomain::Simplex { n: 4 },
            ball(vec![0.5, -0.5, 0.0, 1.0], 0.75),
            ProxDomain::SimplexBall {
                center: vec![0.25; 4],
                radius: 0.2,
                tol: 1e-7,
            },
        ];
        for dom in &domains {
            for method in [
                BaselineMethod::Omd,
                BaselineMethod::Ftrl,
                BaselineMethod::Oomd,
                BaselineMethod::Oftrl,
            ] {
                let mut learner =
                    BaselineLearner::new(method, StepRule::InvSqrt(0.5), dom.clone());
                for _ in 0..250 {
                    let z = learner.choose().unwrap();
                    assert!(dom.feasibility_slack(&z) < 1e-7);
                    let f: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    learner.update(&f, 1.0).unwrap();
                    assert!(dom.feasibility_slack(&learner.x) < 1e-7);
                }
            }
        }
    }

    #[test]
    fn prox_ball_variational_inequality() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        let x0 = vec![0.0, 0.0, 0.0];
        let eps = 1.0;
        for _ in 0..100 {
            let x_prev: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let c: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let eta = rng.gen_range(0.1..1.0);
            let star = prox_ball(&x_prev, &c, eta, &x0, eps);
            // <c + (x* - x')/eta, x - x*> >= 0 for sampled feasible x.
            for _ in 0..20 {
                let mut x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let nrm = linalg::norm2(&x);
                if nrm > eps {
                    x = linalg::scale(&x, eps / nrm);
                }
                let grad: Vec<f64> = (0..3)
                    .map(|i| c[i] + (star[i] - x_prev[i]) / eta)
                    .collect();
                let gap = linalg::dot(&grad, &linalg::sub(&x, &star));
                assert!(gap >= -1e-8);
            }
        }
    }

    #[test]
    fn invalid_steps_are_rejected() {
        let dom = ball(vec![0.0], 1.0);
        assert!(omd_step(&dom, &[0.0], &[1.0], 0.0).is_err());
        assert!(ftrl_step(&dom, &[1.0], -1.0).is_err());
        assert!(prox_simplex_ball(&[1.0], &[0.0], 1.0, &[1.0], 0.1, 0.0).is_err());
    }
}
