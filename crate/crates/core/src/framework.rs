//! The repeated-game engine for convex-concave saddle points.
//!
//! Both players run regret minimizers; the duality gap of the weighted average
//! iterates is bounded by the sum of their weighted average regrets. Two
//! protocols are provided:
//!
//! - simultaneous: both players choose, then both observe subgradients at the
//!   joint decision;
//! - alternating: the second player sees the first player's current decision
//!   before updating, which strictly improves each iteration when the objective
//!   is linear in the first argument.
//!
//! The solver preset combines the thresholded conic learner with uniform payoff
//! weights, linear decision weights, and alternation.
//!
//! Sign convention: the engine is loss-minimizing everywhere. The `y` player
//! maximizes, so its learner is fed the negated subgradient `-g`.

use std::time::Instant;

use crate::baselines::ProxDomain;
use crate::domain::ConicDomain;
use crate::error::{CoreError, Result};
use crate::lifted::LiftedPayoff;
use crate::linalg;
use crate::regret::{rm_plus_step, rm_step, weighted_regret, CbaState, CbaVariant, WeightSchedule};

/// What the problem's convergence metric measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    /// Exact duality gap `max_y F(x, y) - min_x F(x, y)`.
    DualityGap,
    /// Worst-case objective `max_y F(x, y)` (used when the best response in `x`
    /// is expensive).
    WorstCaseLoss,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::DualityGap => "duality_gap",
            MetricKind::WorstCaseLoss => "worst_case_loss",
        }
    }
}

/// A convex-concave saddle-point problem with subgradient and metric oracles.
pub trait SaddleObjective: Send + Sync {
    fn value(&self, x: &[f64], y: &[f64]) -> f64;
    fn subgrad_x(&self, x: &[f64], y: &[f64]) -> Vec<f64>;
    fn subgrad_y(&self, x: &[f64], y: &[f64]) -> Vec<f64>;
    /// Convergence metric at an average pair; see [`MetricKind`].
    fn metric(&self, x_avg: &[f64], y_avg: &[f64]) -> Result<f64>;
    fn metric_kind(&self) -> MetricKind;
    fn domain_x(&self) -> &ConicDomain;
    fn domain_y(&self) -> &ConicDomain;
    fn prox_domain_x(&self) -> ProxDomain;
    fn prox_domain_y(&self) -> ProxDomain;
    /// Upper bounds `(L_x, L_y)` on subgradient norms, for theoretical step sizes.
    fn lipschitz_bounds(&self) -> (f64, f64);
}

/// A sequential decision maker inside the repeated game.
pub trait Learner {
    /// Produces the next decision (ambient coordinates).
    fn choose(&mut self) -> Result<Vec<f64>>;
    /// Consumes the loss observed at the last chosen decision, with the given
    /// payoff weight.
    fn update(&mut self, loss: &[f64], weight: f64) -> Result<()>;
    /// Aggregate-payoff snapshot for the conic learners (`u` for the
    /// thresholded variant, its cone projection otherwise); `None` for learners
    /// without conic state.
    fn cone_snapshot(&self) -> Option<LiftedPayoff> {
        None
    }
    /// Scale `kappa` relating the snapshot geometry to objective changes.
    fn bound_kappa(&self) -> f64 {
        1.0
    }
}

/// Conic Blackwell learner (either variant) over a [`ConicDomain`].
pub struct CbaLearner {
    state: CbaState,
    last_internal: Option<Vec<f64>>,
}

impl CbaLearner {
    pub fn new(domain: ConicDomain, variant: CbaVariant, schedule: WeightSchedule) -> Self {
        CbaLearner {
            state: CbaState::new(domain, variant, schedule),
            last_internal: None,
        }
    }

    pub fn state(&self) -> &CbaState {
        &self.state
    }
}

impl Learner for CbaLearner {
    fn choose(&mut self) -> Result<Vec<f64>> {
        let s = self.state.choose_internal()?;
        let x = self.state.domain().to_external_decision(&s);
        self.last_internal = Some(s);
        Ok(x)
    }

    fn update(&mut self, loss: &[f64], weight: f64) -> Result<()> {
        let s = match &self.last_internal {
            Some(s) => s.clone(),
            None => self.state.choose_internal()?,
        };
        self.state.update(&s, loss, weight)
    }

    fn cone_snapshot(&self) -> Option<LiftedPayoff> {
        self.state.effective_aggregate().ok()
    }

    fn bound_kappa(&self) -> f64 {
        self.state.domain().kappa() * self.state.domain().decision_scale()
    }
}

/// Regret matching on the simplex, with or without thresholding.
pub struct RmLearner {
    regrets: Vec<f64>,
    last_decision: Vec<f64>,
    plus: bool,
}

impl RmLearner {
    pub fn new(n: usize, plus: bool) -> Self {
        RmLearner {
            regrets: vec![0.0; n],
            last_decision: vec![1.0 / n as f64; n],
            plus,
        }
    }
}

impl Learner for RmLearner {
    fn choose(&mut self) -> Result<Vec<f64>> {
        let total: f64 = self.regrets.iter().map(|v| v.max(0.0)).sum();
        let n = self.regrets.len();
        self.last_decision = if total <= 0.0 {
            vec![1.0 / n as f64; n]
        } else {
            self.regrets.iter().map(|v| v.max(0.0) / total).collect()
        };
        Ok(self.last_decision.clone())
    }

    fn update(&mut self, loss: &[f64], weight: f64) -> Result<()> {
        if !linalg::all_finite(loss) {
            return Err(CoreError::NonFinite("regret-matching loss"));
        }
        let weighted = linalg::scale(loss, weight);
        let (r, _) = if self.plus {
            rm_plus_step(&self.regrets, &self.last_decision, &weighted)
        } else {
            rm_step(&self.regrets, &self.last_decision, &weighted)
        };
        self.regrets = r;
        Ok(())
    }
}

/// Protocol configuration for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub iterations: usize,
    pub schedule: WeightSchedule,
    /// Extra metric evaluations every `metric_cadence` iterations; `0` picks
    /// `ceil(T / 200)`. The log-spaced points `1, 2, 5, 10, ...` and the final
    /// iteration are always evaluated.
    pub metric_cadence: usize,
    /// Record wall-clock solver time. Off by default so traces are
    /// byte-reproducible; timing covers learner and oracle work only, metric
    /// evaluation is excluded.
    pub timing: bool,
    /// Optional wall-clock budget in seconds; the run stops early once exceeded.
    pub time_budget: Option<f64>,
}

impl RunConfig {
    pub fn new(iterations: usize, schedule: WeightSchedule) -> Self {
        RunConfig {
            iterations,
            schedule,
            metric_cadence: 0,
            timing: false,
            time_budget: None,
        }
    }

    fn cadence(&self) -> usize {
        if self.metric_cadence > 0 {
            self.metric_cadence
        } else {
            self.iterations.div_ceil(200).max(1)
        }
    }
}

fn is_log_point(t: usize) -> bool {
    let mut base = 1usize;
    loop {
        for mult in [1usize, 2, 5] {
            match mult.checked_mul(base) {
                Some(v) if v == t => return true,
                Some(v) if v > t => return false,
                _ => {}
            }
        }
        base = match base.checked_mul(10) {
            Some(b) => b,
            None => return false,
        };
    }
}

/// Per-iteration record of a run.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub t: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Subgradient in `x` at the recorded pair.
    pub f: Vec<f64>,
    /// Subgradient in `y`; in alternation this is backfilled as
    /// `g_t = subgrad_y(x_{t+1}, y_t)`.
    pub g: Option<Vec<f64>>,
    pub omega: f64,
    pub theta: f64,
    pub elapsed: f64,
}

/// Metric evaluation at a cadence point.
#[derive(Clone, Copy, Debug)]
pub struct MetricPoint {
    pub t: usize,
    pub elapsed: f64,
    pub value: f64,
}

/// Alternation diagnostics for the per-iteration improvement bound: at
/// iteration `t` the cross term `F(x_{t+1}, y_t) - F(x_t, y_t)` should be at
/// most `-kappa / (omega_t * ||u_t||_inf) * ||u_t - u_{t-1}||^2` for the `x`
/// learner's aggregate `u`.
#[derive(Clone, Debug)]
pub struct AlternationDiag {
    pub t: usize,
    pub cross_term: f64,
    pub u_inf: f64,
    pub u_norm: f64,
    pub delta_sq: f64,
    pub omega: f64,
    pub kappa: f64,
}

/// Full record of one protocol run.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub records: Vec<IterationRecord>,
    pub metrics: Vec<MetricPoint>,
    pub alternation: Vec<AlternationDiag>,
    pub avg_x: Vec<f64>,
    pub avg_y: Vec<f64>,
    pub metric_kind: MetricKind,
    /// Wall-clock seconds spent in learner and oracle work (zero when timing is
    /// disabled).
    pub solver_seconds: f64,
}

impl RunTrace {
    /// Weighted regret of the `x` player with weights `theta_t` applied to the
    /// recorded `(f_t, x_t)` pairs.
    pub fn weighted_regret_x(&self, domain: &ConicDomain, thetas: &[f64]) -> Result<f64> {
        let xs: Vec<Vec<f64>> = self.records.iter().map(|r| r.x.clone()).collect();
        let fs: Vec<Vec<f64>> = self.records.iter().map(|r| r.f.clone()).collect();
        weighted_regret(&xs, &fs, thetas, domain)
    }

    /// Weighted regret of the `y` player (a maximizer): computed on the negated
    /// recorded subgradients `-g_t`.
    pub fn weighted_regret_y(&self, domain: &ConicDomain, thetas: &[f64]) -> Result<f64> {
        let ys: Vec<Vec<f64>> = self.records.iter().map(|r| r.y.clone()).collect();
        let gs: Result<Vec<Vec<f64>>> = self
            .records
            .iter()
            .map(|r| {
                r.g.as_ref()
                    .map(|g| linalg::scale(g, -1.0))
                    .ok_or_else(|| CoreError::domain("missing y subgradient in trace"))
            })
            .collect();
        weighted_regret(&ys, &gs?, thetas, domain)
    }

    /// Metric value at the final evaluation point.
    pub fn final_metric(&self) -> Option<f64> {
        self.metrics.last().map(|m| m.value)
    }
}

/// Weighted average `sum_t theta_t p_t / sum_t theta_t`.
pub fn weighted_average(points: &[Vec<f64>], thetas: &[f64]) -> Result<Vec<f64>> {
    if points.len() != thetas.len() {
        return Err(CoreError::LengthMismatch {
            expected: points.len(),
            got: thetas.len(),
        });
    }
    if points.is_empty() {
        return Err(CoreError::domain("cannot average an empty sequence"));
    }
    if thetas.iter().any(|&t| t <= 0.0) {
        return Err(CoreError::domain("averaging weights must be positive"));
    }
    let n = points[0].len();
    let mut acc = vec![0.0; n];
    let mut total = 0.0;
    for (p, &w) in points.iter().zip(thetas) {
        if p.len() != n {
            return Err(CoreError::LengthMismatch {
                expected: n,
                got: p.len(),
            });
        }
        linalg::axpy(&mut acc, w, p);
        total += w;
    }
    Ok(linalg::scale(&acc, 1.0 / total))
}

/// Convergence metric of the problem at an average pair, together with what the
/// number means.
pub fn duality_gap(
    problem: &dyn SaddleObjective,
    x_avg: &[f64],
    y_avg: &[f64],
) -> Result<(f64, MetricKind)> {
    Ok((problem.metric(x_avg, y_avg)?, problem.metric_kind()))
}

struct Stopwatch {
    enabled: bool,
    accumulated: f64,
    started: Option<Instant>,
}

impl Stopwatch {
    fn new(enabled: bool) -> Self {
        Stopwatch {
            enabled,
            accumulated: 0.0,
            started: None,
        }
    }

    fn start(&mut self) {
        if self.enabled {
            self.started = Some(Instant::now());
        }
    }

    fn stop(&mut self) {
        if let Some(s) = self.started.take() {
            self.accumulated += s.elapsed().as_secs_f64();
        }
    }

    fn elapsed(&self) -> f64 {
        self.accumulated
    }
}

fn check_finite(v: &[f64], what: &'static str, t: usize) -> Result<()> {
    if linalg::all_finite(v) {
        Ok(())
    } else {
        Err(CoreError::NonFinite(what).at_iteration(t))
    }
}

/// Runs the simultaneous protocol: at each iteration both players choose, both
/// observe subgradients at the joint pair, and both update with weight
/// `omega_t`. Averages use the decision weights `theta_t`.
pub fn run_simultaneous(
    problem: &dyn SaddleObjective,
    learner_x: &mut dyn Learner,
    learner_y: &mut dyn Learner,
    cfg: &RunConfig,
) -> Result<RunTrace> {
    if cfg.iterations == 0 {
        return Err(CoreError::domain("iteration count must be at least 1"));
    }
    let cadence = cfg.cadence();
    let mut watch = Stopwatch::new(cfg.timing || cfg.time_budget.is_some());
    let budget_clock = Instant::now();

    let mut records = Vec::with_capacity(cfg.iterations);
    let mut metrics = Vec::new();
    let mut sum_x: Option<Vec<f64>> = None;
    let mut sum_y: Option<Vec<f64>> = None;
    let mut weight_total = 0.0;

    for t in 1..=cfg.iterations {
        let omega = cfg.schedule.payoff_weight(t);
        let theta = cfg.schedule.decision_weight(t);

        watch.start();
        let x = learner_x.choose().map_err(|e| e.at_iteration(t))?;
        let y = learner_y.choose().map_err(|e| e.at_iteration(t))?;
        let f = problem.subgrad_x(&x, &y);
        let g = problem.subgrad_y(&x, &y);
        check_finite(&f, "subgrad_x", t)?;
        check_finite(&g, "subgrad_y", t)?;
        learner_x.update(&f, omega).map_err(|e| e.at_iteration(t))?;
        let neg_g = linalg::scale(&g, -1.0);
        learner_y
            .update(&neg_g, omega)
            .map_err(|e| e.at_iteration(t))?;
        watch.stop();

        match (&mut sum_x, &mut sum_y) {
            (Some(sx), Some(sy)) => {
                linalg::axpy(sx, theta, &x);
                linalg::axpy(sy, theta, &y);
            }
            _ => {
                sum_x = Some(linalg::scale(&x, theta));
                sum_y = Some(linalg::scale(&y, theta));
            }
        }
        weight_total += theta;

        let elapsed = if cfg.timing { watch.elapsed() } else { 0.0 };
        records.push(IterationRecord {
            t,
            x,
            y,
            f,
            g: Some(g),
            omega,
            theta,
            elapsed,
        });

        if t % cadence == 0 || is_log_point(t) || t == cfg.iterations {
            let ax = linalg::scale(sum_x.as_ref().unwrap(), 1.0 / weight_total);
            let ay = linalg::scale(sum_y.as_ref().unwrap(), 1.0 / weight_total);
            let value = problem.metric(&ax, &ay).map_err(|e| e.at_iteration(t))?;
            metrics.push(MetricPoint { t, elapsed, value });
        }

        if let Some(budget) = cfg.time_budget {
            if budget_clock.elapsed().as_secs_f64() > budget {
                break;
            }
        }
    }

    let avg_x = linalg::scale(sum_x.as_ref().unwrap(), 1.0 / weight_total);
    let avg_y = linalg::scale(sum_y.as_ref().unwrap(), 1.0 / weight_total);
    Ok(RunTrace {
        records,
        metrics,
        alternation: Vec::new(),
        avg_x,
        avg_y,
        metric_kind: problem.metric_kind(),
        solver_seconds: watch.elapsed(),
    })
}

/// Runs the alternating protocol: the second player is given the first
/// player's iteration-`t` decision before updating.
///
/// Per iteration: `x_t` is chosen from the `x` aggregate; the `y` learner
/// updates on `g_{t-1} = subgrad_y(x_t, y_{t-1})`; `y_t` is chosen; the `x`
/// learner updates on `f_t = subgrad_x(x_t, y_t)`. Averages follow the
/// alternation bookkeeping `avg_x = sum theta_{t+1} x_{t+1} / S`,
/// `avg_y = sum theta_{t+1} y_t / S`, with a final extra choose producing
/// `x_{T+1}`. The cross terms `F(x_{t+1}, y_t) - F(x_t, y_t)` are recorded for
/// the improvement diagnostics.
pub fn run_alternating(
    problem: &dyn SaddleObjective,
    learner_x: &mut dyn Learner,
    learner_y: &mut dyn Learner,
    cfg: &RunConfig,
) -> Result<RunTrace> {
    if cfg.iterations == 0 {
        return Err(CoreError::domain("iteration count must be at least 1"));
    }
    let t_max = cfg.iterations;
    let cadence = cfg.cadence();
    let mut watch = Stopwatch::new(cfg.timing || cfg.time_budget.is_some());

    let mut records: Vec<IterationRecord> = Vec::with_capacity(t_max);
    let mut metrics = Vec::new();
    let mut alternation = Vec::with_capacity(t_max);

    let mut sum_x: Option<Vec<f64>> = None;
    let mut sum_y: Option<Vec<f64>> = None;
    let mut weight_total = 0.0;

    watch.start();
    let mut y_prev = learner_y.choose().map_err(|e| e.at_iteration(0))?;
    watch.stop();
    let mut x_prev: Option<Vec<f64>> = None;
    let kappa_x = learner_x.bound_kappa();
    let mut snap_before: Option<LiftedPayoff> = None;
    let mut snap_after: Option<LiftedPayoff> = None;
    let mut omega_prev = 0.0;

    // Folds in the alternation average/diagnostic contribution of decision
    // x_tau (tau >= 2), which finalizes effective iteration tau - 1.
    let absorb = |tau: usize,
                      x_tau: &[f64],
                      y_prev: &[f64],
                      x_prev: &[f64],
                      sum_x: &mut Option<Vec<f64>>,
                      sum_y: &mut Option<Vec<f64>>,
                      weight_total: &mut f64,
                      alternation: &mut Vec<AlternationDiag>,
                      snap_before: &Option<LiftedPayoff>,
                      snap_after: &Option<LiftedPayoff>,
                      omega_prev: f64| {
        let theta = cfg.schedule.decision_weight(tau);
        match (sum_x.as_mut(), sum_y.as_mut()) {
            (Some(sx), Some(sy)) => {
                linalg::axpy(sx, theta, x_tau);
                linalg::axpy(sy, theta, y_prev);
            }
            _ => {
                *sum_x = Some(linalg::scale(x_tau, theta));
                *sum_y = Some(linalg::scale(y_prev, theta));
            }
        }
        *weight_total += theta;

        let cross = problem.value(x_tau, y_prev) - problem.value(x_prev, y_prev);
        if let Some(after) = snap_after {
            let delta_sq = match snap_before {
                Some(before) => {
                    let d = after.sub(before);
                    d.dot(&d)
                }
                None => after.dot(after),
            };
            alternation.push(AlternationDiag {
                t: tau - 1,
                cross_term: cross,
                u_inf: after.norm_inf(),
                u_norm: after.norm2(),
                delta_sq,
                omega: omega_prev,
                kappa: kappa_x,
            });
        }
    };

    for t in 1..=t_max {
        let omega = cfg.schedule.payoff_weight(t);
        let theta = cfg.schedule.decision_weight(t);

        watch.start();
        let x_t = learner_x.choose().map_err(|e| e.at_iteration(t))?;
        watch.stop();

        if let Some(xp) = &x_prev {
            absorb(
                t,
                &x_t,
                &y_prev,
                xp,
                &mut sum_x,
                &mut sum_y,
                &mut weight_total,
                &mut alternation,
                &snap_before,
                &snap_after,
                omega_prev,
            );
            // Metric for effective iteration t - 1.
            let eff = t - 1;
            if eff % cadence == 0 || is_log_point(eff) {
                let ax = linalg::scale(sum_x.as_ref().unwrap(), 1.0 / weight_total);
                let ay = linalg::scale(sum_y.as_ref().unwrap(), 1.0 / weight_total);
                let value = problem.metric(&ax, &ay).map_err(|e| e.at_iteration(eff))?;
                metrics.push(MetricPoint {
                    t: eff,
                    elapsed: if cfg.timing { watch.elapsed() } else { 0.0 },
                    value,
                });
            }
        }

        watch.start();
        let g_prev = problem.subgrad_y(&x_t, &y_prev);
        check_finite(&g_prev, "subgrad_y", t)?;
        let neg_g = linalg::scale(&g_prev, -1.0);
        learner_y
            .update(&neg_g, omega)
            .map_err(|e| e.at_iteration(t))?;
        let y_t = learner_y.choose().map_err(|e| e.at_iteration(t))?;
        let f_t = problem.subgrad_x(&x_t, &y_t);
        check_finite(&f_t, "subgrad_x", t)?;
        snap_before = snap_after.take();
        learner_x
            .update(&f_t, omega)
            .map_err(|e| e.at_iteration(t))?;
        snap_after = learner_x.cone_snapshot();
        watch.stop();

        // g for record t-1 is g_{t-1} = subgrad_y(x_t, y_{t-1}).
        if let Some(prev) = records.last_mut() {
            prev.g = Some(g_prev);
        }
        records.push(IterationRecord {
            t,
            x: x_t.clone(),
            y: y_t.clone(),
            f: f_t,
            g: None,
            omega,
            theta,
            elapsed: if cfg.timing { watch.elapsed() } else { 0.0 },
        });

        omega_prev = omega;
        x_prev = Some(x_t);
        y_prev = y_t;

        if let Some(budget) = cfg.time_budget {
            if watch.elapsed() > budget {
                break;
            }
        }
    }

    // Final extra choose: x_{T+1} completes the averages, the last cross term,
    // and g_T.
    let t_done = records.len();
    watch.start();
    let x_final = learner_x.choose().map_err(|e| e.at_iteration(t_done))?;
    let g_final = problem.subgrad_y(&x_final, &y_prev);
    watch.stop();
    check_finite(&g_final, "subgrad_y", t_done)?;
    if let Some(last) = records.last_mut() {
        last.g = Some(g_final);
    }
    absorb(
        t_done + 1,
        &x_final,
        &y_prev,
        x_prev.as_ref().expect("at least one iteration ran"),
        &mut sum_x,
        &mut sum_y,
        &mut weight_total,
        &mut alternation,
        &snap_before,
        &snap_after,
        omega_prev,
    );

    let avg_x = linalg::scale(sum_x.as_ref().unwrap(), 1.0 / weight_total);
    let avg_y = linalg::scale(sum_y.as_ref().unwrap(), 1.0 / weight_total);
    let value = problem
        .metric(&avg_x, &avg_y)
        .map_err(|e| e.at_iteration(t_done))?;
    metrics.push(MetricPoint {
        t: t_done,
        elapsed: if cfg.timing { watch.elapsed() } else { 0.0 },
        value,
    });

    Ok(RunTrace {
        records,
        metrics,
        alternation,
        avg_x,
        avg_y,
        metric_kind: problem.metric_kind(),
        solver_seconds: watch.elapsed(),
    })
}

/// The solver preset: thresholded conic learners for both players, uniform
/// payoff weights, linear decision weights, and the alternating protocol.
pub fn sp_cba_plus(problem: &dyn SaddleObjective, iterations: usize) -> Result<RunTrace> {
    let schedule = WeightSchedule::linear_decisions();
    let mut lx = CbaLearner::new(problem.domain_x().clone(), CbaVariant::CbaPlus, schedule);
    let mut ly = CbaLearner::new(problem.domain_y().clone(), CbaVariant::CbaPlus, schedule);
    let cfg = RunConfig::new(iterations, schedule);
    run_alternating(problem, &mut lx, &mut ly, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::matrix_game::{matrix_game_random, EntryDist, MatrixGame};

    fn matching_pennies() -> MatrixGame {
        MatrixGame::new(2, 2, vec![1.0, -1.0, -1.0, 1.0]).unwrap()
    }

    #[test]
    fn weighted_average_examples() {
        let pts = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let avg = weighted_average(&pts, &[1.0, 1.0]).unwrap();
        assert!(linalg::dist2(&avg, &[0.5, 0.5]) < 1e-15);

        let avg = weighted_average(&pts[..1], &[3.0]).unwrap();
        assert!(linalg::dist2(&avg, &[1.0, 0.0]) < 1e-15);

        // Linear weights on (0, e1) pairs: sum(t * p_t) / (T(T+1)/2).
        let pts = vec![vec![0.0], vec![1.0], vec![0.0], vec![1.0]];
        let thetas = vec![1.0, 2.0, 3.0, 4.0];
        let avg = weighted_average(&pts, &thetas).unwrap();
        assert!((avg[0] - 6.0 / 10.0).abs() < 1e-15);

        assert!(weighted_average(&pts, &[1.0]).is_err());
        assert!(weighted_average(&pts, &[1.0, 1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn single_iteration_averages_are_the_iterates() {
        let game = matching_pennies();
        let schedule = WeightSchedule::uniform();
        let mut lx = CbaLearner::new(game.domain_x().clone(), CbaVariant::CbaPlus, schedule);
        let mut ly = CbaLearner::new(game.domain_y().clone(), CbaVariant::CbaPlus, schedule);
        let cfg = RunConfig::new(1, schedule);
        let trace = run_simultaneous(&game, &mut lx, &mut ly, &cfg).unwrap();
        assert_eq!(trace.records.len(), 1);
        assert!(linalg::dist2(&trace.avg_x, &trace.records[0].x) < 1e-15);
        assert!(linalg::dist2(&trace.avg_y, &trace.records[0].y) < 1e-15);
    }

    #[test]
    fn matching_pennies_gap_is_zero_at_uniform() {
        let game = matching_pennies();
        let (gap, kind) = duality_gap(&game, &[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert_eq!(kind, MetricKind::DualityGap);
        assert!(gap.abs() < 1e-12);
    }

    #[test]
    fn simultaneous_gap_shrinks_on_known_game() {
        // Bilinear game with a unique pure saddle at (1, 1).
        let game = MatrixGame::new(2, 2, vec![0.0, 1.0, 2.0, 0.5]).unwrap();
        let schedule = WeightSchedule::uniform();
        let mut lx = CbaLearner::new(game.domain_x().clone(), CbaVariant::CbaPlus, schedule);
        let mut ly = CbaLearner::new(game.domain_y().clone(), CbaVariant::CbaPlus, schedule);
        let mut cfg = RunConfig::new(500, schedule);
        cfg.metric_cadence = 50;
        let trace = run_simultaneous(&game, &mut lx, &mut ly, &cfg).unwrap();
        let at = |t: usize| {
            trace
                .metrics
                .iter()
                .find(|m| m.t == t)
                .map(|m| m.value)
                .unwrap()
        };
        assert!(at(500) <= at(50) + 1e-12);
    }

    #[test]
    fn folk_bound_holds_for_uniform_simultaneous_runs() {
        let game = matrix_game_random(6, 5, EntryDist::Uniform01, 99);
        let schedule = WeightSchedule::uniform();
        let mut lx = CbaLearner::new(game.domain_x().clone(), CbaVariant::CbaPlus, schedule);
        let mut ly = CbaLearner::new(game.domain_y().clone(), CbaVariant::CbaPlus, schedule);
        let cfg = RunConfig::new(300, schedule);
        let trace = run_simultaneous(&game, &mut lx, &mut ly, &cfg).unwrap();
        let thetas = vec![1.0; trace.records.len()];
        let rx = trace.weighted_regret_x(game.domain_x(), &thetas).unwrap();
        let ry = trace.weighted_regret_y(game.domain_y(), &thetas).unwrap();
        let t = trace.records.len() as f64;
        let gap = game.metric(&trace.avg_x, &trace.avg_y).unwrap();
        assert!(gap <= (rx + ry) / t + 1e-8);
    }

    #[test]
    fn alternation_records_cross_terms_and_feasible_averages() {
        let game = matrix_game_random(4, 3, EntryDist::Normal01, 5);
        let trace = sp_cba_plus(&game, 200).unwrap();
        assert_eq!(trace.alternation.len(), 200);
        assert_eq!(trace.records.len(), 200);
        assert!(trace.records.iter().all(|r| r.g.is_some()));
        assert!(game.domain_x().feasibility_slack(&trace.avg_x) < 1e-8);
        assert!(game.domain_y().feasibility_slack(&trace.avg_y) < 1e-8);
        // Improvement bound at every non-degenerate iteration.
        for d in &trace.alternation {
            if d.u_inf > 1e-12 {
                let bound = -d.kappa / (d.omega * d.u_inf) * d.delta_sq;
                assert!(
                    d.cross_term <= bound + 1e-8,
                    "cross {} vs bound {} at t={}",
                    d.cross_term,
                    bound,
                    d.t
                );
            }
        }
    }

    #[test]
    fn alternation_gap_decomposition_is_valid() {
        let game = matrix_game_random(5, 4, EntryDist::Uniform01, 11);
        let trace = sp_cba_plus(&game, 150).unwrap();
        let t = trace.records.len();
        let schedule = WeightSchedule::linear_decisions();
        let thetas: Vec<f64> = (1..=t).map(|i| schedule.decision_weight(i + 1)).collect();
        let s: f64 = thetas.iter().sum();
        let rx = trace.weighted_regret_x(game.domain_x(), &thetas).unwrap();
        let ry = trace.weighted_regret_y(game.domain_y(), &thetas).unwrap();
        let cross: f64 = trace
            .alternation
            .iter()
            .zip(&thetas)
            .map(|(d, th)| th * d.cross_term)
            .sum();
        let gap = game.metric(&trace.avg_x, &trace.avg_y).unwrap();
        assert!(gap <= (rx + ry + cross) / s + 1e-8);
    }

    #[test]
    fn alternation_beats_simultaneous_on_matrix_games() {
        let game = matrix_game_random(10, 8, EntryDist::Uniform01, 3);
        let schedule = WeightSchedule::linear_decisions();
        let alt = sp_cba_plus(&game, 1000).unwrap();
        let mut lx = CbaLearner::new(game.domain_x().clone(), CbaVariant::CbaPlus, schedule);
        let mut ly = CbaLearner::new(game.domain_y().clone(), CbaVariant::CbaPlus, schedule);
        let cfg = RunConfig::new(1000, schedule);
        let sim = run_simultaneous(&game, &mut lx, &mut ly, &cfg).unwrap();
        let g_alt = alt.final_metric().unwrap();
        let g_sim = sim.final_metric().unwrap();
        assert!(g_alt <= g_sim * 1.1, "alternation {g_alt} vs simultaneous {g_sim}");
    }

    #[test]
    fn preset_is_deterministic() {
        let game = matrix_game_random(6, 6, EntryDist::Normal01, 21);
        let a = sp_cba_plus(&game, 100).unwrap();
        let b = sp_cba_plus(&game, 100).unwrap();
        assert_eq!(a.avg_x, b.avg_x);
        assert_eq!(a.avg_y, b.avg_y);
        let va: Vec<f64> = a.metrics.iter().map(|m| m.value).collect();
        let vb: Vec<f64> = b.metrics.iter().map(|m| m.value).collect();
        assert_eq!(va, vb);
    }

    #[test]
    fn trace_invariants_hold() {
        let game = matrix_game_random(3, 3, EntryDist::Uniform01, 8);
        let trace = sp_cba_plus(&game, 50).unwrap();
        for w in trace.records.windows(2) {
            assert!(w[1].t == w[0].t + 1);
            assert!(w[1].elapsed >= w[0].elapsed);
        }
        for w in trace.metrics.windows(2) {
            assert!(w[1].t > w[0].t);
        }
    }
}
