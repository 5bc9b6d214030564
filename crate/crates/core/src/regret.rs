//! Regret minimizers driven by Blackwell approachability on the lifted cone,
//! plus the classical simplex specializations.
//!
//! The conic learner keeps an aggregate payoff `u` in `R^(n+1)`. Observing a
//! loss `f` at decision `x` produces the instantaneous payoff
//! `v = (<f, x> / kappa, -f)`; the thresholded variant projects the running
//! aggregate back onto the cone after every addition, the plain variant never
//! projects and instead projects once when extracting a decision. Choosing
//! `x = (kappa / tu) * hu` from (the projection of) the aggregate forces
//! `<u, v_next> = 0`, which is what drives the `O(sqrt(T))` regret bound.

use crate::domain::{ConicDomain, DEGENERACY_EPS};
use crate::error::{CoreError, Result};
use crate::lifted::LiftedPayoff;
use crate::linalg;

/// Whether the aggregate payoff is projected back onto the cone at every update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbaVariant {
    /// Plain conic learner; the aggregate roams freely.
    Cba,
    /// Thresholded variant; the aggregate stays inside the cone.
    CbaPlus,
}

/// Polynomial weights `omega_t = t^p` on payoffs and `theta_t = t^q` on decisions.
///
/// Admissibility requires `q >= p`, so that `theta_{t+1}/theta_t >= omega_{t+1}/omega_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightSchedule {
    p: u32,
    q: u32,
}

impl WeightSchedule {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if q < p {
            return Err(CoreError::domain(format!(
                "decision exponent q={q} must be at least payoff exponent p={p}"
            )));
        }
        Ok(WeightSchedule { p, q })
    }

    /// Uniform weights on both payoffs and decisions.
    pub fn uniform() -> Self {
        WeightSchedule { p: 0, q: 0 }
    }

    /// Uniform payoff weights with linear decision weights, the preset used by
    /// the saddle-point solver.
    pub fn linear_decisions() -> Self {
        WeightSchedule { p: 0, q: 1 }
    }

    pub fn payoff_exponent(&self) -> u32 {
        self.p
    }

    pub fn decision_exponent(&self) -> u32 {
        self.q
    }

    /// `omega_t = t^p` for `t >= 1`.
    pub fn payoff_weight(&self, t: usize) -> f64 {
        (t as f64).powi(self.p as i32)
    }

    /// `theta_t = t^q` for `t >= 1`.
    pub fn decision_weight(&self, t: usize) -> f64 {
        (t as f64).powi(self.q as i32)
    }
}

/// State of a conic Blackwell learner over one decision set.
#[derive(Clone)]
pub struct CbaState {
    domain: ConicDomain,
    variant: CbaVariant,
    schedule: WeightSchedule,
    u: LiftedPayoff,
    t: usize,
}

impl CbaState {
    pub fn new(domain: ConicDomain, variant: CbaVariant, schedule: WeightSchedule) -> Self {
        let n = domain.internal_dim();
        CbaState {
            domain,
            variant,
            schedule,
            u: LiftedPayoff::zeros(n),
            t: 0,
        }
    }

    pub fn domain(&self) -> &ConicDomain {
        &self.domain
    }

    pub fn variant(&self) -> CbaVariant {
        self.variant
    }

    pub fn schedule(&self) -> WeightSchedule {
        self.schedule
    }

    /// Number of payoffs aggregated so far.
    pub fn iteration(&self) -> usize {
        self.t
    }

    /// The raw aggregate payoff vector.
    pub fn aggregate(&self) -> &LiftedPayoff {
        &self.u
    }

    /// The aggregate as seen by the decision rule: `u` itself for the
    /// thresholded variant, `pi_C(u)` for the plain one.
    pub fn effective_aggregate(&self) -> Result<LiftedPayoff> {
        match self.variant {
            CbaVariant::CbaPlus => Ok(self.u.clone()),
            CbaVariant::Cba => self.domain.project_cone(&self.u),
        }
    }

    /// Picks the next decision, in the domain's internal coordinates.
    ///
    /// For the thresholded variant this is `(kappa / tu) * hu` directly (the
    /// aggregate already lives in the cone); degenerate aggregates fall back to
    /// the domain default.
    pub fn choose_internal(&self) -> Result<Vec<f64>> {
        let eff = self.effective_aggregate()?;
        Ok(self.domain.extract_decision(&eff))
    }

    /// Picks the next decision in ambient coordinates.
    pub fn choose(&self) -> Result<Vec<f64>> {
        Ok(self.domain.to_external_decision(&self.choose_internal()?))
    }

    /// Instantaneous payoff `v = (<f, x> / kappa, -f)` for an internal pair.
    pub fn payoff_vector(&self, x_internal: &[f64], f_internal: &[f64]) -> LiftedPayoff {
        let kappa = self.domain.kappa();
        LiftedPayoff {
            tilde: linalg::dot(f_internal, x_internal) / kappa,
            hat: linalg::scale(f_internal, -1.0),
        }
    }

    /// Aggregates one weighted payoff observed at the internal decision
    /// `x_internal`; projects back onto the cone for the thresholded variant.
    pub fn update_internal(
        &mut self,
        x_internal: &[f64],
        f_internal: &[f64],
        weight: f64,
    ) -> Result<()> {
        if !linalg::all_finite(f_internal) {
            return Err(CoreError::NonFinite("loss vector"));
        }
        if weight <= 0.0 {
            return Err(CoreError::domain(format!(
                "payoff weight must be positive, got {weight}"
            )));
        }
        if f_internal.len() != self.domain.internal_dim() {
            return Err(CoreError::LengthMismatch {
                expected: self.domain.internal_dim(),
                got: f_internal.len(),
            });
        }
        let v = self.payoff_vector(x_internal, f_internal);
        let summed = self.u.add_scaled(weight, &v);
        self.u = match self.variant {
            CbaVariant::CbaPlus => self.domain.project_cone(&summed)?,
            CbaVariant::Cba => summed,
        };
        self.t += 1;
        Ok(())
    }

    /// Aggregates an ambient loss observed at an ambient decision. The decision
    /// must be the one produced by [`choose`](Self::choose) for the forcing
    /// identity to hold; internal coordinates are recovered from the aggregate.
    pub fn update(&mut self, x_internal: &[f64], f: &[f64], weight: f64) -> Result<()> {
        let f_int = self.domain.to_internal_loss(f);
        self.update_internal(x_internal, &f_int, weight)
    }

    /// Whether the effective aggregate is (numerically) the cone apex.
    pub fn is_degenerate(&self) -> Result<bool> {
        Ok(self.effective_aggregate()?.tilde <= DEGENERACY_EPS)
    }
}

/// One step of regret matching on the simplex.
///
/// `r` accumulates per-action regrets `<f, x> e - f` (an action with positive
/// entry would have outperformed the played mixture); the next decision plays
/// actions proportionally to positive regret, uniformly if none is positive.
pub fn rm_step(r: &[f64], x: &[f64], f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let fx = linalg::dot(f, x);
    let r_next: Vec<f64> = r.iter().zip(f).map(|(ri, fi)| ri + fx - fi).collect();
    let decision = positive_part_decision(&r_next);
    (r_next, decision)
}

/// One step of regret matching with thresholding: the running sum is clipped at
/// zero component-wise after every update.
pub fn rm_plus_step(r: &[f64], x: &[f64], f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let fx = linalg::dot(f, x);
    let r_next: Vec<f64> = r
        .iter()
        .zip(f)
        .map(|(ri, fi)| (ri + fx - fi).max(0.0))
        .collect();
    let decision = positive_part_decision(&r_next);
    (r_next, decision)
}

fn positive_part_decision(r: &[f64]) -> Vec<f64> {
    let total: f64 = r.iter().map(|v| v.max(0.0)).sum();
    if total <= 0.0 {
        vec![1.0 / r.len() as f64; r.len()]
    } else {
        r.iter().map(|v| v.max(0.0) / total).collect()
    }
}

/// Running weighted-loss accounting for one player.
#[derive(Clone, Debug)]
pub struct RegretLedger {
    weighted_loss: f64,
    weighted_loss_vec: Vec<f64>,
    weight_sum: f64,
    max_loss_norm: f64,
}

impl RegretLedger {
    pub fn new(n: usize) -> Self {
        RegretLedger {
            weighted_loss: 0.0,
            weighted_loss_vec: vec![0.0; n],
            weight_sum: 0.0,
            max_loss_norm: 0.0,
        }
    }

    pub fn record(&mut self, x: &[f64], f: &[f64], theta: f64) -> Result<()> {
        if f.len() != self.weighted_loss_vec.len() {
            return Err(CoreError::LengthMismatch {
                expected: self.weighted_loss_vec.len(),
                got: f.len(),
            });
        }
        if !linalg::all_finite(f) {
            return Err(CoreError::NonFinite("ledger loss"));
        }
        self.weighted_loss += theta * linalg::dot(f, x);
        linalg::axpy(&mut self.weighted_loss_vec, theta, f);
        self.weight_sum += theta;
        self.max_loss_norm = self.max_loss_norm.max(linalg::norm2(f));
        Ok(())
    }

    pub fn weight_sum(&self) -> f64 {
        self.weight_sum
    }

    pub fn max_loss_norm(&self) -> f64 {
        self.max_loss_norm
    }

    /// Weighted regret against the best fixed decision, through the domain's
    /// linear-minimization oracle.
    pub fn regret(&self, domain: &ConicDomain) -> f64 {
        let best = domain.linear_min(&self.weighted_loss_vec);
        self.weighted_loss - linalg::dot(&self.weighted_loss_vec, &best)
    }
}

/// Weighted regret of a recorded loss/decision sequence.
pub fn weighted_regret(
    decisions: &[Vec<f64>],
    losses: &[Vec<f64>],
    thetas: &[f64],
    domain: &ConicDomain,
) -> Result<f64> {
    if decisions.len() != losses.len() || decisions.len() != thetas.len() {
        return Err(CoreError::LengthMismatch {
            expected: decisions.len(),
            got: losses.len().min(thetas.len()),
        });
    }
    let n = domain.external_dim();
    let mut ledger = RegretLedger::new(n);
    for ((x, f), &theta) in decisions.iter().zip(losses).zip(thetas) {
        ledger.record(x, f, theta)?;
    }
    Ok(ledger.regret(domain))
}
