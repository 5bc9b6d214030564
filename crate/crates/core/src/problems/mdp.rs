//! Discounted MDPs in saddle-point form:
//!
//! ```text
//! min_{||v|| <= sqrt(n) r_inf / (1 - lambda)}  max_{mu in Delta(n*A)}
//!     (1 - lambda) <p0, v> + sum_{s,a} mu_sa (r_sa + lambda <P_sa, v> - v_s)
//! ```
//!
//! The inner maximum enforces the Bellman inequalities; the ball constraint on
//! `v` is valid for the optimal values since `0 <= v*_s <= r_inf / (1 - lambda)`.
//! Both marginals are bilinear, so the duality gap has an exact closed form:
//! the best response in `mu` concentrates on the largest Bellman violation and
//! the best response in `v` minimizes a linear form over the ball.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baselines::{mdp_lipschitz_bounds, ProxDomain};
use crate::domain::ConicDomain;
use crate::error::{CoreError, Result};
use crate::framework::{MetricKind, SaddleObjective};
use crate::linalg;

/// A finite discounted MDP with its saddle-point domains.
pub struct MdpSaddle {
    n: usize,
    actions: usize,
    /// Transition rows `P_sa`, laid out `(s * actions + a) * n + s'`.
    p: Vec<f64>,
    /// Rewards indexed `s * actions + a`; all nonnegative.
    r: Vec<f64>,
    lambda: f64,
    p0: Vec<f64>,
    radius: f64,
    domain_v: ConicDomain,
    domain_mu: ConicDomain,
}

impl MdpSaddle {
    pub fn new(
        n: usize,
        actions: usize,
        p: Vec<f64>,
        r: Vec<f64>,
        lambda: f64,
        p0: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 || actions == 0 {
            return Err(CoreError::domain("need at least one state and action"));
        }
        if !(0.0 < lambda && lambda < 1.0) {
            return Err(CoreError::domain(format!(
                "discount must lie in (0, 1), got {lambda}"
            )));
        }
        if p.len() != n * actions * n {
            return Err(CoreError::LengthMismatch {
                expected: n * actions * n,
                got: p.len(),
            });
        }
        if r.len() != n * actions {
            return Err(CoreError::LengthMismatch {
                expected: n * actions,
                got: r.len(),
            });
        }
        if r.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(CoreError::domain("rewards must be finite and nonnegative"));
        }
        for sa in 0..n * actions {
            let row = &p[sa * n..(sa + 1) * n];
            if row.iter().any(|&q| q < 0.0) || (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(CoreError::domain(format!(
                    "transition row {sa} is not a distribution"
                )));
            }
        }
        if p0.len() != n || (p0.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(CoreError::domain("p0 must be a distribution over states"));
        }
        let r_inf = r.iter().cloned().fold(0.0, f64::max);
        let radius = (n as f64).sqrt() * r_inf / (1.0 - lambda);
        // A zero-reward MDP still needs a nonempty ball.
        let radius = if radius > 0.0 { radius } else { 1.0 };
        Ok(MdpSaddle {
            n,
            actions,
            p,
            r,
            lambda,
            p0,
            radius,
            domain_v: ConicDomain::l2_ball(n, radius)?,
            domain_mu: ConicDomain::simplex(n * actions)?,
        })
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_actions(&self) -> usize {
        self.actions
    }

    pub fn discount(&self) -> f64 {
        self.lambda
    }

    pub fn rewards(&self) -> &[f64] {
        &self.r
    }

    pub fn initial_distribution(&self) -> &[f64] {
        &self.p0
    }

    pub fn reward_max(&self) -> f64 {
        self.r.iter().cloned().fold(0.0, f64::max)
    }

    pub fn value_radius(&self) -> f64 {
        self.radius
    }

    fn transition_row(&self, sa: usize) -> &[f64] {
        &self.p[sa * self.n..(sa + 1) * self.n]
    }

    /// `grad_v F(., mu)`: `(1-lambda) p0_s' + lambda sum_sa mu_sa P_sas' - sum_a mu_s'a`.
    pub fn grad_v(&self, mu: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self.p0.iter().map(|&q| (1.0 - self.lambda) * q).collect();
        for sa in 0..self.n * self.actions {
            let row = self.transition_row(sa);
            linalg::axpy(&mut out, self.lambda * mu[sa], row);
            out[sa / self.actions] -= mu[sa];
        }
        out
    }

    /// `grad_mu F(v, .)`: the Bellman residuals `r_sa + lambda <P_sa, v> - v_s`.
    pub fn grad_mu(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n * self.actions)
            .map(|sa| {
                let s = sa / self.actions;
                self.r[sa] + self.lambda * linalg::dot(self.transition_row(sa), v) - v[s]
            })
            .collect()
    }

    /// Exact duality gap at a feasible pair.
    pub fn gap(&self, v: &[f64], mu: &[f64]) -> f64 {
        // max over the simplex: concentrate on the largest Bellman residual.
        let best_mu = self
            .grad_mu(v)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let max_side = (1.0 - self.lambda) * linalg::dot(&self.p0, v) + best_mu;

        // min over the v-ball of <grad_v(mu), v> plus the mu-weighted rewards.
        let c = self.grad_v(mu);
        let min_side = linalg::dot(&self.r, mu) - self.radius * linalg::norm2(&c);
        max_side - min_side
    }

    /// Value iteration to sup-norm increment `tol`; the fixed-point error is
    /// then at most `lambda * tol / (1 - lambda)`.
    pub fn value_iteration(&self, tol: f64) -> Result<Vec<f64>> {
        if tol <= 0.0 {
            return Err(CoreError::domain("tolerance must be positive"));
        }
        let mut v = vec![0.0; self.n];
        loop {
            let mut next = vec![0.0; self.n];
            for s in 0..self.n {
                let mut best = f64::NEG_INFINITY;
                for a in 0..self.actions {
                    let sa = s * self.actions + a;
                    let q = self.r[sa] + self.lambda * linalg::dot(self.transition_row(sa), &v);
                    best = best.max(q);
                }
                next[s] = best;
            }
            let delta = next
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            v = next;
            if delta < tol {
                return Ok(v);
            }
        }
    }

    /// Optimal discounted objective `(1 - lambda) <p0, v*>`.
    pub fn optimal_objective(&self, tol: f64) -> Result<f64> {
        let v = self.value_iteration(tol)?;
        Ok((1.0 - self.lambda) * linalg::dot(&self.p0, &v))
    }
}

/// Random Garnet MDP: each state-action pair reaches `ceil(branching * n)`
/// states chosen without replacement, with transition mass split by sorted
/// uniform cut points; rewards are uniform on `[0, reward_max]`; the initial
/// distribution is uniform.
pub fn garnet(
    n: usize,
    actions: usize,
    branching: f64,
    reward_max: f64,
    lambda: f64,
    seed: u64,
) -> Result<MdpSaddle> {
    if !(0.0 < branching && branching <= 1.0) {
        return Err(CoreError::domain("branching factor must lie in (0, 1]"));
    }
    if reward_max < 0.0 {
        return Err(CoreError::domain("reward bound must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support = ((branching * n as f64).ceil() as usize).clamp(1, n);
    let mut p = vec![0.0; n * actions * n];
    let mut r = vec![0.0; n * actions];
    let mut states: Vec<usize> = (0..n).collect();
    for sa in 0..n * actions {
        states.shuffle(&mut rng);
        let reachable = &states[..support];
        // Split unit mass at support-1 sorted uniform cut points.
        let mut cuts: Vec<f64> = (0..support - 1).map(|_| rng.gen::<f64>()).collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.push(1.0);
        let mut prev = 0.0;
        for (k, &s_next) in reachable.iter().enumerate() {
            p[sa * n + s_next] = cuts[k] - prev;
            prev = cuts[k];
        }
        r[sa] = rng.gen::<f64>() * reward_max;
    }
    let p0 = vec![1.0 / n as f64; n];
    MdpSaddle::new(n, actions, p, r, lambda, p0)
}

impl SaddleObjective for MdpSaddle {
    fn value(&self, v: &[f64], mu: &[f64]) -> f64 {
        (1.0 - self.lambda) * linalg::dot(&self.p0, v) + linalg::dot(mu, &self.grad_mu(v))
    }

    fn subgrad_x(&self, _v: &[f64], mu: &[f64]) -> Vec<f64> {
        self.grad_v(mu)
    }

    fn subgrad_y(&self, v: &[f64], _mu: &[f64]) -> Vec<f64> {
        self.grad_mu(v)
    }

    fn metric(&self, v_avg: &[f64], mu_avg: &[f64]) -> Result<f64> {
        Ok(self.gap(v_avg, mu_avg))
    }

    fn metric_kind(&self) -> MetricKind {
        MetricKind::DualityGap
    }

    fn domain_x(&self) -> &ConicDomain {
        &self.domain_v
    }

    fn domain_y(&self) -> &ConicDomain {
        &self.domain_mu
    }

    fn prox_domain_x(&self) -> ProxDomain {
        ProxDomain::Ball {
            center: vec![0.0; self.n],
            radius: self.radius,
        }
    }

    fn prox_domain_y(&self) -> ProxDomain {
        ProxDomain::Simplex {
            n: self.n * self.actions,
        }
    }

    fn lipschitz_bounds(&self) -> (f64, f64) {
        mdp_lipschitz_bounds(&self.r, self.lambda, self.n, self.actions)
            .expect("discount validated at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn garnet_rows_are_distributions_with_exact_support() {
        let m = garnet(12, 4, 0.5, 10.0, 0.9, 7).unwrap();
        for sa in 0..12 * 4 {
            let row = m.transition_row(sa);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(row.iter().all(|&q| q >= 0.0));
            let support = row.iter().filter(|&&q| q > 0.0).count();
            assert!(support <= 6, "support {support} exceeds ceil(0.5 * 12)");
        }
        assert!(m.rewards().iter().all(|&v| (0.0..=10.0).contains(&v)));
    }

    #[test]
    fn garnet_is_seed_reproducible() {
        let a = garnet(8, 3, 0.4, 5.0, 0.95, 42).unwrap();
        let b = garnet(8, 3, 0.4, 5.0, 0.95, 42).unwrap();
        assert_eq!(a.p, b.p);
        assert_eq!(a.r, b.r);
        let c = garnet(8, 3, 0.4, 5.0, 0.95, 43).unwrap();
        assert_ne!(a.r, c.r);
    }

    #[test]
    fn grad_v_columns_sum_to_zero_at_uniform() {
        // With mu summing to one, sum_s' grad_v = (1 - lambda) + lambda - 1 = 0.
        let m = garnet(6, 2, 0.5, 1.0, 0.8, 1).unwrap();
        let mu = vec![1.0 / 12.0; 12];
        let g = m.grad_v(&mu);
        assert!(g.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn grad_mu_at_small_discount_is_reward_minus_value() {
        let m = garnet(4, 3, 0.75, 2.0, 0.001, 3).unwrap();
        let v: Vec<f64> = (0..4).map(|s| s as f64 / 10.0).collect();
        let g = m.grad_mu(&v);
        for sa in 0..12 {
            let s = sa / 3;
            let lim = m.r[sa] - v[s];
            assert!((g[sa] - lim).abs() < 0.001 * (1.0 + v[s].abs()) + 1e-3);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = garnet(5, 2, 0.6, 3.0, 0.9, 17).unwrap();
        let h = 1e-6;
        let v: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut mu: Vec<f64> = (0..10).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = mu.iter().sum();
        mu.iter_mut().for_each(|q| *q /= total);

        let gv = m.grad_v(&mu);
        let gm = m.grad_mu(&v);
        for i in 0..5 {
            let mut vp = v.clone();
            vp[i] += h;
            let mut vm = v.clone();
            vm[i] -= h;
            let fd = (m.value(&vp, &mu) - m.value(&vm, &mu)) / (2.0 * h);
            assert!((fd - gv[i]).abs() <= 1e-6 * (1.0 + gv[i].abs()));
        }
        for sa in 0..10 {
            let mut mp = mu.clone();
            mp[sa] += h;
            let mut mm = mu.clone();
            mm[sa] -= h;
            let fd = (m.value(&v, &mp) - m.value(&v, &mm)) / (2.0 * h);
            assert!((fd - gm[sa]).abs() <= 1e-6 * (1.0 + gm[sa].abs()));
        }
    }

    #[test]
    fn single_state_value_iteration_closed_form() {
        // One state, two actions, self-loops: v* = max_a r_a / (1 - lambda).
        let p = vec![1.0, 1.0];
        let r = vec![1.0, 3.0];
        let m = MdpSaddle::new(1, 2, p, r, 0.5, vec![1.0]).unwrap();
        let v = m.value_iteration(1e-12).unwrap();
        assert!((v[0] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn two_state_chain_matches_geometric_series() {
        // Deterministic chain 0 -> 1 -> 1 with rewards 1 then 0:
        // v(1) = 0, v(0) = 1.
        let p = vec![
            0.0, 1.0, // state 0, single action, goes to 1
            0.0, 1.0, // state 1 self-loop
        ];
        let r = vec![1.0, 0.0];
        let m = MdpSaddle::new(2, 1, p, r, 0.5, vec![1.0, 0.0]).unwrap();
        let v = m.value_iteration(1e-12).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-9);
        assert!(v[1].abs() < 1e-9);
    }

    #[test]
    fn value_iteration_bellman_residual_is_small() {
        let m = garnet(10, 3, 0.5, 10.0, 0.9, 23).unwrap();
        let v = m.value_iteration(1e-10).unwrap();
        // Residual of the optimality operator.
        let mut worst = 0.0f64;
        for s in 0..10 {
            let best = (0..3)
                .map(|a| {
                    let sa = s * 3 + a;
                    m.r[sa] + 0.9 * linalg::dot(m.transition_row(sa), &v)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max((best - v[s]).abs());
        }
        assert!(worst < 1e-8);
    }

    #[test]
    fn gap_is_nonnegative_at_feasible_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = garnet(6, 2, 0.5, 4.0, 0.9, 29).unwrap();
        for _ in 0..50 {
            let mut v: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let nrm = linalg::norm2(&v);
            if nrm > m.value_radius() {
                v = linalg::scale(&v, m.value_radius() / nrm);
            }
            let mut mu: Vec<f64> = (0..12).map(|_| rng.gen::<f64>()).collect();
            let total: f64 = mu.iter().sum();
            mu.iter_mut().for_each(|q| *q /= total);
            assert!(m.gap(&v, &mu) >= -1e-10);
        }
    }

    #[test]
    fn gap_matches_brute_force_on_tiny_instance() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let m = garnet(3, 2, 1.0, 2.0, 0.7, 31).unwrap();
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut mu: Vec<f64> = (0..6).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = mu.iter().sum();
        mu.iter_mut().for_each(|q| *q /= total);

        // Brute-force both best responses: enumerate simplex vertices for mu,
        // dense directional sampling for v on the ball.
        let best_mu = (0..6)
            .map(|sa| {
                let e: Vec<f64> = (0..6).map(|k| if k == sa { 1.0 } else { 0.0 }).collect();
                m.value(&v, &e)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let c = m.grad_v(&mu);
        let direct = linalg::dot(&m.r, &mu) - m.value_radius() * linalg::norm2(&c);
        // Sampled lower bound cannot beat the closed form.
        for _ in 0..2000 {
            let mut w: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let nrm = linalg::norm2(&w);
            w = linalg::scale(&w, m.value_radius() / nrm.max(1e-12));
            assert!(m.value(&w, &mu) >= direct - 1e-9);
        }
        let gap = m.gap(&v, &mu);
        assert!((gap - (best_mu - direct)).abs() < 1e-10);
    }
}
