//! Regret-bound and forcing invariants for the conic learners, across weight
//! schedules and decision sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use saddle_core::domain::ConicDomain;
use saddle_core::regret::{CbaState, CbaVariant, RegretLedger, WeightSchedule};

fn test_domains() -> Vec<ConicDomain> {
    vec![
        ConicDomain::simplex(5).unwrap(),
        ConicDomain::l2_ball(4, 1.0).unwrap(),
        ConicDomain::l1_ball(6).unwrap(),
    ]
}

/// Runs one learner on random losses, returning (weighted regret with theta,
/// max payoff norm, sum of squared payoff weights, theta sum, trace checks).
struct RunStats {
    regret: f64,
    max_v: f64,
    omega_sq_sum: f64,
    theta_last_over_omega_last: f64,
}

fn run_learner(
    domain: &ConicDomain,
    variant: CbaVariant,
    schedule: WeightSchedule,
    horizon: usize,
    rng: &mut ChaCha8Rng,
    check_forcing: bool,
) -> RunStats {
    let mut state = CbaState::new(domain.clone(), variant, schedule);
    let n = domain.internal_dim();
    let mut ledger = RegretLedger::new(n);
    let mut max_v = 0.0f64;
    let mut omega_sq_sum = 0.0;

    for t in 1..=horizon {
        let omega = schedule.payoff_weight(t);
        let theta = schedule.decision_weight(t);
        let x = state.choose_internal().unwrap();
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = state.payoff_vector(&x, &f);
        max_v = max_v.max(v.norm2());
        omega_sq_sum += omega * omega;

        if check_forcing {
            let eff = state.effective_aggregate().unwrap();
            let scale = 1.0 + eff.norm2() * v.norm2();
            assert!(
                eff.dot(&v).abs() <= 1e-8 * scale,
                "forcing violation at t={t}"
            );
            let before = state.aggregate().norm2();
            state.update_internal(&x, &f, omega).unwrap();
            if variant == CbaVariant::CbaPlus {
                let after = state.aggregate().norm2();
                assert!(
                    after * after <= before * before + omega * omega * v.norm2() * v.norm2() + 1e-8,
                    "norm recursion violation at t={t}"
                );
            }
        } else {
            state.update_internal(&x, &f, omega).unwrap();
        }
        ledger.record(&x, &f, theta).unwrap();
    }

    // Internal-coordinate regret: the ledger works in the learner's space, so
    // evaluate the linear minimum over the internal set.
    let internal_domain = match domain.internal_dim() == domain.external_dim() {
        true => domain.clone(),
        false => ConicDomain::l2_ball(domain.internal_dim(), 1.0).unwrap(),
    };
    RunStats {
        regret: ledger.regret(&internal_domain),
        max_v,
        omega_sq_sum,
        theta_last_over_omega_last: schedule.decision_weight(horizon)
            / schedule.payoff_weight(horizon),
    }
}

#[test]
fn forcing_and_norm_recursion_hold_over_long_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(211);
    for domain in test_domains() {
        for variant in [CbaVariant::Cba, CbaVariant::CbaPlus] {
            run_learner(
                &domain,
                variant,
                WeightSchedule::linear_decisions(),
                1000,
                &mut rng,
                true,
            );
        }
    }
}

#[test]
fn cba_regret_bound_across_payoff_exponents() {
    // Weighted regret (weights on both payoffs and decisions) is at most
    // sqrt(2) * kappa * L * sqrt(sum omega_t^2).
    let mut rng = ChaCha8Rng::seed_from_u64(223);
    for p in [0u32, 1, 2] {
        let schedule = WeightSchedule::new(p, p).unwrap();
        for domain in test_domains() {
            for _ in 0..20 {
                let stats = run_learner(&domain, CbaVariant::Cba, schedule, 150, &mut rng, false);
                let kappa = domain.kappa();
                let bound =
                    2.0f64.sqrt() * kappa * stats.max_v * stats.omega_sq_sum.sqrt();
                assert!(
                    stats.regret <= bound + 1e-8,
                    "CBA bound violated: regret {} > {} (p={p})",
                    stats.regret,
                    bound
                );
            }
        }
    }
}

#[test]
fn cba_plus_regret_bound_across_schedules() {
    // Decision-weighted regret is at most
    // sqrt(2) * kappa * L * (theta_T / omega_T) * sqrt(sum omega_t^2).
    let mut rng = ChaCha8Rng::seed_from_u64(227);
    for (p, q) in [(0u32, 0u32), (0, 1), (1, 1), (1, 2)] {
        let schedule = WeightSchedule::new(p, q).unwrap();
        for domain in test_domains() {
            for _ in 0..20 {
                let stats =
                    run_learner(&domain, CbaVariant::CbaPlus, schedule, 150, &mut rng, false);
                let kappa = domain.kappa();
                let bound = 2.0f64.sqrt()
                    * kappa
                    * stats.max_v
                    * stats.theta_last_over_omega_last
                    * stats.omega_sq_sum.sqrt();
                assert!(
                    stats.regret <= bound + 1e-8,
                    "CBA+ bound violated: regret {} > {} (p={p}, q={q})",
                    stats.regret,
                    bound
                );
            }
        }
    }
}

#[test]
fn decisions_stay_feasible_across_domains() {
    let mut rng = ChaCha8Rng::seed_from_u64(229);
    let mut domains = test_domains();
    domains.push(ConicDomain::ellipsoid_simplex(vec![0.25; 4], 0.2).unwrap());
    domains.push(ConicDomain::shifted_ball(vec![1.0, -1.0, 0.5], 2.0).unwrap());
    for domain in &domains {
        for variant in [CbaVariant::Cba, CbaVariant::CbaPlus] {
            let mut state = CbaState::new(domain.clone(), variant, WeightSchedule::uniform());
            for _ in 0..200 {
                let s = state.choose_internal().unwrap();
                let x = domain.to_external_decision(&s);
                assert!(
                    domain.feasibility_slack(&x) <= 1e-8,
                    "infeasible decision on domain"
                );
                let f: Vec<f64> = (0..domain.external_dim())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                let f_int = domain.to_internal_loss(&f);
                state.update_internal(&s, &f_int, 1.0).unwrap();
            }
        }
    }
}

#[test]
fn nondegeneracy_persists_on_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(233);
    for domain in test_domains() {
        for variant in [CbaVariant::Cba, CbaVariant::CbaPlus] {
            let mut state = CbaState::new(domain.clone(), variant, WeightSchedule::uniform());
            let mut nonzero_seen = false;
            for _ in 0..400 {
                let s = state.choose_internal().unwrap();
                let f: Vec<f64> = (0..domain.internal_dim())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                state.update_internal(&s, &f, 1.0).unwrap();
                let norm = state.effective_aggregate().unwrap().norm2();
                if nonzero_seen {
                    assert!(norm > 0.0, "non-degeneracy persistence violated");
                }
                nonzero_seen |= norm > 0.0;
            }
        }
    }
}
