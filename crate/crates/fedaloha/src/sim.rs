//! Per-iteration simulation loop tying model, channel, and access together,
//! plus multi-seed averaging.
//!
//! Random draw order within one iteration is fixed for reproducibility:
//! availability coins first (ascending user index), then — for the ALOHA
//! policies only — one channel choice per user (ascending index), then one
//! access coin per user (ascending index). Channels and coins are drawn for
//! every user whether or not they end up transmitting, so the stream does not
//! depend on data values. Polling, CCD, and genie selection draw only the
//! availability coins.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::access::{
    adaptive_probability, ccd_select, dual_ascent_update, equal_access_probability, genie_select,
};
use crate::channel::{
    choose_channel, count_active, draw_availability, poll_schedule, resolve_slot,
    TransmissionAttempt,
};
use crate::error::{Error, Result};
use crate::model::{
    aggregate, error_norm, generate_instance, local_update, AggregationMode, SignificanceMode,
    WeightVector,
};

/// The five upload disciplines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Round-robin polling of M users on dedicated channels.
    Polling,
    /// Multichannel ALOHA with the equal access probability min(M/K, p_comp).
    #[default]
    EqualAloha,
    /// Multichannel ALOHA with norm-adaptive access probabilities driven by
    /// the dual-ascent feedback signal.
    AdaptiveAloha,
    /// Cyclic coordinate descent: user t mod K uploads, single channel.
    Ccd,
    /// Genie selection of the largest-gradient user, single channel.
    GenieMaxNorm,
}

/// Full experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub k: usize,
    pub m: usize,
    pub l: usize,
    pub mu1: f64,
    pub mu: f64,
    pub p_comp: f64,
    pub t: usize,
    pub policy: Policy,
    pub significance: SignificanceMode,
    pub aggregation: AggregationMode,
    pub seed: u64,
    pub runs: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            k: 1000,
            m: 10,
            l: 10,
            mu1: 0.01,
            mu: 0.1,
            p_comp: 0.1,
            t: 1000,
            policy: Policy::default(),
            significance: SignificanceMode::default(),
            aggregation: AggregationMode::default(),
            seed: 1,
            runs: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.l == 0 || self.m == 0 {
            return Err(Error::InvalidParameter("K, M, and L must be >= 1".into()));
        }
        if self.m > self.k {
            return Err(Error::InvalidParameter(format!(
                "M = {} exceeds K = {}",
                self.m, self.k
            )));
        }
        if self.t == 0 {
            return Err(Error::InvalidParameter("T must be >= 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be >= 1".into()));
        }
        if self.mu1 <= 0.0 || self.mu1.is_nan() {
            return Err(Error::InvalidParameter(format!("mu1 must be positive, got {}", self.mu1)));
        }
        if self.mu <= 0.0 || self.mu.is_nan() {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {}", self.mu)));
        }
        if !(0.0..=1.0).contains(&self.p_comp) {
            return Err(Error::InvalidParameter(format!(
                "p_comp must be in [0,1], got {}",
                self.p_comp
            )));
        }
        Ok(())
    }
}

/// Per-iteration metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundReport {
    pub t: usize,
    /// ‖w(t+1) − w_true‖ after this iteration's aggregation.
    pub error: f64,
    pub successes: usize,
    /// P̂_t: transmitting users, collisions included.
    pub active: usize,
    /// ψ_t in effect during this iteration; 0 for non-adaptive policies.
    pub psi: f64,
    /// Attempts lost to collisions this iteration.
    pub collisions: usize,
}

/// One run's full history.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub reports: Vec<RoundReport>,
    pub final_w: WeightVector,
}

/// Pointwise mean/std curves across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunAverage {
    pub error_mean: Vec<f64>,
    pub error_std: Vec<f64>,
    pub successes_mean: Vec<f64>,
    pub active_mean: Vec<f64>,
    pub psi_mean: Vec<f64>,
    pub collisions_mean: Vec<f64>,
    /// Final error of each run, in run order.
    pub final_errors: Vec<f64>,
    pub runs: usize,
}

impl RunAverage {
    pub fn len(&self) -> usize {
        self.error_mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.error_mean.is_empty()
    }
}

/// Run one seeded simulation.
pub fn run(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let instance = generate_instance(config.k, config.l, &mut rng)?;
    let x_norms: Vec<f64> = instance.datasets.iter().map(|d| d.x.norm()).collect();

    let mut w = WeightVector::zeros(config.l)?;
    let mut psi = 0.0f64;
    let mut reports = Vec::with_capacity(config.t);

    for t in 0..config.t {
        let avail = draw_availability(config.k, config.p_comp, &mut rng)?;

        let mut received: Vec<WeightVector> = Vec::new();
        let (active, successes, collisions);

        match config.policy {
            Policy::Polling => {
                // dedicated channels, no collisions; unavailable polled
                // users waste their slot
                let polled = poll_schedule(t, config.k, config.m)?;
                for &u in &polled {
                    if avail.is_available(u) {
                        received.push(local_update(&w, &instance.datasets[u], config.mu1)?);
                    }
                }
                active = received.len();
                successes = received.len();
                collisions = 0;
            }
            Policy::EqualAloha | Policy::AdaptiveAloha => {
                // residuals are needed for adaptive significance and for the
                // local updates of successful uploaders
                let residuals: Vec<f64> = instance
                    .datasets
                    .iter()
                    .map(|d| w.dot(&d.x).map(|xw| xw - d.y))
                    .collect::<Result<_>>()?;

                let probs: Vec<f64> = match config.policy {
                    Policy::EqualAloha => {
                        let p = equal_access_probability(config.k, config.m, config.p_comp)?;
                        // conditional coin so the unconditional product is p
                        let coin = if config.p_comp > 0.0 { p / config.p_comp } else { 0.0 };
                        vec![coin; config.k]
                    }
                    _ => (0..config.k)
                        .map(|u| {
                            let a = if avail.is_available(u) {
                                let grad_norm = residuals[u].abs() * x_norms[u];
                                match config.significance {
                                    SignificanceMode::GradNorm => grad_norm,
                                    SignificanceMode::DeltaNorm => config.mu1 * grad_norm,
                                    SignificanceMode::WeightNorm => {
                                        local_update(&w, &instance.datasets[u], config.mu1)
                                            .map(|v| v.norm())
                                            .unwrap_or(0.0)
                                    }
                                }
                            } else {
                                0.0
                            };
                            adaptive_probability(a, psi)
                        })
                        .collect(),
                };

                let channels: Vec<usize> = (0..config.k)
                    .map(|_| choose_channel(config.m, &mut rng))
                    .collect::<Result<_>>()?;
                let coins: Vec<f64> = (0..config.k).map(|_| rng.gen::<f64>()).collect();

                let attempts: Vec<TransmissionAttempt> = (0..config.k)
                    .filter(|&u| avail.is_available(u) && coins[u] < probs[u])
                    .map(|u| TransmissionAttempt { user: u, channel: channels[u] })
                    .collect();
                let outcome = resolve_slot(&attempts, config.m)?;
                for u in outcome.successes() {
                    received.push(local_update(&w, &instance.datasets[u], config.mu1)?);
                }
                active = count_active(&attempts);
                successes = outcome.success_count();
                collisions = outcome.collided_attempts();
            }
            Policy::Ccd | Policy::GenieMaxNorm => {
                let u = match config.policy {
                    Policy::Ccd => ccd_select(t, config.k),
                    _ => genie_select(&instance, &w)?,
                };
                if avail.is_available(u) {
                    received.push(local_update(&w, &instance.datasets[u], config.mu1)?);
                }
                active = received.len();
                successes = received.len();
                collisions = 0;
            }
        }

        w = aggregate(&w, &received, config.aggregation)?;

        let psi_used = if config.policy == Policy::AdaptiveAloha { psi } else { 0.0 };
        reports.push(RoundReport {
            t,
            error: error_norm(&w, &instance.w_true)?,
            successes,
            active,
            psi: psi_used,
            collisions,
        });

        if config.policy == Policy::AdaptiveAloha {
            // broadcast with w(t+1), applied from the next iteration on
            psi = dual_ascent_update(psi, active, config.m, config.mu);
        }
    }

    Ok(Trajectory { reports, final_w: w })
}

/// Run `config.runs` independent seeds (seed of run r = base seed XOR r) and
/// average the per-iteration curves pointwise. Standard deviations are the
/// sample kind (n − 1 denominator), 0 for a single run.
pub fn run_many(config: &SimConfig) -> Result<RunAverage> {
    config.validate()?;
    let trajectories: Vec<Trajectory> = (0..config.runs)
        .map(|r| {
            let mut c = config.clone();
            c.seed = config.seed ^ r as u64;
            c.runs = 1;
            run(&c)
        })
        .collect::<Result<_>>()?;

    let t_len = config.t;
    let n = config.runs as f64;
    let mut avg = RunAverage {
        error_mean: vec![0.0; t_len],
        error_std: vec![0.0; t_len],
        successes_mean: vec![0.0; t_len],
        active_mean: vec![0.0; t_len],
        psi_mean: vec![0.0; t_len],
        collisions_mean: vec![0.0; t_len],
        final_errors: trajectories.iter().map(|tr| tr.reports[t_len - 1].error).collect(),
        runs: config.runs,
    };
    for tr in &trajectories {
        for (i, rep) in tr.reports.iter().enumerate() {
            avg.error_mean[i] += rep.error;
            avg.successes_mean[i] += rep.successes as f64;
            avg.active_mean[i] += rep.active as f64;
            avg.psi_mean[i] += rep.psi;
            avg.collisions_mean[i] += rep.collisions as f64;
        }
    }
    for i in 0..t_len {
        avg.error_mean[i] /= n;
        avg.successes_mean[i] /= n;
        avg.active_mean[i] /= n;
        avg.psi_mean[i] /= n;
        avg.collisions_mean[i] /= n;
    }
    if config.runs > 1 {
        for tr in &trajectories {
            for (i, rep) in tr.reports.iter().enumerate() {
                let d = rep.error - avg.error_mean[i];
                avg.error_std[i] += d * d;
            }
        }
        for s in &mut avg.error_std {
            *s = (*s / (n - 1.0)).sqrt();
        }
    }
    Ok(avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gradient, UserDataset};

    fn small_config(policy: Policy) -> SimConfig {
        SimConfig { k: 20, m: 4, l: 5, t: 50, policy, seed: 7, ..SimConfig::default() }
    }

    #[test]
    fn invalid_configs_rejected() {
        let base = SimConfig::default();
        assert!(run(&SimConfig { m: base.k + 1, ..base.clone() }).is_err());
        assert!(run(&SimConfig { t: 0, ..base.clone() }).is_err());
        assert!(run(&SimConfig { p_comp: 1.5, ..base.clone() }).is_err());
        assert!(run(&SimConfig { mu1: 0.0, ..base }).is_err());
    }

    #[test]
    fn determinism_bit_identical() {
        for policy in
            [Policy::Polling, Policy::EqualAloha, Policy::AdaptiveAloha, Policy::Ccd, Policy::GenieMaxNorm]
        {
            let c = small_config(policy);
            let a = run(&c).unwrap();
            let b = run(&c).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn conservation_per_round() {
        for policy in [Policy::EqualAloha, Policy::AdaptiveAloha] {
            let mut c = small_config(policy);
            c.p_comp = 0.8;
            let tr = run(&c).unwrap();
            for rep in &tr.reports {
                assert_eq!(rep.successes + rep.collisions, rep.active);
                assert!(rep.successes <= c.m);
            }
        }
    }

    #[test]
    fn polling_degenerate_single_user_is_plain_gd() {
        let c = SimConfig {
            k: 1,
            m: 1,
            l: 3,
            t: 30,
            p_comp: 1.0,
            policy: Policy::Polling,
            seed: 3,
            ..SimConfig::default()
        };
        let tr = run(&c).unwrap();
        // recompute plain GD on the single dataset
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = generate_instance(1, 3, &mut rng).unwrap();
        let mut w = WeightVector::zeros(3).unwrap();
        for rep in &tr.reports {
            assert_eq!(rep.successes, 1);
            w = local_update(&w, &inst.datasets[0], c.mu1).unwrap();
            assert_eq!(rep.error, error_norm(&w, &inst.w_true).unwrap());
        }
        assert_eq!(tr.final_w, w);
    }

    #[test]
    fn polling_full_pass_touches_every_user_once() {
        let c = SimConfig {
            k: 20,
            m: 5,
            l: 4,
            t: 4,
            p_comp: 1.0,
            policy: Policy::Polling,
            seed: 11,
            ..SimConfig::default()
        };
        let tr = run(&c).unwrap();
        for rep in &tr.reports {
            assert_eq!(rep.successes, c.m);
        }
        let mut seen = vec![0usize; c.k];
        for t in 0..c.t {
            for u in poll_schedule(t, c.k, c.m).unwrap() {
                seen[u] += 1;
            }
        }
        assert!(seen.iter().all(|n| *n == 1));
    }

    #[test]
    fn ccd_reproduces_closed_form_recursion_bit_exactly() {
        let c = SimConfig {
            k: 15,
            m: 1,
            l: 6,
            t: 100,
            p_comp: 1.0,
            policy: Policy::Ccd,
            seed: 19,
            ..SimConfig::default()
        };
        let tr = run(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let inst = generate_instance(c.k, c.l, &mut rng).unwrap();
        let mut w = WeightVector::zeros(c.l).unwrap();
        for (t, rep) in tr.reports.iter().enumerate() {
            let d: &UserDataset = &inst.datasets[t % c.k];
            w = local_update(&w, d, c.mu1).unwrap();
            assert_eq!(rep.error, error_norm(&w, &inst.w_true).unwrap(), "iteration {t}");
        }
        assert_eq!(tr.final_w, w);
    }

    #[test]
    fn genie_picks_largest_gradient_each_round() {
        let mut c = small_config(Policy::GenieMaxNorm);
        c.p_comp = 1.0;
        let tr = run(&c).unwrap();
        // replay: at every step the aggregated w must equal the update of the
        // argmax-gradient user
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let inst = generate_instance(c.k, c.l, &mut rng).unwrap();
        let mut w = WeightVector::zeros(c.l).unwrap();
        for rep in &tr.reports {
            let best = (0..c.k)
                .max_by(|&a, &b| {
                    let ga = gradient(&w, &inst.datasets[a]).unwrap().norm();
                    let gb = gradient(&w, &inst.datasets[b]).unwrap().norm();
                    ga.partial_cmp(&gb).unwrap()
                })
                .unwrap();
            w = local_update(&w, &inst.datasets[best], c.mu1).unwrap();
            assert_eq!(rep.error, error_norm(&w, &inst.w_true).unwrap());
        }
    }

    #[test]
    fn psi_starts_at_zero_and_updates_by_dual_ascent() {
        let mut c = small_config(Policy::AdaptiveAloha);
        c.p_comp = 1.0;
        let tr = run(&c).unwrap();
        assert_eq!(tr.reports[0].psi, 0.0);
        for pair in tr.reports.windows(2) {
            let expected = dual_ascent_update(pair[0].psi, pair[0].active, c.m, c.mu);
            assert_eq!(pair[1].psi, expected);
        }
    }

    #[test]
    fn non_adaptive_policies_report_zero_psi() {
        for policy in [Policy::Polling, Policy::EqualAloha, Policy::Ccd] {
            let tr = run(&small_config(policy)).unwrap();
            assert!(tr.reports.iter().all(|r| r.psi == 0.0));
        }
    }

    #[test]
    fn run_many_single_run_matches_run() {
        let c = small_config(Policy::EqualAloha);
        let tr = run(&c).unwrap();
        let avg = run_many(&c).unwrap();
        assert_eq!(avg.runs, 1);
        for (i, rep) in tr.reports.iter().enumerate() {
            assert_eq!(avg.error_mean[i], rep.error);
            assert_eq!(avg.error_std[i], 0.0);
            assert_eq!(avg.successes_mean[i], rep.successes as f64);
        }
        assert_eq!(avg.final_errors, vec![tr.reports.last().unwrap().error]);
    }

    #[test]
    fn run_many_derived_seeds_differ() {
        let mut c = small_config(Policy::EqualAloha);
        c.runs = 2;
        let avg = run_many(&c).unwrap();
        assert_ne!(avg.final_errors[0], avg.final_errors[1]);
        // seed of run r is base ^ r
        let mut c1 = c.clone();
        c1.seed = c.seed ^ 1;
        c1.runs = 1;
        let tr1 = run(&c1).unwrap();
        assert_eq!(avg.final_errors[1], tr1.reports.last().unwrap().error);
    }

    #[test]
    fn run_many_standard_error_shrinks_with_runs() {
        // CLT check: stderr of the final-error mean over 200 runs is about
        // sqrt(2) smaller than over 100 runs
        let base = SimConfig {
            k: 50,
            m: 5,
            l: 4,
            t: 40,
            p_comp: 0.5,
            policy: Policy::EqualAloha,
            seed: 1234,
            ..SimConfig::default()
        };
        let stderr = |runs: usize| -> f64 {
            let mut c = base.clone();
            c.runs = runs;
            let avg = run_many(&c).unwrap();
            let n = runs as f64;
            let mean = avg.final_errors.iter().sum::<f64>() / n;
            let var =
                avg.final_errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        };
        let ratio = stderr(100) / stderr(200);
        assert!((1.0..=2.0).contains(&ratio), "ratio {ratio}");
    }
}
