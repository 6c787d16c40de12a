//! Uplink medium: per-iteration availability, multichannel ALOHA slot
//! resolution with collisions, and the round-robin polling schedule.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};

/// Per-user availability for one iteration (true = can compute its update).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityVector(Vec<bool>);

impl AvailabilityVector {
    pub fn is_available(&self, user: usize) -> bool {
        self.0[user]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|a| **a).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }
}

/// One user's uplink transmission in one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransmissionAttempt {
    pub user: usize,
    pub channel: usize,
}

/// How one channel resolved in one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotOutcome {
    Idle,
    Success(usize),
    Collision(usize),
}

/// Resolution of every channel in one iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOutcome {
    pub slots: Vec<SlotOutcome>,
}

impl ChannelOutcome {
    /// Users whose upload got through, in channel order.
    pub fn successes(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots.iter().filter_map(|s| match s {
            SlotOutcome::Success(u) => Some(*u),
            _ => None,
        })
    }

    pub fn success_count(&self) -> usize {
        self.successes().count()
    }

    /// Number of attempts lost to collisions.
    pub fn collided_attempts(&self) -> usize {
        self.slots
            .iter()
            .map(|s| match s {
                SlotOutcome::Collision(n) => *n,
                _ => 0,
            })
            .sum()
    }
}

/// Draw i.i.d. Bernoulli(p_comp) availability for K users, ascending index.
pub fn draw_availability<R: Rng>(
    k: usize,
    p_comp: f64,
    rng: &mut R,
) -> Result<AvailabilityVector> {
    if !(0.0..=1.0).contains(&p_comp) {
        return Err(Error::InvalidParameter(format!("p_comp must be in [0,1], got {p_comp}")));
    }
    Ok(AvailabilityVector((0..k).map(|_| rng.gen::<f64>() < p_comp).collect()))
}

/// Uniform channel choice in [0, M).
pub fn choose_channel<R: Rng>(m: usize, rng: &mut R) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be >= 1".into()));
    }
    Ok(rng.gen_range(0..m))
}

/// Resolve one slot: a channel delivers iff exactly one attempt chose it.
pub fn resolve_slot(attempts: &[TransmissionAttempt], m: usize) -> Result<ChannelOutcome> {
    let mut seen = HashSet::new();
    for a in attempts {
        if a.channel >= m {
            return Err(Error::InvalidParameter(format!(
                "channel id {} out of range for M = {m}",
                a.channel
            )));
        }
        if !seen.insert(a.user) {
            return Err(Error::InvalidParameter(format!(
                "user {} appears in more than one attempt",
                a.user
            )));
        }
    }
    let mut slots = vec![SlotOutcome::Idle; m];
    for a in attempts {
        slots[a.channel] = match slots[a.channel] {
            SlotOutcome::Idle => SlotOutcome::Success(a.user),
            SlotOutcome::Success(_) => SlotOutcome::Collision(2),
            SlotOutcome::Collision(n) => SlotOutcome::Collision(n + 1),
        };
    }
    Ok(ChannelOutcome { slots })
}

/// Round-robin polling: iteration t nominates users ((t·M + i) mod K) for
/// i = 0..M−1, one per dedicated channel.
pub fn poll_schedule(t: usize, k: usize, m: usize) -> Result<Vec<usize>> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameter("K and M must be >= 1".into()));
    }
    if m > k {
        return Err(Error::InvalidParameter(format!("M = {m} exceeds K = {k}")));
    }
    Ok((0..m).map(|i| (t * m + i) % k).collect())
}

/// P̂_t: number of users that transmitted, regardless of collisions.
pub fn count_active(attempts: &[TransmissionAttempt]) -> usize {
    attempts.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn availability_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(draw_availability(50, 1.0, &mut rng).unwrap().count(), 50);
        assert_eq!(draw_availability(50, 0.0, &mut rng).unwrap().count(), 0);
        assert!(draw_availability(5, 1.5, &mut rng).is_err());
    }

    #[test]
    fn availability_binomial_mean() {
        // 10^3 draws of K = 1000 at p = 0.1: sample mean within 5 sigma.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 1000;
        let total: usize =
            (0..draws).map(|_| draw_availability(1000, 0.1, &mut rng).unwrap().count()).sum();
        let mean = total as f64 / draws as f64;
        let sigma = (1000.0 * 0.1 * 0.9 / draws as f64).sqrt();
        assert!((mean - 100.0).abs() < 5.0 * sigma, "mean {mean}");
    }

    #[test]
    fn choose_channel_bounds_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            assert_eq!(choose_channel(1, &mut rng).unwrap(), 0);
        }
        assert!(choose_channel(0, &mut rng).is_err());
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            assert_eq!(choose_channel(7, &mut a).unwrap(), choose_channel(7, &mut b).unwrap());
        }
    }

    #[test]
    fn choose_channel_uniform_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = 10;
        let n = 100_000;
        let mut counts = vec![0usize; m];
        for _ in 0..n {
            counts[choose_channel(m, &mut rng).unwrap()] += 1;
        }
        let p = 1.0 / m as f64;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - n as f64 * p).abs() < 5.0 * sigma, "count {c}");
        }
    }

    #[test]
    fn resolve_slot_cases() {
        let att = |u, c| TransmissionAttempt { user: u, channel: c };
        let out = resolve_slot(&[att(4, 3)], 5).unwrap();
        assert_eq!(out.slots[3], SlotOutcome::Success(4));
        assert_eq!(out.success_count(), 1);
        assert_eq!(out.slots.iter().filter(|s| **s == SlotOutcome::Idle).count(), 4);

        let out = resolve_slot(&[att(0, 0), att(1, 0)], 2).unwrap();
        assert_eq!(out.slots[0], SlotOutcome::Collision(2));
        assert_eq!(out.success_count(), 0);
        assert_eq!(out.collided_attempts(), 2);

        let out = resolve_slot(&[att(0, 0), att(1, 1)], 2).unwrap();
        assert_eq!(out.success_count(), 2);

        assert!(resolve_slot(&[att(0, 2)], 2).is_err());
        assert!(resolve_slot(&[att(0, 0), att(0, 1)], 2).is_err());
    }

    #[test]
    fn resolve_slot_conservation() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let m = rng.gen_range(1..8);
            let n = rng.gen_range(0..20);
            let attempts: Vec<_> = (0..n)
                .map(|u| TransmissionAttempt { user: u, channel: rng.gen_range(0..m) })
                .collect();
            let out = resolve_slot(&attempts, m).unwrap();
            assert_eq!(out.success_count() + out.collided_attempts(), count_active(&attempts));
        }
    }

    #[test]
    fn aloha_success_matches_analytic_expectation() {
        // n attempts, each uniform over M channels: E[successes] = n(1-1/M)^(n-1).
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (n, m) in [(5usize, 3usize), (10, 10), (20, 4)] {
            let trials = 20_000;
            let mut total = 0usize;
            for _ in 0..trials {
                let attempts: Vec<_> = (0..n)
                    .map(|u| TransmissionAttempt {
                        user: u,
                        channel: choose_channel(m, &mut rng).unwrap(),
                    })
                    .collect();
                total += resolve_slot(&attempts, m).unwrap().success_count();
            }
            let mean = total as f64 / trials as f64;
            let expect = n as f64 * (1.0 - 1.0 / m as f64).powi(n as i32 - 1);
            // conservative per-trial std bound of n/2
            let sigma = (n as f64 / 2.0) / (trials as f64).sqrt();
            assert!((mean - expect).abs() < 3.0 * sigma, "n={n} m={m} mean {mean} expect {expect}");
        }
    }

    #[test]
    fn poll_schedule_cases() {
        assert_eq!(poll_schedule(0, 5, 2).unwrap(), vec![0, 1]);
        assert_eq!(poll_schedule(2, 5, 2).unwrap(), vec![4, 0]);
        assert!(poll_schedule(0, 5, 6).is_err());
    }

    #[test]
    fn poll_schedule_permutation_with_m1() {
        let k = 7;
        let mut seen = vec![0; k];
        for t in 0..k {
            for u in poll_schedule(t, k, 1).unwrap() {
                seen[u] += 1;
            }
        }
        assert!(seen.iter().all(|c| *c == 1));
    }

    #[test]
    fn poll_schedule_even_coverage_over_lcm() {
        let (k, m) = (10usize, 4usize);
        let lcm = 20; // lcm(10, 4)
        let mut seen = vec![0; k];
        for t in 0..lcm / m {
            for u in poll_schedule(t, k, m).unwrap() {
                seen[u] += 1;
            }
        }
        let first = seen[0];
        assert!(seen.iter().all(|c| *c == first), "{seen:?}");
    }

    #[test]
    fn count_active_regardless_of_collisions() {
        let att = |u, c| TransmissionAttempt { user: u, channel: c };
        assert_eq!(count_active(&[]), 0);
        assert_eq!(count_active(&[att(0, 0), att(1, 0), att(2, 1)]), 3);
    }
}
