//! Access-probability policies and the optimization machinery behind the
//! norm-adaptive scheme: throughput formulas, the convex success-probability
//! program with its clipped water-filling solution, and the dual-ascent
//! feedback law.

use crate::error::{Error, Result};
use crate::model::{gradient, ModelInstance, WeightVector};

/// e^-1, the per-user cap on the success probability q_k.
pub const E_INV: f64 = 1.0 / std::f64::consts::E;

/// Equal access probability for multichannel ALOHA: min(M/K, p_comp).
pub fn equal_access_probability(k: usize, m: usize, p_comp: f64) -> Result<f64> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("K and M must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p_comp) {
        return Err(Error::InvalidParameter(format!("p_comp must be in [0,1], got {p_comp}")));
    }
    Ok((m as f64 / k as f64).min(p_comp))
}

/// Average successful uploads per iteration when all K users transmit with
/// probability p over M channels: K·p·(1 − p/M)^(K−1), exact form.
pub fn expected_successes(k: usize, m: usize, p: f64) -> Result<f64> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("K and M must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must be in [0,1], got {p}")));
    }
    Ok(k as f64 * p * (1.0 - p / m as f64).powi(k as i32 - 1))
}

/// Probability the BS successfully receives user k's update given everyone's
/// access probabilities: p_k · Π_{n≠k}(1 − p_n/M), exact product form.
pub fn success_probability(p_all: &[f64], k: usize, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be >= 1".into()));
    }
    if k >= p_all.len() {
        return Err(Error::InvalidParameter(format!(
            "user index {k} out of range for K = {}",
            p_all.len()
        )));
    }
    for p in p_all {
        if !(0.0..=1.0).contains(p) {
            return Err(Error::InvalidParameter(format!("probability {p} outside [0,1]")));
        }
    }
    let mf = m as f64;
    let prod: f64 =
        p_all.iter().enumerate().filter(|(n, _)| *n != k).map(|(_, p)| 1.0 - p / mf).product();
    Ok(p_all[k] * prod)
}

/// Upper bound on the conditional aggregation error: Σ a_k·e^(−q_k).
pub fn error_bound(a: &[f64], q: &[f64]) -> Result<f64> {
    if a.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: q.len() });
    }
    for (ak, qk) in a.iter().zip(q) {
        if *ak < 0.0 {
            return Err(Error::InvalidParameter(format!("significance {ak} must be >= 0")));
        }
        if !(0.0..=1.0).contains(qk) {
            return Err(Error::InvalidParameter(format!("probability {qk} outside [0,1]")));
        }
    }
    Ok(a.iter().zip(q).map(|(ak, qk)| ak * (-qk).exp()).sum())
}

fn clipped_sum(a: &[f64], ln_lambda: f64) -> f64 {
    a.iter()
        .filter(|ak| **ak > 0.0)
        .map(|ak| (ak.ln() - ln_lambda).clamp(0.0, E_INV))
        .sum()
}

/// Centralized optimizer of the error bound under the budget Σq = M·e⁻¹ with
/// 0 ≤ q_k ≤ e⁻¹: the clipped water-filling solution
/// q*_k = clip(ln a_k − ln λ, 0, e⁻¹), with λ found by bisection.
pub fn solve_centralized(a: &[f64], m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be >= 1".into()));
    }
    for ak in a {
        if *ak < 0.0 || ak.is_nan() {
            return Err(Error::InvalidParameter(format!("significance {ak} must be >= 0")));
        }
    }
    let positive: Vec<f64> = a.iter().copied().filter(|ak| *ak > 0.0).collect();
    if positive.len() < m {
        return Err(Error::Infeasible { positive: positive.len(), m });
    }
    let budget = m as f64 * E_INV;
    let lo0 = positive.iter().fold(f64::INFINITY, |acc, ak| acc.min(ak.ln())) - 1.0;
    let hi0 = positive.iter().fold(f64::NEG_INFINITY, |acc, ak| acc.max(ak.ln())) + 1.0;

    // clipped_sum is continuous and nonincreasing in ln λ, from
    // |positive|·e⁻¹ ≥ M·e⁻¹ at lo0 down to 0 at hi0.
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if clipped_sum(a, mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick the bracket end whose budget residual is smaller
    let ln_lambda = if (clipped_sum(a, lo) - budget).abs() <= (clipped_sum(a, hi) - budget).abs() {
        lo
    } else {
        hi
    };
    Ok(a.iter()
        .map(|ak| if *ak > 0.0 { (ak.ln() - ln_lambda).clamp(0.0, E_INV) } else { 0.0 })
        .collect())
}

/// p = q·e, the access probability for a target success probability.
pub fn p_from_q(q: f64) -> Result<f64> {
    if !(0.0..=E_INV + 1e-15).contains(&q) {
        return Err(Error::InvalidParameter(format!("q must be in [0, e^-1], got {q}")));
    }
    Ok((q * std::f64::consts::E).min(1.0))
}

/// q = p·e⁻¹.
pub fn q_from_p(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must be in [0,1], got {p}")));
    }
    Ok(p * E_INV)
}

/// Distributed access probability from the broadcast feedback:
/// clip(e·ln a_k − ψ, 0, 1), with a_k = 0 mapping straight to 0.
pub fn adaptive_probability(a_k: f64, psi: f64) -> f64 {
    debug_assert!(a_k >= 0.0);
    if a_k <= 0.0 {
        return 0.0;
    }
    (std::f64::consts::E * a_k.ln() - psi).clamp(0.0, 1.0)
}

/// Dual-ascent step on the feedback signal: ψ + μ·(P̂ − M).
pub fn dual_ascent_update(psi: f64, p_hat: usize, m: usize, mu: f64) -> f64 {
    debug_assert!(mu > 0.0);
    psi + mu * (p_hat as f64 - m as f64)
}

/// Cyclic coordinate descent schedule: user t mod K uploads at iteration t.
pub fn ccd_select(t: usize, k: usize) -> usize {
    debug_assert!(k >= 1);
    t % k
}

/// Genie selection: the user whose local gradient has the largest norm,
/// ties broken by lowest index.
pub fn genie_select(instance: &ModelInstance, w: &WeightVector) -> Result<usize> {
    let mut best = 0usize;
    let mut best_norm = f64::NEG_INFINITY;
    for (k, d) in instance.datasets.iter().enumerate() {
        let g = gradient(w, d)?.norm();
        if g > best_norm {
            best_norm = g;
            best = k;
        }
    }
    Ok(best)
}
