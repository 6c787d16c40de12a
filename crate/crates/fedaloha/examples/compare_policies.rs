//! Compare the three uplink disciplines under a tight compliance constraint
//! (p_comp = 0.1): sequential polling, equal-probability multichannel ALOHA,
//! and norm-adaptive ALOHA with dual-ascent feedback.
//!
//! Run with: cargo run --example compare_policies

use fedaloha::{run_many, Policy, SimConfig};

fn main() -> fedaloha::Result<()> {
    let base = SimConfig {
        k: 1000,
        m: 10,
        p_comp: 0.1,
        t: 1000,
        seed: 11,
        runs: 5,
        ..SimConfig::default()
    };

    println!("K = 1000, M = 10, p_comp = 0.1, averaged over {} runs\n", base.runs);
    println!(
        "{:>10}  {:>12}  {:>14}  {:>12}",
        "policy", "final error", "successes/iter", "collisions/iter"
    );
    for policy in [Policy::Polling, Policy::EqualAloha, Policy::AdaptiveAloha] {
        let avg = run_many(&SimConfig { policy, ..base.clone() })?;
        let last = avg.len() - 1;
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "{:>10}  {:>12.4e}  {:>14.3}  {:>12.3}",
            format!("{policy:?}"),
            avg.error_mean[last],
            mean(&avg.successes_mean),
            mean(&avg.collisions_mean),
        );
    }
    println!(
        "\nWith only 10% of users allowed to transmit, polling wastes most slots\n\
         while both ALOHA variants keep all M channels busy; the adaptive variant\n\
         additionally favors high-significance users and converges fastest."
    );
    Ok(())
}
