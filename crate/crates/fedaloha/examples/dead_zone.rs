//! Trace the dual-ascent price ψ through its startup transient. With a loose
//! compliance constraint (p_comp = 0.6) and large initial gradients, nearly
//! every user transmits in the first iteration, so the price overshoots and
//! silences the uplink until it decays back down at slope −μ·M per iteration.
//!
//! Run with: cargo run --example dead_zone

use fedaloha::{run, Policy, SimConfig};

fn main() -> fedaloha::Result<()> {
    let config = SimConfig {
        k: 1000,
        m: 10,
        p_comp: 0.6,
        t: 120,
        seed: 4,
        policy: Policy::AdaptiveAloha,
        ..SimConfig::default()
    };
    let traj = run(&config)?;

    let dead_zone: usize = traj.reports.iter().skip(1).take_while(|r| r.active == 0).count();
    println!("K = 1000, M = 10, p_comp = 0.6, adaptive ALOHA, single run\n");
    println!("{:>5}  {:>9}  {:>7}  {:>10}  {:>10}", "t", "psi", "active", "successes", "error");
    for r in traj.reports.iter().take(8) {
        println!(
            "{:>5}  {:>9.3}  {:>7}  {:>10}  {:>10.4}",
            r.t, r.psi, r.active, r.successes, r.error
        );
    }
    println!("  ...");
    for r in traj.reports.iter().skip(dead_zone - 1).take(6) {
        println!(
            "{:>5}  {:>9.3}  {:>7}  {:>10}  {:>10.4}",
            r.t, r.psi, r.active, r.successes, r.error
        );
    }
    println!(
        "\nAfter the t=0 burst the price jumps to ψ₁ = {:.1} and nobody transmits\n\
         for {dead_zone} iterations while ψ falls by exactly μ·M = {} per step.",
        traj.reports[1].psi,
        config.mu * config.m as f64,
    );
    Ok(())
}
