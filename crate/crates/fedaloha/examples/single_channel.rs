//! Single-channel scheduling baselines: cyclic coordinate descent (the base
//! station polls user t mod K) versus a genie that always picks the user with
//! the largest gradient norm.
//!
//! Run with: cargo run --example single_channel

use fedaloha::{run, Policy, SimConfig};

fn main() -> fedaloha::Result<()> {
    let base = SimConfig {
        k: 100,
        m: 1,
        l: 10,
        p_comp: 1.0,
        t: 1000,
        seed: 5,
        ..SimConfig::default()
    };

    let ccd = run(&SimConfig { policy: Policy::Ccd, ..base.clone() })?;
    let genie = run(&SimConfig { policy: Policy::GenieMaxNorm, ..base })?;

    println!("K = 100 users, one channel, one update per iteration\n");
    println!("{:>6}  {:>12}  {:>12}", "t", "ccd", "genie");
    for t in (0..1000).step_by(100).chain([999]) {
        println!(
            "{t:>6}  {:>12.4e}  {:>12.4e}",
            ccd.reports[t].error,
            genie.reports[t].error
        );
    }
    println!("\nGreedy max-norm selection converges markedly faster than round-robin.");
    Ok(())
}
