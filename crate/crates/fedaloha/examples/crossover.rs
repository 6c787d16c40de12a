//! Sweep the compliance constraint p_comp and find where polling overtakes
//! equal-probability ALOHA. ALOHA's throughput is capped near M·e⁻¹ updates
//! per iteration no matter how many users may transmit, while polling collects
//! exactly M·p_comp on average — so polling wins once p_comp is large enough.
//!
//! Run with: cargo run --example crossover

use fedaloha::{run_many, Policy, SimConfig};

fn main() -> fedaloha::Result<()> {
    let base = SimConfig { k: 1000, m: 10, t: 100, seed: 17, runs: 5, ..SimConfig::default() };

    println!("K = 1000, M = 10, T = 100, error after the sweep, {} runs each\n", base.runs);
    println!("{:>7}  {:>14}  {:>14}  winner", "p_comp", "polling", "equal aloha");
    for i in 1..=10 {
        let p_comp = i as f64 / 10.0;
        let last = |policy| -> fedaloha::Result<f64> {
            let avg = run_many(&SimConfig { policy, p_comp, ..base.clone() })?;
            Ok(avg.error_mean[avg.len() - 1])
        };
        let polling = last(Policy::Polling)?;
        let equal = last(Policy::EqualAloha)?;
        let winner = if polling < equal { "polling" } else { "equal" };
        println!("{p_comp:>7.1}  {polling:>14.4e}  {equal:>14.4e}  {winner}");
    }
    Ok(())
}
