//! Solve the centralized access-probability program with the clipped
//! water-filling solver and inspect the solution.
//!
//! Given per-user significances a_k, the solver picks success probabilities
//! q_k minimizing the error bound Σ a_k·e^(−q_k) subject to the throughput
//! budget Σ q_k = M·e⁻¹ and 0 ≤ q_k ≤ e⁻¹. Users with large a_k saturate at
//! q = e⁻¹, insignificant users are shut off at q = 0, and the rest share the
//! remaining budget at a common water level.
//!
//! Run with: cargo run --example water_filling

use fedaloha::access::{error_bound, p_from_q, solve_centralized, E_INV};

fn main() -> fedaloha::Result<()> {
    // A spread of significances: two dominant users, a midfield, and noise.
    let a = vec![9.0, 6.5, 2.0, 1.8, 1.6, 1.5, 0.15, 0.05, 0.01, 0.002];
    let m = 3;

    let q = solve_centralized(&a, m)?;
    println!("M = {m} channels, budget Σq = M·e⁻¹ = {:.6}\n", m as f64 * E_INV);
    println!("{:>6}  {:>8}  {:>8}  {:>8}  note", "a_k", "q_k", "p_k", "a·e^-q");
    for (ak, qk) in a.iter().zip(&q) {
        let note = if (qk - E_INV).abs() < 1e-9 {
            "saturated (q = e⁻¹, p = 1)"
        } else if *qk < 1e-9 {
            "shut off"
        } else {
            "water level"
        };
        println!(
            "{ak:>6.3}  {qk:>8.5}  {:>8.5}  {:>8.5}  {note}",
            p_from_q(*qk)?,
            ak * (-qk).exp()
        );
    }
    println!("\nbudget used: {:.9}", q.iter().sum::<f64>());
    println!("error bound: {:.6}", error_bound(&a, &q)?);
    Ok(())
}
