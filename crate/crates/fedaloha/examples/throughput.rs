//! Measure multichannel ALOHA throughput against the closed form
//! K·p·(1 − p/M)^(K−1) and show it peaks at p = M/K.
//!
//! Run with: cargo run --example throughput

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fedaloha::access::expected_successes;
use fedaloha::channel::{choose_channel, resolve_slot, TransmissionAttempt};

fn main() -> fedaloha::Result<()> {
    let k = 200;
    let m = 10;
    let slots = 20_000;
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    println!("K = {k} users, M = {m} channels, {slots} slots per point");
    println!("{:>6}  {:>10}  {:>10}", "p", "measured", "predicted");
    for step in 1..=10 {
        let p = step as f64 * 0.01;
        let mut total = 0usize;
        for _ in 0..slots {
            let mut attempts = Vec::new();
            for user in 0..k {
                if rng.gen::<f64>() < p {
                    attempts.push(TransmissionAttempt { user, channel: choose_channel(m, &mut rng)? });
                }
            }
            total += resolve_slot(&attempts, m)?.success_count();
        }
        let measured = total as f64 / slots as f64;
        let predicted = expected_successes(k, m, p)?;
        println!("{p:>6.2}  {measured:>10.4}  {predicted:>10.4}");
    }
    println!("\nThe peak sits at p = M/K = {:.2}.", m as f64 / k as f64);
    Ok(())
}
