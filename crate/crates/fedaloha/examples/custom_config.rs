//! Parse a key=value config document, run it, and emit the CSV trajectory —
//! the same pipeline the `fedaloha simulate` subcommand uses.
//!
//! Run with: cargo run --example custom_config

use fedaloha::cli::{emit_csv, parse_config};
use fedaloha::run_many;

fn main() -> fedaloha::Result<()> {
    let document = "\
# small adaptive run
K = 50
M = 5
T = 10
policy = adaptive
seed = 123
runs = 3
";
    let config = parse_config(document)?;
    let avg = run_many(&config)?;
    let mut csv = Vec::new();
    emit_csv(&avg, &mut csv)?;
    print!("{}", String::from_utf8(csv).expect("CSV is ASCII"));
    Ok(())
}
