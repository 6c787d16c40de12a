use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use fedaloha::cli::{preset_command, simulate_command, Preset};

#[derive(Parser)]
#[command(
    name = "fedaloha",
    about = "Simulate federated learning over a multichannel ALOHA uplink",
    long_about = "Simulate federated learning over a multichannel random-access uplink.\n\
        Config files are line-oriented key=value documents; keys: K, M, L, mu1, mu,\n\
        p_comp, T, policy (polling|equal|adaptive|ccd|genie), significance\n\
        (weight-norm|delta-norm|grad-norm), aggregation (mean|sum-gradient), seed,\n\
        runs. Omitted keys take the defaults echoed to stderr on every run."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file and emit a CSV trajectory
    Simulate {
        /// Path to the key=value config file
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in experiment preset (fig1|fig2|fig3a|fig3b|fig4)
    Preset {
        /// Preset name
        #[arg(long)]
        name: String,
        /// Directory receiving one CSV per policy/sweep point
        #[arg(long)]
        out_dir: PathBuf,
        /// Runs averaged per config
        #[arg(long, default_value_t = 20)]
        runs: usize,
        /// Base seed (run r uses seed XOR r)
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config, out } => simulate_command(&config, out.as_deref()),
        Command::Preset { name, out_dir, runs, seed } => match Preset::from_str(&name) {
            Ok(preset) => preset_command(preset, &out_dir, seed, runs),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
