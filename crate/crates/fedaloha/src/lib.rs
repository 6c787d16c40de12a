//! Federated learning over a multichannel slotted-ALOHA uplink.
//!
//! A deterministic, seedable simulator of a base station aggregating local
//! gradient updates from K users over M shared random-access channels. Three
//! upload disciplines are compared — sequential polling, equal-probability
//! multichannel ALOHA, and norm-adaptive ALOHA whose access probabilities are
//! steered by a dual-ascent feedback signal — alongside two single-channel
//! selection baselines (cyclic coordinate descent and genie max-gradient
//! selection).
//!
//! Modules:
//! - [`model`]: linear-regression data, loss, local updates, aggregation.
//! - [`channel`]: availability process, ALOHA slot resolution, polling.
//! - [`access`]: access-probability policies, the clipped water-filling
//!   solver for the success-probability program, dual ascent.
//! - [`sim`]: the per-iteration loop and multi-seed averaging.
//! - [`cli`]: config parsing, presets, CSV emission.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `fedaloha` binary for the `simulate` / `preset` subcommands.

pub mod access;
pub mod channel;
pub mod cli;
pub mod error;
pub mod model;
pub mod sim;

pub use error::{Error, Result};
pub use model::{AggregationMode, ModelInstance, SignificanceMode, UserDataset, WeightVector};
pub use sim::{run, run_many, Policy, RoundReport, RunAverage, SimConfig, Trajectory};
