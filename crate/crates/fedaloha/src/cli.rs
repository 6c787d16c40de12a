//! Experiment front end: line-oriented `key=value` config files, experiment
//! presets mirroring the common figure setups, and deterministic CSV output.
//!
//! Config keys (all optional, defaults shown by `render(&SimConfig::default())`):
//! `K`, `M`, `L`, `mu1`, `mu`, `p_comp`, `T`, `policy`
//! (`polling|equal|adaptive|ccd|genie`), `significance`
//! (`weight-norm|delta-norm|grad-norm`), `aggregation` (`mean|sum-gradient`),
//! `seed`, `runs`. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{AggregationMode, SignificanceMode};
use crate::sim::{run_many, Policy, RunAverage, SimConfig};

pub fn policy_name(p: Policy) -> &'static str {
    match p {
        Policy::Polling => "polling",
        Policy::EqualAloha => "equal",
        Policy::AdaptiveAloha => "adaptive",
        Policy::Ccd => "ccd",
        Policy::GenieMaxNorm => "genie",
    }
}

fn parse_policy(s: &str) -> Option<Policy> {
    match s {
        "polling" => Some(Policy::Polling),
        "equal" => Some(Policy::EqualAloha),
        "adaptive" => Some(Policy::AdaptiveAloha),
        "ccd" => Some(Policy::Ccd),
        "genie" => Some(Policy::GenieMaxNorm),
        _ => None,
    }
}

fn significance_name(m: SignificanceMode) -> &'static str {
    match m {
        SignificanceMode::WeightNorm => "weight-norm",
        SignificanceMode::DeltaNorm => "delta-norm",
        SignificanceMode::GradNorm => "grad-norm",
    }
}

fn parse_significance(s: &str) -> Option<SignificanceMode> {
    match s {
        "weight-norm" => Some(SignificanceMode::WeightNorm),
        "delta-norm" => Some(SignificanceMode::DeltaNorm),
        "grad-norm" => Some(SignificanceMode::GradNorm),
        _ => None,
    }
}

fn aggregation_name(m: AggregationMode) -> &'static str {
    match m {
        AggregationMode::Mean => "mean",
        AggregationMode::SumGradient => "sum-gradient",
    }
}

fn parse_aggregation(s: &str) -> Option<AggregationMode> {
    match s {
        "mean" => Some(AggregationMode::Mean),
        "sum-gradient" => Some(AggregationMode::SumGradient),
        _ => None,
    }
}

/// Parse a line-oriented `key=value` document into a config. Unknown keys and
/// malformed lines are rejected with their line number; the assembled config
/// is validated before being returned.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut config = SimConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: line_no,
            message: format!("malformed line (expected key=value): {raw:?}"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad_value = |what: &str| Error::Config {
            line: line_no,
            message: format!("invalid value for {key}: {value:?} (expected {what})"),
        };
        match key {
            "K" => config.k = usize::from_str(value).map_err(|_| bad_value("positive integer"))?,
            "M" => config.m = usize::from_str(value).map_err(|_| bad_value("positive integer"))?,
            "L" => config.l = usize::from_str(value).map_err(|_| bad_value("positive integer"))?,
            "T" => config.t = usize::from_str(value).map_err(|_| bad_value("positive integer"))?,
            "mu1" => config.mu1 = f64::from_str(value).map_err(|_| bad_value("real number"))?,
            "mu" => config.mu = f64::from_str(value).map_err(|_| bad_value("real number"))?,
            "p_comp" => {
                config.p_comp = f64::from_str(value).map_err(|_| bad_value("real number"))?
            }
            "seed" => config.seed = u64::from_str(value).map_err(|_| bad_value("integer"))?,
            "runs" => {
                config.runs = usize::from_str(value).map_err(|_| bad_value("positive integer"))?
            }
            "policy" => {
                config.policy = parse_policy(value)
                    .ok_or_else(|| bad_value("polling|equal|adaptive|ccd|genie"))?
            }
            "significance" => {
                config.significance = parse_significance(value)
                    .ok_or_else(|| bad_value("weight-norm|delta-norm|grad-norm"))?
            }
            "aggregation" => {
                config.aggregation =
                    parse_aggregation(value).ok_or_else(|| bad_value("mean|sum-gradient"))?
            }
            _ => {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("unknown key {key:?}"),
                })
            }
        }
    }
    config.validate()?;
    Ok(config)
}

/// Render a config back into the key=value form `parse_config` accepts.
pub fn render(config: &SimConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "K={}", config.k);
    let _ = writeln!(out, "M={}", config.m);
    let _ = writeln!(out, "L={}", config.l);
    let _ = writeln!(out, "mu1={}", config.mu1);
    let _ = writeln!(out, "mu={}", config.mu);
    let _ = writeln!(out, "p_comp={}", config.p_comp);
    let _ = writeln!(out, "T={}", config.t);
    let _ = writeln!(out, "policy={}", policy_name(config.policy));
    let _ = writeln!(out, "significance={}", significance_name(config.significance));
    let _ = writeln!(out, "aggregation={}", aggregation_name(config.aggregation));
    let _ = writeln!(out, "seed={}", config.seed);
    let _ = writeln!(out, "runs={}", config.runs);
    out
}

/// Decimal notation with 9 significant digits.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).clamp(0, 30) as usize;
    format!("{x:.decimals$}")
}

/// Write the averaged curves as CSV: one header, one row per iteration,
/// LF newlines, values in decimal notation with 9 significant digits.
pub fn emit_csv<W: Write>(result: &RunAverage, mut dest: W) -> Result<()> {
    dest.write_all(b"t,error_mean,error_std,successes_mean,active_mean,psi_mean,collisions_mean\n")?;
    for i in 0..result.len() {
        let row = format!(
            "{},{},{},{},{},{},{}\n",
            i,
            format_value(result.error_mean[i]),
            format_value(result.error_std[i]),
            format_value(result.successes_mean[i]),
            format_value(result.active_mean[i]),
            format_value(result.psi_mean[i]),
            format_value(result.collisions_mean[i]),
        );
        dest.write_all(row.as_bytes())?;
    }
    Ok(())
}

/// The built-in experiment presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// CCD vs genie selection: K=100, M=1, L=10, mu1=0.01, p_comp=1, T=1000.
    Fig1,
    /// Three-system comparison at p_comp=0.1: K=1000, M=10, L=10, T=1000.
    Fig2,
    /// Error after 100 iterations vs M, all three systems.
    Fig3a,
    /// Error after 100 iterations vs p_comp, all three systems.
    Fig3b,
    /// Three-system comparison at p_comp=0.6 (feedback dead zone).
    Fig4,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3a" => Ok(Preset::Fig3a),
            "fig3b" => Ok(Preset::Fig3b),
            "fig4" => Ok(Preset::Fig4),
            _ => Err(Error::InvalidParameter(format!(
                "unknown preset {s:?} (expected fig1|fig2|fig3a|fig3b|fig4)"
            ))),
        }
    }
}

/// M values swept by fig3a.
pub const FIG3A_M_SWEEP: [usize; 5] = [2, 5, 10, 20, 50];
/// p_comp values swept by fig3b.
pub const FIG3B_PCOMP_SWEEP: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

const THREE_SYSTEMS: [Policy; 3] = [Policy::Polling, Policy::EqualAloha, Policy::AdaptiveAloha];

/// Expand a preset into named configs, one output file per entry.
pub fn expand_preset(preset: Preset, seed: u64, runs: usize) -> Vec<(String, SimConfig)> {
    let base = SimConfig { seed, runs, ..SimConfig::default() };
    match preset {
        Preset::Fig1 => [Policy::Ccd, Policy::GenieMaxNorm]
            .into_iter()
            .map(|policy| {
                let config = SimConfig {
                    k: 100,
                    m: 1,
                    p_comp: 1.0,
                    policy,
                    ..base.clone()
                };
                (format!("fig1_{}", policy_name(policy)), config)
            })
            .collect(),
        Preset::Fig2 | Preset::Fig4 => {
            let (name, p_comp) =
                if preset == Preset::Fig2 { ("fig2", 0.1) } else { ("fig4", 0.6) };
            THREE_SYSTEMS
                .into_iter()
                .map(|policy| {
                    let config = SimConfig { p_comp, policy, ..base.clone() };
                    (format!("{name}_{}", policy_name(policy)), config)
                })
                .collect()
        }
        Preset::Fig3a => FIG3A_M_SWEEP
            .into_iter()
            .flat_map(|m| {
                let base = base.clone();
                THREE_SYSTEMS.into_iter().map(move |policy| {
                    let config = SimConfig { m, t: 100, policy, ..base.clone() };
                    (format!("fig3a_M{m}_{}", policy_name(policy)), config)
                })
            })
            .collect(),
        Preset::Fig3b => FIG3B_PCOMP_SWEEP
            .into_iter()
            .enumerate()
            .flat_map(|(i, p_comp)| {
                let base = base.clone();
                THREE_SYSTEMS.into_iter().map(move |policy| {
                    let config = SimConfig { p_comp, t: 100, policy, ..base.clone() };
                    (format!("fig3b_pcomp{:02}_{}", i + 1, policy_name(policy)), config)
                })
            })
            .collect(),
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// Run the `simulate` subcommand: parse the config file, run, and write CSV
/// to `out` (or stdout when absent). The effective config is echoed to stderr
/// for audit.
pub fn simulate_command(config_path: &Path, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(config_path)?;
    let config = parse_config(&text)?;
    eprint!("{}", render(&config));
    let result = run_many(&config)?;
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)?;
            emit_csv(&result, &mut file)?;
        }
        None => {
            let stdout = std::io::stdout();
            emit_csv(&result, stdout.lock())?;
        }
    }
    Ok(())
}

/// Run the `preset` subcommand: expand, run every config, write one CSV per
/// entry into `out_dir`, and for the sweep presets an index CSV of final
/// errors per sweep point.
pub fn preset_command(preset: Preset, out_dir: &Path, seed: u64, runs: usize) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let entries = expand_preset(preset, seed, runs);
    let mut finals: Vec<(String, f64, f64)> = Vec::new();
    for (name, config) in &entries {
        let result = run_many(config)?;
        let (mean, std) = mean_std(&result.final_errors);
        finals.push((name.clone(), mean, std));
        let mut file = fs::File::create(out_dir.join(format!("{name}.csv")))?;
        emit_csv(&result, &mut file)?;
    }
    match preset {
        Preset::Fig3a => {
            let mut file = fs::File::create(out_dir.join("fig3a_index.csv"))?;
            file.write_all(b"M,policy,final_error_mean,final_error_std\n")?;
            for ((name, config), (_, mean, std)) in entries.iter().zip(&finals) {
                let policy = name.rsplit('_').next().unwrap();
                let row = format!(
                    "{},{},{},{}\n",
                    config.m,
                    policy,
                    format_value(*mean),
                    format_value(*std)
                );
                file.write_all(row.as_bytes())?;
            }
        }
        Preset::Fig3b => {
            let mut file = fs::File::create(out_dir.join("fig3b_index.csv"))?;
            file.write_all(b"p_comp,policy,final_error_mean,final_error_std\n")?;
            for ((name, config), (_, mean, std)) in entries.iter().zip(&finals) {
                let policy = name.rsplit('_').next().unwrap();
                let row = format!(
                    "{},{},{},{}\n",
                    format_value(config.p_comp),
                    policy,
                    format_value(*mean),
                    format_value(*std)
                );
                file.write_all(row.as_bytes())?;
            }
        }
        _ => {}
    }
    Ok(())
}
