//! Command-line flags, the optional TOML config file, and the merge of the two.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qsl", version, about = "Quantum speed limit times under non-Markovian channels")]
pub struct Cli {
    /// Output directory (compute writes to stdout when absent).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Grid of κτ values as min:max:points.
    #[arg(long, global = true, value_name = "MIN:MAX:POINTS")]
    pub grid: Option<String>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// τ_QSL, Cl1, S_l and M_Cl of one state over a κτ grid.
    Compute(ComputeArgs),
    /// Reproduce a figure as CSV files plus a plot script.
    Figure(FigureArgs),
    /// Group GHZ states by their τ_QSL curves under amplitude damping.
    Witness(WitnessArgs),
    /// Negative-rate intervals and the self-similarity measure of a channel.
    Nonmarkov(NonmarkovArgs),
    /// Run the invariant suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ChannelArgs {
    /// oun, rtn or nmad.
    #[arg(long)]
    pub channel: Option<String>,
    /// Coupling rate κ (default 1).
    #[arg(long)]
    pub kappa: Option<f64>,
    /// OUN memory rate or NMAD spectral width (default 0.1κ).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// RTN coupling c (default 0.6κ, alias --a).
    #[arg(long, alias = "a")]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// State spec, e.g. bloch:1,0,0, bell:phi+, ghz:3,2,+, werner:0.5,bell:psi-, mcb:phi+, mcbw:0.5,phi+.
    #[arg(long)]
    pub state: Option<String>,
    /// rp or bures.
    #[arg(long)]
    pub method: Option<String>,
    /// op, hs or tr (Bures only).
    #[arg(long)]
    pub norm: Option<String>,
    /// Physical driving time τ.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Evaluate the generator on the initial or evolved state.
    #[arg(long, value_name = "initial|evolved")]
    pub generator: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// fig1a..fig7, a group (fig1, fig3, all), or `list`.
    pub id: String,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Number of qubits (2, 3 or 4).
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Driving time (default 1 for two qubits, π/4 otherwise).
    #[arg(long)]
    pub tau: Option<f64>,
    /// op, hs or tr (default op).
    #[arg(long)]
    pub norm: Option<String>,
    /// Include the − member of every GHZ pair.
    #[arg(long)]
    pub both_signs: bool,
}

#[derive(Debug, Clone, Args)]
pub struct NonmarkovArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Time horizon T in units of 1/κ.
    #[arg(long)]
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Run only properties whose name contains this string.
    #[arg(long)]
    pub filter: Option<String>,
    /// Deliberately corrupt the computation to check that the suite notices (pt-sign).
    #[arg(long, value_name = "FAULT")]
    pub inject_fault: Option<String>,
    /// Print the property names and exit.
    #[arg(long)]
    pub list: bool,
}

/// Contents of a `--config` file. Every key mirrors a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub out: Option<PathBuf>,
    pub grid: Option<String>,
    pub threads: Option<usize>,
    pub channel: Option<String>,
    pub kappa: Option<f64>,
    pub lambda: Option<f64>,
    #[serde(alias = "a")]
    pub c: Option<f64>,
    pub state: Option<String>,
    pub method: Option<String>,
    pub norm: Option<String>,
    pub tau: Option<f64>,
    pub generator: Option<String>,
    pub qubits: Option<usize>,
    pub horizon: Option<f64>,
    pub filter: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

impl ChannelArgs {
    /// Flags first, then the config file.
    pub fn merged(&self, cfg: &ConfigFile) -> ChannelArgs {
        ChannelArgs {
            channel: self.channel.clone().or_else(|| cfg.channel.clone()),
            kappa: self.kappa.or(cfg.kappa),
            lambda: self.lambda.or(cfg.lambda),
            c: self.c.or(cfg.c),
        }
    }
}

/// Linear grid parsed from `min:max:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("bad --grid `{s}`: {why} (expected min:max:points)"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("need three fields"));
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad("min is not a number"))?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad("max is not a number"))?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad("points is not a positive integer"))?;
        if !(min.is_finite() && max.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if min <= 0.0 {
            return Err(bad("min must be positive; the bound at κτ = 0 exists only as a limit"));
        }
        if points < 2 {
            return Err(bad("need at least 2 points"));
        }
        if max <= min {
            return Err(bad("max must exceed min"));
        }
        Ok(Self { min, max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points)
            .map(|i| if i == n { self.max } else { self.min + (self.max - self.min) * i as f64 / n as f64 })
            .collect()
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.points)
    }
}
