//! The frozen figure manifest (`figures.toml`).

use serde::Deserialize;

use qsl_core::channels::{ChannelConfig, ChannelKind};
use qsl_core::hermitian::DensityMatrix;
use qsl_core::qsl::{Method, NormKind, QslRequest};
use qsl_core::states::StateSpec;

use crate::error::CliError;

pub const MANIFEST: &str = include_str!("../figures.toml");

/// Default κτ grid for figures and the witness.
pub const DEFAULT_GRID: &str = "0.05:20:200";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axes {
    KappaTau,
    Parametric,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Figure {
    pub id: String,
    pub title: String,
    pub method: String,
    pub norm: Option<String>,
    pub tau: f64,
    pub axes: Axes,
    pub curves: Vec<Curve>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Curve {
    pub label: String,
    pub state: String,
    pub channel: String,
    #[serde(default = "one")]
    pub kappa: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub c: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
struct Manifest {
    figure: Vec<Figure>,
}

pub fn figures() -> Vec<Figure> {
    let m: Manifest = toml::from_str(MANIFEST).expect("figures.toml is valid");
    m.figure
}

/// Expands a figure id or group (fig1, fig3, all) into figures, in manifest order.
pub fn select(id: &str) -> Result<Vec<Figure>, CliError> {
    let all = figures();
    let id = id.trim().to_ascii_lowercase();
    let chosen: Vec<Figure> = match id.as_str() {
        "all" => all,
        "fig1" | "fig3" => all.into_iter().filter(|f| f.id.len() == 5 && f.id.starts_with(&id)).collect(),
        _ => all.into_iter().filter(|f| f.id == id).collect(),
    };
    if chosen.is_empty() {
        let known: Vec<String> = figures().into_iter().map(|f| f.id).collect();
        return Err(CliError::Usage(format!(
            "unknown figure `{id}` (known: {}, or the groups fig1, fig3, all)",
            known.join(", ")
        )));
    }
    Ok(chosen)
}

impl Figure {
    pub fn request(&self) -> Result<QslRequest, CliError> {
        let method: Method = self.method.parse().map_err(usage)?;
        let norm: NormKind = self.norm.as_deref().unwrap_or("op").parse().map_err(usage)?;
        Ok(QslRequest::for_method(method, self.tau, norm))
    }
}

impl Curve {
    pub fn channel(&self) -> Result<ChannelConfig, CliError> {
        let kind: ChannelKind = self.channel.parse().map_err(usage)?;
        ChannelConfig::new(kind, self.kappa, self.lambda, self.c).map_err(usage)
    }

    pub fn state(&self) -> Result<DensityMatrix, CliError> {
        self.state.parse::<StateSpec>().and_then(|s| s.build()).map_err(usage)
    }
}

fn usage(e: qsl_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}
