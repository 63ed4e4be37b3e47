//! Grouping GHZ-pair states by their τ_QSL(κτ) curves under local amplitude damping.
//!
//! A pair (|b⟩ ± |b̄⟩)/√2 whose string b has r ones is indistinguishable from every
//! pair with r or n − r ones, so the groups should have sizes C(n, r) for r < n/2
//! and C(n, n/2)/2 for r = n/2.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use qsl_core::channels::{ChannelConfig, ChannelKind};
use qsl_core::qsl::{trajectory_kappa_tau, NormKind, QslRequest};
use qsl_core::states::{ghz_state, GhzIndex};

use crate::args::{ConfigFile, WitnessArgs};
use crate::commands::{channel_config, grid_or_default};
use crate::error::CliError;
use crate::format::{fmt_g, Csv};
use crate::{Output, Settings};

/// Curves closer than this fraction of the largest τ_QSL are treated as identical.
pub const GROUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCurve {
    pub label: String,
    pub ghz: GhzIndex,
    pub tau_qsl: Vec<f64>,
}

impl WitnessCurve {
    /// min(r, n − r) for the pair's bit strings.
    pub fn class(&self) -> usize {
        let r = self.ghz.excitations();
        r.min(self.ghz.n_qubits - r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessVerdict {
    /// Labels per group, in order of first appearance.
    pub groups: Vec<Vec<String>>,
    /// min(r, n − r) of each group's members, or None when a group mixes classes.
    pub group_class: Vec<Option<usize>>,
    pub intra_group_max_dev: f64,
    /// Smallest, over pairs of groups, of the largest pointwise difference between them.
    pub inter_group_min_gap: f64,
    /// r → (observed group size, expected count).
    pub degeneracies: BTreeMap<usize, (usize, usize)>,
    pub consistent: bool,
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Expected number of GHZ pairs (one sign) in class r.
pub fn expected_count(n: usize, r: usize) -> usize {
    if 2 * r == n {
        binomial(n, r) / 2
    } else {
        binomial(n, r)
    }
}

fn label(g: &GhzIndex) -> String {
    if g.n_qubits == 2 {
        let base = if g.index == 1 { "phi" } else { "psi" };
        format!("{base}{}", if g.plus { '+' } else { '-' })
    } else {
        g.label()
    }
}

pub fn witness_curves(
    n_qubits: usize,
    cfg: &ChannelConfig,
    req: &QslRequest,
    grid: &[f64],
    tau: f64,
    both_signs: bool,
) -> Result<Vec<WitnessCurve>, CliError> {
    let bad = |e: qsl_core::Error| CliError::Usage(e.to_string());
    let mut members = Vec::new();
    for index in 1..=(1usize << (n_qubits.max(1) - 1)) {
        members.push(GhzIndex::new(n_qubits, index, true).map_err(bad)?);
        if both_signs {
            members.push(GhzIndex::new(n_qubits, index, false).map_err(bad)?);
        }
    }
    members
        .par_iter()
        .map(|g| {
            let rho0 = ghz_state(*g).map_err(bad)?;
            let points = trajectory_kappa_tau(&rho0, cfg, req, grid, tau)
                .map_err(CliError::numeric(format!("witness {}", label(g))))?;
            Ok(WitnessCurve { label: label(g), ghz: *g, tau_qsl: points.iter().map(|p| p.tau_qsl).collect() })
        })
        .collect()
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn group_curves(curves: &[WitnessCurve], both_signs: bool) -> WitnessVerdict {
    let scale = curves.iter().flat_map(|c| c.tau_qsl.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = GROUP_TOL * scale.max(f64::MIN_POSITIVE);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        match groups.iter_mut().find(|g| max_dev(&curves[g[0]].tau_qsl, &c.tau_qsl) < tol) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }

    let mut intra = 0.0f64;
    for g in &groups {
        for &a in g {
            for &b in g {
                intra = intra.max(max_dev(&curves[a].tau_qsl, &curves[b].tau_qsl));
            }
        }
    }
    let mut inter = f64::INFINITY;
    for (i, gi) in groups.iter().enumerate() {
        for gj in &groups[i + 1..] {
            inter = inter.min(max_dev(&curves[gi[0]].tau_qsl, &curves[gj[0]].tau_qsl));
        }
    }

    let group_class: Vec<Option<usize>> = groups
        .iter()
        .map(|g| {
            let r = curves[g[0]].class();
            g.iter().all(|&i| curves[i].class() == r).then_some(r)
        })
        .collect();
    let n = curves.first().map_or(0, |c| c.ghz.n_qubits);
    let signs = if both_signs { 2 } else { 1 };
    let mut degeneracies = BTreeMap::new();
    for r in 0..=n / 2 {
        degeneracies.insert(r, (0, signs * expected_count(n, r)));
    }
    let mut distinct = true;
    for (g, class) in groups.iter().zip(&group_class) {
        if let Some(r) = class {
            let entry = degeneracies.entry(*r).or_insert((0, 0));
            distinct &= entry.0 == 0;
            entry.0 = g.len();
        }
    }
    let consistent =
        distinct && group_class.iter().all(Option::is_some) && degeneracies.values().all(|(obs, exp)| obs == exp);

    WitnessVerdict {
        groups: groups.iter().map(|g| g.iter().map(|&i| curves[i].label.clone()).collect()).collect(),
        group_class,
        intra_group_max_dev: intra,
        inter_group_min_gap: inter,
        degeneracies,
        consistent,
    }
}

pub fn command(args: &WitnessArgs, settings: &Settings, config: &ConfigFile) -> Result<Output, CliError> {
    let n = args.qubits.or(config.qubits).unwrap_or(3);
    if !(2..=4).contains(&n) {
        return Err(CliError::Usage(format!("--qubits must be 2, 3 or 4, got {n}")));
    }
    let cfg = channel_config(&args.channel.merged(config), Some(ChannelKind::Nmad))?;
    if cfg.kind != ChannelKind::Nmad {
        return Err(CliError::Usage(format!("the witness needs the nmad channel, got {}", cfg.kind)));
    }
    let tau = args.tau.or(config.tau).unwrap_or(if n == 2 { 1.0 } else { std::f64::consts::FRAC_PI_4 });
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(CliError::Usage(format!("--tau must be positive, got {tau}")));
    }
    let norm: NormKind =
        args.norm.clone().or_else(|| config.norm.clone()).as_deref().unwrap_or("op").parse().map_err(|e: qsl_core::Error| CliError::Usage(e.to_string()))?;
    let spec = grid_or_default(settings);
    let grid = spec.values();
    let req = QslRequest::bures(tau, norm);
    let curves = witness_curves(n, &cfg, &req, &grid, tau, args.both_signs)?;
    let v = group_curves(&curves, args.both_signs);

    let mut s = String::new();
    let _ = writeln!(s, "qubits = {n}");
    let _ = writeln!(s, "channel = {cfg}");
    let _ = writeln!(s, "tau = {}", fmt_g(tau));
    let _ = writeln!(s, "norm = {norm}");
    let _ = writeln!(s, "grid = {spec}");
    for (i, (g, class)) in v.groups.iter().zip(&v.group_class).enumerate() {
        let r = class.map_or("mixed".to_string(), |r| r.to_string());
        let _ = writeln!(s, "group {} (r = {r}): {}", i + 1, g.join(" "));
    }
    let _ = writeln!(s, "intra_group_max_dev = {}", fmt_g(v.intra_group_max_dev));
    let _ = writeln!(s, "inter_group_min_gap = {}", fmt_g(v.inter_group_min_gap));
    for (r, (obs, exp)) in &v.degeneracies {
        let _ = writeln!(s, "degeneracy r = {r}: observed {obs}, expected {exp}");
    }
    let _ = writeln!(s, "consistent = {}", v.consistent);

    let mut out = Output { files: Vec::new(), stdout: s };
    if settings.out.is_some() {
        let mut header = vec!["kappa_tau".to_string()];
        header.extend(curves.iter().map(|c| c.label.clone()));
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut csv = Csv::new(&refs);
        for (i, &t) in grid.iter().enumerate() {
            let mut row = vec![t];
            row.extend(curves.iter().map(|c| c.tau_qsl[i]));
            csv.row(&row);
        }
        out.files.push((PathBuf::from(format!("witness_n{n}.csv")), csv.into_string()));
    }
    Ok(out)
}
